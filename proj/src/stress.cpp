#include "casimir/stress.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace casimir {

namespace {

using FC = FieldComp;

const std::vector<StressTerm> kTMx = {
    {+0.5, true, FC::Hx, FC::Hx}, {-0.5, true, FC::Hy, FC::Hy}, {-0.5, false, FC::Ez, FC::Ez}};
const std::vector<StressTerm> kTEx = {
    {+0.5, false, FC::Ex, FC::Ex}, {-0.5, false, FC::Ey, FC::Ey}, {-0.5, true, FC::Hz, FC::Hz}};
const std::vector<StressTerm> kTMy = {{1.0, true, FC::Hx, FC::Hy}};
const std::vector<StressTerm> kTEy = {{1.0, false, FC::Ex, FC::Ey}};
const std::vector<StressTerm> k1Dx = {{-0.5, false, FC::Ey, FC::Ey}, {-0.5, true, FC::Hz, FC::Hz}};
const std::vector<StressTerm> kNone = {};

}  // namespace

const std::vector<StressTerm>& stress_terms(Polarization pol, char face, bool two_d) {
  if (!two_d) return face == 'x' ? k1Dx : kNone;
  if (face == 'x') return pol == Polarization::TM ? kTMx : kTEx;
  if (face == 'y') return pol == Polarization::TM ? kTMy : kTEy;
  return kNone;
}

namespace {

std::string sample_key(const SampleList& s) {
  std::string k;
  char buf[64];
  for (const Sample& a : s) {
    std::snprintf(buf, sizeof buf, "%d:%d:%d:%.17g;", static_cast<int>(a.comp), a.i, a.j, a.w);
    k += buf;
  }
  return k;
}

struct SimJob {
  SampleList src, prb;
};

}  // namespace

StressTrace assemble_stress_trace(const PECMask& mask, const StressSurface& surf,
                                  Polarization pol, const SimParams& prm,
                                  const AssembleOptions& opt) {
  // canonical point order: by face, then x, then y
  std::vector<SurfacePoint> pts = surf.points;
  std::sort(pts.begin(), pts.end(), [](const SurfacePoint& a, const SurfacePoint& b) {
    if (a.face != b.face) return a.face < b.face;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });

  struct Task {
    double c = 0;        // coef * sgn
    bool magnetic = false;
    int sim0 = -1, sim1 = -1;  // sim1 >= 0: average of the two orderings
  };
  std::vector<SimJob> jobs;
  std::map<std::string, int> seen;
  auto intern = [&](const SampleList& src, const SampleList& prb) {
    std::string key = sample_key(src) + "|" + sample_key(prb);
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    const int id = static_cast<int>(jobs.size());
    jobs.push_back({src, prb});
    seen.emplace(std::move(key), id);
    return id;
  };

  std::vector<Task> tasks;
  for (const SurfacePoint& p : pts) {
    for (const StressTerm& t : stress_terms(pol, p.face, mask.two_d)) {
      Task task;
      task.c = t.coef * p.sgn;
      task.magnetic = t.magnetic;
      const SampleList sa = sample_points(t.a, p.x, p.y, mask.two_d);
      if (t.a == t.b) {
        task.sim0 = intern(sa, sa);
      } else {
        const SampleList sb = sample_points(t.b, p.x, p.y, mask.two_d);
        task.sim0 = intern(sa, sb);
        task.sim1 = intern(sb, sa);
      }
      tasks.push_back(task);
    }
  }

  // run every unique simulation (optionally in parallel)
  std::vector<std::vector<double>> results(jobs.size());
  std::vector<char> job_converged(jobs.size(), 1);
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        ImpulseResponse r = run_impulse_response(mask, pol, jobs[i].src, {jobs[i].prb}, prm);
        results[i] = std::move(r.probes[0]);
        job_converged[i] = r.converged ? 1 : 0;
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(opt.jobs, static_cast<int>(jobs.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);

  StressTrace tr;
  tr.dt = prm.dt;
  tr.sigma = prm.sigma;
  tr.n_steps = prm.max_steps;
  tr.sims_run = static_cast<int>(jobs.size());
  tr.gamma_E.assign(static_cast<size_t>(prm.max_steps), 0.0);
  tr.gamma_H.assign(static_cast<size_t>(prm.max_steps), 0.0);
  for (char c : job_converged)
    if (!c) tr.converged = false;

  for (const Task& t : tasks) {
    std::vector<double>& dst = t.magnetic ? tr.gamma_H : tr.gamma_E;
    const std::vector<double>& r0 = results[static_cast<size_t>(t.sim0)];
    if (t.sim1 < 0) {
      for (int k = 0; k < prm.max_steps; ++k) dst[static_cast<size_t>(k)] += t.c * r0[static_cast<size_t>(k)];
    } else {
      const std::vector<double>& r1 = results[static_cast<size_t>(t.sim1)];
      for (int k = 0; k < prm.max_steps; ++k)
        dst[static_cast<size_t>(k)] += t.c * 0.5 * (r0[static_cast<size_t>(k)] + r1[static_cast<size_t>(k)]);
    }
  }

  if (opt.raw_dump_path) {
    std::ofstream f(*opt.raw_dump_path);
    f << "sim,step,value\n";
    for (size_t i = 0; i < results.size(); ++i)
      for (size_t k = 0; k < results[i].size(); ++k) {
        char line[80];
        std::snprintf(line, sizeof line, "%zu,%zu,%.12g\n", i, k, results[i][k]);
        f << line;
      }
  }
  if (opt.dump_path) {
    std::ofstream f(*opt.dump_path);
    f << "step,gamma_E,gamma_H\n";
    for (int k = 0; k < prm.max_steps; ++k) {
      char line[96];
      std::snprintf(line, sizeof line, "%d,%.12g,%.12g\n", k, tr.gamma_E[static_cast<size_t>(k)],
                    tr.gamma_H[static_cast<size_t>(k)]);
      f << line;
    }
  }
  return tr;
}

}  // namespace casimir
