#include "casimir/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace casimir {

namespace {

bool is_electric(FieldComp c) {
  return c == FieldComp::Ez || c == FieldComp::Ex || c == FieldComp::Ey;
}

void check_courant(bool two_d, double dt) {
  const double limit = two_d ? 1.0 / std::sqrt(2.0) : 1.0;
  if (!(dt > 0) || dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument(two_d
        ? "dt exceeds the 2D Courant limit 1/sqrt(2)"
        : "dt exceeds the 1D Courant limit 1");
}

}  // namespace

// ----------------------------------------------------------------- Sim1D

Sim1D::Sim1D(const PECMask& mask, double sigma, double dt) : nx_(mask.nx), dt_(dt) {
  if (mask.two_d) throw std::invalid_argument("Sim1D requires a 1D mask");
  check_courant(false, dt);
  const double s = 0.5 * sigma * dt;
  ca_ = (1.0 - s) / (1.0 + s);
  cb_ = dt / (1.0 + s);
  e.assign(static_cast<size_t>(nx_) + 1, 0.0);
  h.assign(static_cast<size_t>(nx_), 0.0);
  for (int i = 0; i <= nx_; ++i)
    if (mask.node.at(i, 0)) masked_.push_back(i);
}

void Sim1D::step_h() {
  for (int i = 0; i < nx_; ++i) h[i] -= dt_ * (e[i + 1] - e[i]);
}

void Sim1D::step_e() {
  // (curl H)_y = -dHz/dx at interior nodes; boundary nodes are masked anyway
  for (int i = 1; i < nx_; ++i) e[i] = ca_ * e[i] + cb_ * (-(h[i] - h[i - 1]));
  e[0] = ca_ * e[0];
  e[nx_] = ca_ * e[nx_];
  apply_mask();
}

void Sim1D::apply_mask() {
  for (int i : masked_) e[i] = 0.0;
}

double Sim1D::probe(const SampleList& p) const {
  double acc = 0.0;
  for (const Sample& s : p)
    acc += s.w * (is_electric(s.comp) ? e[s.i] : h[s.i]);
  return acc;
}

// ----------------------------------------------------------------- SimTM

SimTM::SimTM(const PECMask& mask, double sigma, double dt)
    : nx(mask.nx), ny(mask.ny), dt_(dt) {
  if (!mask.two_d) throw std::invalid_argument("SimTM requires a 2D mask");
  check_courant(true, dt);
  const double s = 0.5 * sigma * dt;
  ca_ = (1.0 - s) / (1.0 + s);
  cb_ = dt / (1.0 + s);
  ez.assign(static_cast<size_t>(nx + 1) * (ny + 1), 0.0);
  hx.assign(static_cast<size_t>(nx + 1) * ny, 0.0);
  hy.assign(static_cast<size_t>(nx) * (ny + 1), 0.0);
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      if (mask.node.at(i, j)) masked_.push_back(i * (ny + 1) + j);
}

void SimTM::step_h() {
  for (int i = 0; i <= nx; ++i) {
    const double* ezr = &ez[static_cast<size_t>(i) * (ny + 1)];
    double* hxr = &hx[static_cast<size_t>(i) * ny];
    for (int j = 0; j < ny; ++j) hxr[j] -= dt_ * (ezr[j + 1] - ezr[j]);
  }
  for (int i = 0; i < nx; ++i) {
    const double* e0 = &ez[static_cast<size_t>(i) * (ny + 1)];
    const double* e1 = &ez[static_cast<size_t>(i + 1) * (ny + 1)];
    double* hyr = &hy[static_cast<size_t>(i) * (ny + 1)];
    for (int j = 0; j <= ny; ++j) hyr[j] += dt_ * (e1[j] - e0[j]);
  }
}

void SimTM::step_e() {
  for (int i = 1; i < nx; ++i) {
    double* ezr = &ez[static_cast<size_t>(i) * (ny + 1)];
    const double* hxr = &hx[static_cast<size_t>(i) * ny];
    const double* hy0 = &hy[static_cast<size_t>(i - 1) * (ny + 1)];
    const double* hy1 = &hy[static_cast<size_t>(i) * (ny + 1)];
    for (int j = 1; j < ny; ++j) {
      const double curl = (hy1[j] - hy0[j]) - (hxr[j] - hxr[j - 1]);
      ezr[j] = ca_ * ezr[j] + cb_ * curl;
    }
  }
  apply_mask();
}

void SimTM::apply_mask() {
  for (std::int32_t idx : masked_) ez[static_cast<size_t>(idx)] = 0.0;
}

double SimTM::probe(const SampleList& p) const {
  double acc = 0.0;
  for (const Sample& s : p) {
    switch (s.comp) {
      case FieldComp::Ez: acc += s.w * ez[static_cast<size_t>(s.i) * (ny + 1) + s.j]; break;
      case FieldComp::Hx: acc += s.w * hx[static_cast<size_t>(s.i) * ny + s.j]; break;
      case FieldComp::Hy: acc += s.w * hy[static_cast<size_t>(s.i) * (ny + 1) + s.j]; break;
      default: throw std::invalid_argument("TM probe must sample Ez, Hx, or Hy");
    }
  }
  return acc;
}

// ----------------------------------------------------------------- SimTE

SimTE::SimTE(const PECMask& mask, double sigma, double dt)
    : nx(mask.nx), ny(mask.ny), dt_(dt) {
  if (!mask.two_d) throw std::invalid_argument("SimTE requires a 2D mask");
  check_courant(true, dt);
  const double s = 0.5 * sigma * dt;
  ca_ = (1.0 - s) / (1.0 + s);
  cb_ = dt / (1.0 + s);
  hz.assign(static_cast<size_t>(nx) * ny, 0.0);
  ex.assign(static_cast<size_t>(nx) * (ny + 1), 0.0);
  ey.assign(static_cast<size_t>(nx + 1) * ny, 0.0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j)
      if (mask.ex.at(i, j)) masked_ex_.push_back(i * (ny + 1) + j);
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (mask.ey.at(i, j)) masked_ey_.push_back(i * ny + j);
}

void SimTE::step_h() {
  // dHz/dt = -(dEy/dx - dEx/dy)
  for (int i = 0; i < nx; ++i) {
    double* hzr = &hz[static_cast<size_t>(i) * ny];
    const double* ey0 = &ey[static_cast<size_t>(i) * ny];
    const double* ey1 = &ey[static_cast<size_t>(i + 1) * ny];
    const double* exr = &ex[static_cast<size_t>(i) * (ny + 1)];
    for (int j = 0; j < ny; ++j)
      hzr[j] -= dt_ * ((ey1[j] - ey0[j]) - (exr[j + 1] - exr[j]));
  }
}

void SimTE::step_e() {
  // dEx/dt = +dHz/dy - sigma Ex ; dEy/dt = -dHz/dx - sigma Ey
  for (int i = 0; i < nx; ++i) {
    double* exr = &ex[static_cast<size_t>(i) * (ny + 1)];
    const double* hzr = &hz[static_cast<size_t>(i) * ny];
    for (int j = 1; j < ny; ++j)
      exr[j] = ca_ * exr[j] + cb_ * (hzr[j] - hzr[j - 1]);
    exr[0] = ca_ * exr[0];
    exr[ny] = ca_ * exr[ny];
  }
  for (int i = 1; i < nx; ++i) {
    double* eyr = &ey[static_cast<size_t>(i) * ny];
    const double* hz0 = &hz[static_cast<size_t>(i - 1) * ny];
    const double* hz1 = &hz[static_cast<size_t>(i) * ny];
    for (int j = 0; j < ny; ++j)
      eyr[j] = ca_ * eyr[j] - cb_ * (hz1[j] - hz0[j]);
  }
  {
    double* ey0 = &ey[0];
    double* eyn = &ey[static_cast<size_t>(nx) * ny];
    for (int j = 0; j < ny; ++j) {
      ey0[j] = ca_ * ey0[j];
      eyn[j] = ca_ * eyn[j];
    }
  }
  apply_mask();
}

void SimTE::apply_mask() {
  for (std::int32_t idx : masked_ex_) ex[static_cast<size_t>(idx)] = 0.0;
  for (std::int32_t idx : masked_ey_) ey[static_cast<size_t>(idx)] = 0.0;
}

double SimTE::probe(const SampleList& p) const {
  double acc = 0.0;
  for (const Sample& s : p) {
    switch (s.comp) {
      case FieldComp::Hz: acc += s.w * hz[static_cast<size_t>(s.i) * ny + s.j]; break;
      case FieldComp::Ex: acc += s.w * ex[static_cast<size_t>(s.i) * (ny + 1) + s.j]; break;
      case FieldComp::Ey: acc += s.w * ey[static_cast<size_t>(s.i) * ny + s.j]; break;
      default: throw std::invalid_argument("TE probe must sample Hz, Ex, or Ey");
    }
  }
  return acc;
}

// ------------------------------------------------------------ decay test

bool series_decayed(const std::vector<double>& x, double tail_tol) {
  if (x.empty()) return true;
  const size_t n = x.size();
  const size_t w = std::max<size_t>(1, n / 20);
  double mu = 0.0;
  bool flat = true;
  for (size_t k = n - w; k < n; ++k) {
    mu += x[k];
    flat = flat && x[k] == x[n - 1];
  }
  mu /= static_cast<double>(w);
  // an exactly constant tail is settled regardless of the mean's roundoff
  if (flat) mu = x[n - 1];
  double gmax = 0.0, tmax = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double d = std::abs(x[k] - mu);
    gmax = std::max(gmax, d);
    if (k >= n - w) tmax = std::max(tmax, d);
  }
  if (gmax == 0.0) return true;
  return tmax <= tail_tol * gmax;
}

// ---------------------------------------------------------------- driver

namespace {

template <class Engine>
ImpulseResponse drive(Engine& sim, bool electric_src, double deposit_scale,
                      const SampleList& source, const std::vector<SampleList>& probes,
                      const SimParams& prm, void (*add_src)(Engine&, const Sample&, bool, double)) {
  ImpulseResponse out;
  out.probes.assign(probes.size(), std::vector<double>(static_cast<size_t>(prm.max_steps), 0.0));
  std::vector<int> checkpoints;
  if (prm.early_stop) {
    for (int q = 1; q <= 3; ++q) {
      const int c = static_cast<int>((static_cast<long>(prm.max_steps) * q) / 4);
      if (c > 0 && c < prm.max_steps) checkpoints.push_back(c);
    }
  }
  checkpoints.push_back(prm.max_steps);

  int k = 0;
  for (int cp : checkpoints) {
    for (; k < cp; ++k) {
      sim.step_h();
      if (k == 0 && !electric_src)
        for (const Sample& s : source) add_src(sim, s, false, deposit_scale);
      sim.step_e();
      if (k == 0 && electric_src) {
        for (const Sample& s : source) add_src(sim, s, true, deposit_scale);
        sim.apply_mask();
      }
      for (size_t p = 0; p < probes.size(); ++p)
        out.probes[p][static_cast<size_t>(k)] = sim.probe(probes[p]);
    }
    bool all_decayed = true;
    for (size_t p = 0; p < probes.size(); ++p) {
      std::vector<double> head(out.probes[p].begin(), out.probes[p].begin() + k);
      if (!series_decayed(head, prm.tail_tol)) {
        all_decayed = false;
        break;
      }
    }
    if (all_decayed) {
      out.n_used = k;
      out.converged = true;
      // extend every series to max_steps with its trailing mean
      for (auto& s : out.probes) {
        const int w = std::max(1, k / 20);
        double mu = 0.0;
        for (int q = k - w; q < k; ++q) mu += s[static_cast<size_t>(q)];
        mu /= w;
        for (int q = k; q < prm.max_steps; ++q) s[static_cast<size_t>(q)] = mu;
      }
      return out;
    }
  }
  out.n_used = prm.max_steps;
  out.converged = false;
  if (prm.require_decay)
    throw std::runtime_error("non-decaying run: response failed the decay criterion at max_steps");
  return out;
}

}  // namespace

ImpulseResponse run_impulse_response(const PECMask& mask, Polarization pol,
                                     const SampleList& source,
                                     const std::vector<SampleList>& probes,
                                     const SimParams& prm) {
  if (source.empty()) throw std::invalid_argument("impulse source must be non-empty");
  const bool electric_src = is_electric(source.front().comp);
  for (const Sample& s : source)
    if (is_electric(s.comp) != electric_src)
      throw std::invalid_argument("impulse source must not mix electric and magnetic samples");

  if (!mask.two_d) {
    Sim1D sim(mask, prm.sigma, prm.dt);
    auto add = +[](Sim1D& s, const Sample& smp, bool electric, double cb) {
      if (electric)
        s.e[smp.i] -= cb * smp.w;   // cb * (w / dt) with the dt folded into cb scale
      else
        s.h[smp.i] -= smp.w;
    };
    return drive(sim, electric_src, sim.cb() / prm.dt, source, probes, prm, add);
  }
  if (pol == Polarization::TM) {
    SimTM sim(mask, prm.sigma, prm.dt);
    auto add = +[](SimTM& s, const Sample& smp, bool electric, double cb) {
      if (electric) {
        if (smp.comp != FieldComp::Ez) throw std::invalid_argument("TM electric source must be Ez");
        s.EZ(smp.i, smp.j) -= cb * smp.w;
      } else if (smp.comp == FieldComp::Hx) {
        s.HX(smp.i, smp.j) -= smp.w;
      } else if (smp.comp == FieldComp::Hy) {
        s.HY(smp.i, smp.j) -= smp.w;
      } else {
        throw std::invalid_argument("TM magnetic source must be Hx or Hy");
      }
    };
    return drive(sim, electric_src, sim.cb() / prm.dt, source, probes, prm, add);
  }
  SimTE sim(mask, prm.sigma, prm.dt);
  auto add = +[](SimTE& s, const Sample& smp, bool electric, double cb) {
    if (electric) {
      if (smp.comp == FieldComp::Ex)
        s.EX(smp.i, smp.j) -= cb * smp.w;
      else if (smp.comp == FieldComp::Ey)
        s.EY(smp.i, smp.j) -= cb * smp.w;
      else
        throw std::invalid_argument("TE electric source must be Ex or Ey");
    } else {
      if (smp.comp != FieldComp::Hz) throw std::invalid_argument("TE magnetic source must be Hz");
      s.HZ(smp.i, smp.j) -= smp.w;
    }
  };
  return drive(sim, electric_src, sim.cb() / prm.dt, source, probes, prm, add);
}

// --------------------------------------------------------------- energy

std::vector<double> run_energy_series(const PECMask& mask, Polarization pol,
                                      double sigma, double dt, int n_steps, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n_steps));

  if (!mask.two_d) {
    Sim1D sim(mask, sigma, dt);
    for (double& v : sim.e) v = gauss(rng);
    for (double& v : sim.h) v = gauss(rng);
    sim.apply_mask();
    std::vector<double> hprev;
    for (int k = 0; k < n_steps; ++k) {
      hprev = sim.h;
      sim.step_h();
      double u = 0.0;
      for (double v : sim.e) u += 0.5 * v * v;
      for (size_t i = 0; i < sim.h.size(); ++i) u += 0.5 * sim.h[i] * hprev[i];
      out.push_back(u);
      sim.step_e();
    }
    return out;
  }
  if (pol == Polarization::TM) {
    SimTM sim(mask, sigma, dt);
    for (double& v : sim.ez) v = gauss(rng);
    for (double& v : sim.hx) v = gauss(rng);
    for (double& v : sim.hy) v = gauss(rng);
    sim.apply_mask();
    std::vector<double> hx0, hy0;
    for (int k = 0; k < n_steps; ++k) {
      hx0 = sim.hx;
      hy0 = sim.hy;
      sim.step_h();
      double u = 0.0;
      for (double v : sim.ez) u += 0.5 * v * v;
      for (size_t i = 0; i < sim.hx.size(); ++i) u += 0.5 * sim.hx[i] * hx0[i];
      for (size_t i = 0; i < sim.hy.size(); ++i) u += 0.5 * sim.hy[i] * hy0[i];
      out.push_back(u);
      sim.step_e();
    }
    return out;
  }
  SimTE sim(mask, sigma, dt);
  for (double& v : sim.hz) v = gauss(rng);
  for (double& v : sim.ex) v = gauss(rng);
  for (double& v : sim.ey) v = gauss(rng);
  sim.apply_mask();
  std::vector<double> hz0;
  for (int k = 0; k < n_steps; ++k) {
    hz0 = sim.hz;
    sim.step_h();
    double u = 0.0;
    for (double v : sim.ex) u += 0.5 * v * v;
    for (double v : sim.ey) u += 0.5 * v * v;
    for (size_t i = 0; i < sim.hz.size(); ++i) u += 0.5 * sim.hz[i] * hz0[i];
    out.push_back(u);
    sim.step_e();
  }
  return out;
}

}  // namespace casimir
