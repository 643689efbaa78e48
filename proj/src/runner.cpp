#include "casimir/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "casimir/fdtd.hpp"
#include "casimir/force.hpp"
#include "casimir/reference.hpp"
#include "casimir/stress.hpp"
#include "casimir/weights.hpp"

namespace casimir {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  std::tm tmv{};
  gmtime_r(&t, &tmv);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tmv);
  return buf;
}

const char* kind_name(GeometryKind k) {
  switch (k) {
    case GeometryKind::ParallelPlates1D: return "parallel_plates_1d";
    case GeometryKind::Piston2D: return "piston_2d";
    case GeometryKind::CustomRectangles2D: return "custom_rectangles_2d";
  }
  return "?";
}

struct GeomPoint {
  int a = 0;                     // physical gap
  std::optional<int> d;          // physical sidewall separation (piston only)
  bool has_d = false;
  double d_sort() const { return d ? static_cast<double>(*d) : std::numeric_limits<double>::infinity(); }
  std::string d_str() const { return !has_d ? "" : (d ? std::to_string(*d) : "inf"); }
};

std::vector<GeomPoint> enumerate_points(const RunConfig& cfg) {
  std::vector<GeomPoint> pts;
  std::vector<int> as = cfg.a_list;
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
  if (cfg.kind == GeometryKind::ParallelPlates1D) {
    for (int a : as) pts.push_back({a, std::nullopt, false});
    return pts;
  }
  std::vector<std::optional<int>> ds = cfg.d_list;
  std::sort(ds.begin(), ds.end(), [](const auto& x, const auto& y) {
    const double xv = x ? *x : std::numeric_limits<double>::infinity();
    const double yv = y ? *y : std::numeric_limits<double>::infinity();
    return xv < yv;
  });
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  for (int a : as)
    for (const auto& d : ds) pts.push_back({a, d, true});
  return pts;
}

// lattice-scale geometry for a sweep point
Geometry lattice_geometry(const RunConfig& cfg, const GeomPoint& p) {
  const int r = cfg.resolution;
  if (cfg.kind == GeometryKind::ParallelPlates1D)
    return build_parallel_plates_1d(p.a * r, cfg.wall * r, cfg.pad * r);
  std::optional<int> dr = p.d ? std::optional<int>(*p.d * cfg.resolution) : std::nullopt;
  return build_piston_2d(cfg.s * r, p.a * r, dr, cfg.pad * r);
}

struct MethodValues {
  bool failed = false;
  std::optional<double> total, n0, npos, f_te, f_tm, rel_err;
};

struct RowKey {
  GeomPoint pt;
  double tau = 0, sigma = 0;
};

std::string trace_tag(const GeomPoint& p, double sigma_phys, const char* pol) {
  std::ostringstream os;
  os << "a" << p.a;
  if (p.has_d) os << "_d" << p.d_str();
  os << "_sigma" << fmt(sigma_phys);
  if (*pol) os << "_" << pol;
  return os.str();
}

}  // namespace

int cmd_run(const RunConfig& cfg, const RunOptions& opt) {
  const int r = cfg.resolution;
  const bool one_d = cfg.kind == GeometryKind::ParallelPlates1D;
  const double report_scale = one_d ? static_cast<double>(r) * r
                                    : static_cast<double>(r) * r * r;

  std::vector<GeomPoint> pts = enumerate_points(cfg);
  std::vector<double> taus = cfg.tau_list;
  std::sort(taus.begin(), taus.end());

  std::vector<Polarization> pols = cfg.polarizations;
  std::sort(pols.begin(), pols.end(),
            [](Polarization a, Polarization b) { return static_cast<int>(a) < static_cast<int>(b); });
  pols.erase(std::unique(pols.begin(), pols.end()), pols.end());

  const bool want_td = std::count(cfg.methods.begin(), cfg.methods.end(), Method::TimeDomain) > 0;
  const bool want_ref = std::count(cfg.methods.begin(), cfg.methods.end(), Method::Reference) > 0;
  const bool want_naive =
      std::count(cfg.methods.begin(), cfg.methods.end(), Method::NaiveControl) > 0;

  bool any_error = false;

  struct Row {
    std::string method;
    GeomPoint pt;
    double tau, sigma;
    MethodValues v;
  };
  std::vector<Row> rows;

  // weight cache keyed by (kind, variant, sigma_lat, omega_T_lat)
  std::map<std::string, WeightFunction> wcache;
  auto weights_for = [&](SpectrumKind kind, Variant var, double sg, double wT) -> const WeightFunction& {
    std::ostringstream key;
    key << static_cast<int>(kind) << "|" << static_cast<int>(var) << "|" << fmt(sg) << "|" << fmt(wT);
    auto it = wcache.find(key.str());
    if (it == wcache.end()) {
      it = wcache
               .emplace(key.str(), make_weights(kind, var, sg, wT, cfg.dt_factor, cfg.max_steps,
                                                cfg.quad_mult, cfg.taper_fraction))
               .first;
    }
    return it->second;
  };

  for (const GeomPoint& pt : pts) {
    Geometry geom;
    PECMask mask;
    StressSurface surf;
    bool geom_ok = true;
    std::string geom_err;
    try {
      geom = lattice_geometry(cfg, pt);
      mask = rasterize(geom);
      surf = stress_surface(geom, 'B');
    } catch (const std::exception& e) {
      geom_ok = false;
      geom_err = e.what();
    }

    const int a_lat = pt.a * r;
    std::vector<double> sigmas = cfg.sigma_list;
    if (sigmas.empty()) sigmas = {1.0 / pt.a};
    std::sort(sigmas.begin(), sigmas.end());
    sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());

    // reference results are sigma-free: cache per (pt, tau, pol)
    std::map<std::string, ForceResult> ref_cache;
    auto reference_for = [&](double tau, Polarization pol) -> ForceResult {
      std::ostringstream key;
      key << fmt(tau) << "|" << to_string(pol);
      auto it = ref_cache.find(key.str());
      if (it != ref_cache.end()) return it->second;
      ForceResult res;
      if (one_d) {
        const int pad_lat = cfg.pad * r;
        const Lifshitz1D La = lifshitz_parallel_plates_1d(a_lat, tau);
        const Lifshitz1D Lp =
            lifshitz_parallel_plates_1d(pad_lat, tau * pad_lat / static_cast<double>(a_lat));
        res.total = La.total - Lp.total;
        res.n0 = La.n0 - Lp.n0;
        res.npos = La.npos - Lp.npos;
      } else {
        GridOracle orc(mask, pol);
        if (tau == 0.0) {
          const double hi = 24.0 / (2.0 * std::min(a_lat, cfg.s * r));
          res.total = res.npos = force_quadrature_grid(orc, surf, hi, 64);
        } else {
          const double wT = 2.0 * tau / a_lat;
          res = force_matsubara_grid(orc, surf, wT);
        }
      }
      ref_cache.emplace(key.str(), res);
      return res;
    };

    // time-domain traces are tau-independent: cache per (sigma, pol)
    std::map<std::string, StressTrace> trace_cache;
    auto trace_for = [&](double sigma_lat, Polarization pol, const std::string& tag) -> const StressTrace& {
      std::ostringstream key;
      key << fmt(sigma_lat) << "|" << to_string(pol);
      auto it = trace_cache.find(key.str());
      if (it == trace_cache.end()) {
        SimParams prm;
        prm.sigma = sigma_lat;
        prm.dt = cfg.dt_factor;
        prm.max_steps = cfg.max_steps;
        prm.tail_tol = cfg.tail_tol;
        AssembleOptions aopt;
        aopt.jobs = opt.jobs;
        if (opt.debug_dumps) {
          aopt.dump_path = cfg.path + ".trace." + tag + ".csv";
          aopt.raw_dump_path = cfg.path + ".raw." + tag + ".csv";
        }
        it = trace_cache.emplace(key.str(), assemble_stress_trace(mask, surf, pol, prm, aopt)).first;
      }
      return it->second;
    };

    for (double tau : taus) {
      for (double sigma_phys : sigmas) {
        const double sigma_lat = sigma_phys / r;
        const double wT_lat = tau > 0 ? 2.0 * tau / a_lat : 0.0;

        auto emit = [&](Method m, const MethodValues& v) {
          Row row;
          row.method = v.failed ? "error" : to_string(m);
          row.pt = pt;
          row.tau = tau;
          row.sigma = sigma_phys;
          row.v = v;
          rows.push_back(std::move(row));
          if (v.failed) any_error = true;
        };

        std::optional<double> ref_total;
        if (want_ref) {
          MethodValues v;
          try {
            if (!geom_ok) throw std::runtime_error(geom_err);
            if (one_d) {
              const ForceResult res = reference_for(tau, Polarization::TM);
              v.total = res.total * report_scale;
              v.n0 = res.n0 * report_scale;
              v.npos = res.npos * report_scale;
            } else {
              double tot = 0, n0 = 0, np = 0;
              for (Polarization pol : pols) {
                const ForceResult res = reference_for(tau, pol);
                tot += res.total;
                n0 += res.n0;
                np += res.npos;
                if (pol == Polarization::TE) v.f_te = res.total * report_scale;
                if (pol == Polarization::TM) v.f_tm = res.total * report_scale;
              }
              v.total = tot * report_scale;
              v.n0 = n0 * report_scale;
              v.npos = np * report_scale;
            }
            ref_total = v.total;
          } catch (const std::exception& e) {
            std::cerr << "error: reference " << trace_tag(pt, sigma_phys, "") << " tau=" << fmt(tau)
                      << ": " << e.what() << "\n";
            v = MethodValues{};
            v.failed = true;
          }
          emit(Method::Reference, v);
        }

        if (want_td) {
          MethodValues v;
          try {
            if (!geom_ok) throw std::runtime_error(geom_err);
            const SpectrumKind kind =
                tau > 0 ? SpectrumKind::PoleSubtracted : SpectrumKind::ZeroTemperature;
            double tot = 0, n0 = 0, np = 0;
            if (one_d) {
              const StressTrace& tr = trace_for(sigma_lat, Polarization::TM, trace_tag(pt, sigma_phys, ""));
              const ForceResult res =
                  integrate_force(tr, weights_for(kind, Variant::Electric, sigma_lat, wT_lat),
                                  weights_for(kind, Variant::Magnetic, sigma_lat, wT_lat));
              tot = res.total;
              n0 = res.n0;
              np = res.npos;
            } else {
              for (Polarization pol : pols) {
                const StressTrace& tr =
                    trace_for(sigma_lat, pol, trace_tag(pt, sigma_phys, to_string(pol)));
                const ForceResult res =
                    integrate_force(tr, weights_for(kind, Variant::Electric, sigma_lat, wT_lat),
                                    weights_for(kind, Variant::Magnetic, sigma_lat, wT_lat));
                tot += res.total;
                n0 += res.n0;
                np += res.npos;
                if (pol == Polarization::TE) v.f_te = res.total * report_scale;
                if (pol == Polarization::TM) v.f_tm = res.total * report_scale;
              }
            }
            v.total = tot * report_scale;
            v.n0 = n0 * report_scale;
            v.npos = np * report_scale;
            if (ref_total && *ref_total != 0.0)
              v.rel_err = std::abs(*v.total - *ref_total) / std::abs(*ref_total);
          } catch (const std::exception& e) {
            std::cerr << "error: timedomain " << trace_tag(pt, sigma_phys, "") << " tau=" << fmt(tau)
                      << ": " << e.what() << "\n";
            v = MethodValues{};
            v.failed = true;
          }
          emit(Method::TimeDomain, v);
        }

        if (want_naive) {
          MethodValues v;
          try {
            if (!geom_ok) throw std::runtime_error(geom_err);
            const SpectrumKind kind =
                tau > 0 ? SpectrumKind::NaiveCoth : SpectrumKind::ZeroTemperature;
            double tot = 0;
            if (one_d) {
              const StressTrace& tr = trace_for(sigma_lat, Polarization::TM, trace_tag(pt, sigma_phys, ""));
              tot = integrate_force_naive(tr, weights_for(kind, Variant::Electric, sigma_lat, wT_lat),
                                          weights_for(kind, Variant::Magnetic, sigma_lat, wT_lat),
                                          cfg.naive_zero_bin)
                        .total;
            } else {
              for (Polarization pol : pols) {
                const StressTrace& tr =
                    trace_for(sigma_lat, pol, trace_tag(pt, sigma_phys, to_string(pol)));
                const double f =
                    integrate_force_naive(tr, weights_for(kind, Variant::Electric, sigma_lat, wT_lat),
                                          weights_for(kind, Variant::Magnetic, sigma_lat, wT_lat),
                                          cfg.naive_zero_bin)
                        .total;
                tot += f;
                if (pol == Polarization::TE) v.f_te = f * report_scale;
                if (pol == Polarization::TM) v.f_tm = f * report_scale;
              }
            }
            v.total = tot * report_scale;
            v.npos = *v.total;
            v.n0 = 0.0;
            if (ref_total && *ref_total != 0.0)
              v.rel_err = std::abs(*v.total - *ref_total) / std::abs(*ref_total);
          } catch (const std::exception& e) {
            std::cerr << "error: naive_control " << trace_tag(pt, sigma_phys, "") << " tau=" << fmt(tau)
                      << ": " << e.what() << "\n";
            v = MethodValues{};
            v.failed = true;
          }
          emit(Method::NaiveControl, v);
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.pt.a != y.pt.a) return x.pt.a < y.pt.a;
    if (x.pt.d_sort() != y.pt.d_sort()) return x.pt.d_sort() < y.pt.d_sort();
    if (x.tau != y.tau) return x.tau < y.tau;
    if (x.sigma != y.sigma) return x.sigma < y.sigma;
    return x.method < y.method;
  });

  std::ofstream out(cfg.path);
  if (!out) {
    std::cerr << "error: cannot open output path " << cfg.path << "\n";
    return 2;
  }
  if (opt.timestamp) out << "# generated " << iso_now() << "\n";
  out << "method,kind,a,d,tau,sigma,resolution,F_total,F_n0,F_npos,F_TE,F_TM,oracle_rel_err\n";
  for (const Row& row : rows) {
    out << row.method << "," << kind_name(cfg.kind) << "," << row.pt.a << "," << row.pt.d_str()
        << "," << fmt(row.tau) << "," << fmt(row.sigma) << "," << cfg.resolution << ","
        << fmt_opt(row.v.total) << "," << fmt_opt(row.v.n0) << "," << fmt_opt(row.v.npos) << ","
        << fmt_opt(row.v.f_te) << "," << fmt_opt(row.v.f_tm) << "," << fmt_opt(row.v.rel_err)
        << "\n";
  }
  return any_error ? 2 : 0;
}

int cmd_weights(const RunConfig& cfg, const RunOptions& opt) {
  std::string stem = cfg.path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
  std::ofstream fs(stem + "_spectrum.csv");
  std::ofstream ft(stem + "_time.csv");
  if (!fs || !ft) {
    std::cerr << "error: cannot open weight output files at stem " << stem << "\n";
    return 2;
  }
  if (opt.timestamp) {
    const std::string ts = iso_now();
    fs << "# generated " << ts << "\n";
    ft << "# generated " << ts << "\n";
  }
  fs << "a,d,tau,sigma,variant,xi,re,im,taper\n";
  ft << "a,d,tau,sigma,variant,t,g,zero_mode_constant\n";

  const int r = cfg.resolution;
  std::vector<GeomPoint> pts = enumerate_points(cfg);
  std::vector<double> taus = cfg.tau_list;
  std::sort(taus.begin(), taus.end());

  try {
    for (const GeomPoint& pt : pts) {
      const int a_lat = pt.a * r;
      std::vector<double> sigmas = cfg.sigma_list;
      if (sigmas.empty()) sigmas = {1.0 / pt.a};
      std::sort(sigmas.begin(), sigmas.end());
      for (double tau : taus) {
        for (double sigma_phys : sigmas) {
          const double sigma_lat = sigma_phys / r;
          const double wT = tau > 0 ? 2.0 * tau / a_lat : 0.0;
          const SpectrumKind kind =
              tau > 0 ? SpectrumKind::PoleSubtracted : SpectrumKind::ZeroTemperature;
          for (Variant var : {Variant::Electric, Variant::Magnetic}) {
            const WeightFunction w = make_weights(kind, var, sigma_lat, wT, cfg.dt_factor,
                                                  cfg.max_steps, cfg.quad_mult, cfg.taper_fraction);
            const char* vname = var == Variant::Electric ? "electric" : "magnetic";
            const long J = static_cast<long>(w.g.size()) * cfg.quad_mult / 2;
            for (long j = 1; j <= J; ++j) {
              const double xi = j * w.dxi;
              const cplx val = spectrum_value(kind, var, xi, sigma_lat, wT);
              fs << pt.a << "," << pt.d_str() << "," << fmt(tau) << "," << fmt(sigma_phys) << ","
                 << vname << "," << fmt(xi) << "," << fmt(val.real()) << "," << fmt(val.imag())
                 << "," << fmt(taper_value(xi, w.xi_max, w.taper_fraction)) << "\n";
            }
            for (int k = 0; k < w.n_steps; ++k) {
              ft << pt.a << "," << pt.d_str() << "," << fmt(tau) << "," << fmt(sigma_phys) << ","
                 << vname << "," << fmt((k + 0.5) * w.dt) << "," << fmt(w.g[static_cast<size_t>(k)])
                 << "," << fmt(w.zero_mode_const) << "\n";
            }
          }
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_reference(const RunConfig& cfg, const RunOptions& opt) {
  std::ofstream out(cfg.path);
  if (!out) {
    std::cerr << "error: cannot open output path " << cfg.path << "\n";
    return 2;
  }
  if (opt.timestamp) out << "# generated " << iso_now() << "\n";
  out << "kind,a,d,tau,polarization,n,xi_n,f_xi,partial_sum\n";

  const int r = cfg.resolution;
  const bool one_d = cfg.kind == GeometryKind::ParallelPlates1D;
  const double report_scale = one_d ? static_cast<double>(r) * r
                                    : static_cast<double>(r) * r * r;
  std::vector<GeomPoint> pts = enumerate_points(cfg);
  std::vector<double> taus = cfg.tau_list;
  std::sort(taus.begin(), taus.end());

  bool any_error = false;
  for (const GeomPoint& pt : pts) {
    const int a_lat = pt.a * r;
    try {
      if (one_d) {
        const int pad_lat = cfg.pad * r;
        for (double tau : taus) {
          auto sink = [&](int n, double xi, double f, double partial) {
            out << kind_name(cfg.kind) << "," << pt.a << ",," << fmt(tau) << ",," << n << ","
                << fmt(xi) << "," << fmt(f * report_scale) << "," << fmt(partial * report_scale)
                << "\n";
          };
          auto f_comp = [&](double xi) {
            return lifshitz_integrand_1d(xi, a_lat) - lifshitz_integrand_1d(xi, pad_lat);
          };
          if (tau == 0.0) {
            std::vector<double> x, w;
            const double hi = 24.0 / (2.0 * std::min(a_lat, pad_lat));
            gauss_legendre(96, hi, x, w);
            double acc = 0.0;
            for (size_t i = 0; i < x.size(); ++i) {
              const double f = f_comp(x[i]);
              acc += w[i] * f;
              sink(static_cast<int>(i), x[i], f, acc);
            }
          } else {
            matsubara_sum(f_comp, 2.0 * tau / a_lat, 100000, 1e-13, sink);
          }
        }
        continue;
      }
      const Geometry geom = lattice_geometry(cfg, pt);
      const PECMask mask = rasterize(geom);
      const StressSurface surf = stress_surface(geom, 'B');
      std::vector<Polarization> pols = cfg.polarizations;
      std::sort(pols.begin(), pols.end(), [](Polarization a, Polarization b) {
        return static_cast<int>(a) < static_cast<int>(b);
      });
      pols.erase(std::unique(pols.begin(), pols.end()), pols.end());
      for (Polarization pol : pols) {
        GridOracle orc(mask, pol);
        for (double tau : taus) {
          auto sink = [&](int n, double xi, double f, double partial) {
            out << kind_name(cfg.kind) << "," << pt.a << "," << pt.d_str() << "," << fmt(tau) << ","
                << to_string(pol) << "," << n << "," << fmt(xi) << "," << fmt(f * report_scale)
                << "," << fmt(partial * report_scale) << "\n";
          };
          if (tau == 0.0) {
            const double hi = 24.0 / (2.0 * std::min(a_lat, cfg.s * r));
            force_quadrature_grid(orc, surf, hi, 64, sink);
          } else {
            force_matsubara_grid(orc, surf, 2.0 * tau / a_lat, 1e-2, 400, 1e-10, sink);
          }
        }
      }
    } catch (const std::exception& e) {
      std::cerr << "error: reference table for a=" << pt.a << ": " << e.what() << "\n";
      any_error = true;
    }
  }
  return any_error ? 2 : 0;
}

}  // namespace casimir
