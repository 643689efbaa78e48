#include "casimir/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace casimir {

// ---------------------------------------------------------------- analytic

double lifshitz_integrand_1d(double xi, double a) {
  if (xi == 0.0) return -1.0 / (2.0 * M_PI * a);
  return -(1.0 / M_PI) * xi / std::expm1(2.0 * xi * a);
}

Lifshitz1D lifshitz_parallel_plates_1d(double a, double tau) {
  if (!(a > 0)) throw std::invalid_argument("gap must be positive");
  if (tau < 0) throw std::invalid_argument("tau must be non-negative");
  Lifshitz1D out;
  if (tau == 0.0) {
    out.total = out.npos = -M_PI / (24.0 * a * a);
    return out;
  }
  const double T = tau / a;
  const double wT = 2.0 * T;
  out.n0 = M_PI * wT * 0.5 * lifshitz_integrand_1d(0.0, a);
  double npos = 0.0;
  for (int n = 1; n <= 200000; ++n) {
    const double xn = n * M_PI * wT;
    const double term = M_PI * wT * lifshitz_integrand_1d(xn, a);
    npos += term;
    if (std::abs(term) < 1e-300 ||
        std::abs(term) < 1e-16 * std::max(std::abs(npos), std::abs(out.n0)))
      break;
  }
  out.npos = npos;
  out.total = out.n0 + out.npos;
  return out;
}

// ------------------------------------------------------------ summation ops

double matsubara_sum(const std::function<double(double)>& f, double omega_T,
                     int n_max, double tail_tol, const TermSink& sink) {
  if (!(omega_T > 0)) throw std::invalid_argument("matsubara_sum requires omega_T > 0");
  const double f0 = f(0.0);
  double sum = M_PI * omega_T * 0.5 * f0;
  if (sink) sink(0, 0.0, f0, sum);
  for (int n = 1; n <= n_max; ++n) {
    const double xn = n * M_PI * omega_T;
    const double fn = f(xn);
    const double term = M_PI * omega_T * fn;
    sum += term;
    if (sink) sink(n, xn, fn, sum);
    if (std::abs(term) <= tail_tol * std::max(std::abs(sum), 1e-300)) break;
  }
  return sum;
}

void gauss_legendre(int n, double hi, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  x.assign(static_cast<size_t>(n), 0.0);
  w.assign(static_cast<size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    // map [-1, 1] -> [0, hi]
    x[static_cast<size_t>(i)] = 0.5 * hi * (1.0 - z);
    w[static_cast<size_t>(i)] = 0.5 * hi * wi;
    x[static_cast<size_t>(n - 1 - i)] = 0.5 * hi * (1.0 + z);
    w[static_cast<size_t>(n - 1 - i)] = 0.5 * hi * wi;
  }
}

double kz_integrate(const std::function<double(double)>& f, double omega_T,
                    double kz_max, int nodes) {
  if (!(kz_max > 0)) throw std::invalid_argument("kz_integrate requires kz_max > 0");
  std::vector<double> x, w;
  gauss_legendre(nodes, kz_max, x, w);
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double kz = x[static_cast<size_t>(i)];
    const auto g = [&](double xi) { return f(std::sqrt(xi * xi + kz * kz)); };
    acc += w[static_cast<size_t>(i)] * matsubara_sum(g, omega_T);
  }
  return acc / M_PI;
}

// --------------------------------------------------------------- grid oracle

namespace {
using Trip = Eigen::Triplet<double>;
}

GridOracle::GridOracle(const PECMask& mask, Polarization pol)
    : two_d_(mask.two_d), pol_(pol), nx_(mask.nx), ny_(mask.ny) {
  std::vector<Trip> tS, tO;  // entries of S_from_O_ and O_from_S_

  if (!two_d_) {
    // scalar = free E nodes, other = H cells (all free)
    sidx_.assign(static_cast<size_t>(nx_) + 1, -1);
    for (int i = 0; i <= nx_; ++i)
      if (!mask.node.at(i, 0)) sidx_[static_cast<size_t>(i)] = nS_++;
    nO_ = nx_;
    // E-dot at node i: -(H_i - H_{i-1});  H-dot at cell c: -(E_{c+1} - E_c)
    for (int i = 0; i <= nx_; ++i) {
      const int r = sidx_[static_cast<size_t>(i)];
      if (r < 0) continue;
      if (i < nx_) tS.emplace_back(r, i, -1.0);
      if (i >= 1) tS.emplace_back(r, i - 1, +1.0);
    }
    for (int c = 0; c < nx_; ++c) {
      const int rp = sidx_[static_cast<size_t>(c) + 1];
      const int rm = sidx_[static_cast<size_t>(c)];
      if (rp >= 0) tO.emplace_back(c, rp, -1.0);
      if (rm >= 0) tO.emplace_back(c, rm, +1.0);
    }
  } else if (pol == Polarization::TM) {
    // scalar = free Ez nodes; other = all Hx then all Hy
    sidx_.assign(static_cast<size_t>(nx_ + 1) * (ny_ + 1), -1);
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j <= ny_; ++j)
        if (!mask.node.at(i, j)) sidx_[static_cast<size_t>(i) * (ny_ + 1) + j] = nS_++;
    hx_count_ = (nx_ + 1) * ny_;
    nO_ = hx_count_ + nx_ * (ny_ + 1);
    auto ez = [&](int i, int j) { return sidx_[static_cast<size_t>(i) * (ny_ + 1) + j]; };
    auto hx = [&](int i, int j) { return i * ny_ + j; };
    auto hy = [&](int i, int j) { return hx_count_ + i * (ny_ + 1) + j; };
    // Hx-dot(i, j+1/2) = -(Ez(i,j+1) - Ez(i,j));  Hy-dot(i+1/2, j) = +(Ez(i+1,j) - Ez(i,j))
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j < ny_; ++j) {
        const int r = hx(i, j);
        if (ez(i, j + 1) >= 0) tO.emplace_back(r, ez(i, j + 1), -1.0);
        if (ez(i, j) >= 0) tO.emplace_back(r, ez(i, j), +1.0);
      }
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j <= ny_; ++j) {
        const int r = hy(i, j);
        if (ez(i + 1, j) >= 0) tO.emplace_back(r, ez(i + 1, j), +1.0);
        if (ez(i, j) >= 0) tO.emplace_back(r, ez(i, j), -1.0);
      }
    // Ez-dot(i,j) = (Hy(i,j) - Hy(i-1,j)) - (Hx(i,j) - Hx(i,j-1))
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j <= ny_; ++j) {
        const int r = ez(i, j);
        if (r < 0) continue;
        if (i < nx_) tS.emplace_back(r, hy(i, j), +1.0);
        if (i >= 1) tS.emplace_back(r, hy(i - 1, j), -1.0);
        if (j < ny_) tS.emplace_back(r, hx(i, j), -1.0);
        if (j >= 1) tS.emplace_back(r, hx(i, j - 1), +1.0);
      }
  } else {
    // TE: scalar = all Hz cells; other = free Ex then free Ey
    nS_ = nx_ * ny_;
    sidx_.assign(static_cast<size_t>(nS_), 0);
    for (int k = 0; k < nS_; ++k) sidx_[static_cast<size_t>(k)] = k;
    oidx_ex_.assign(static_cast<size_t>(nx_) * (ny_ + 1), -1);
    oidx_ey_.assign(static_cast<size_t>(nx_ + 1) * ny_, -1);
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j <= ny_; ++j)
        if (!mask.ex.at(i, j)) oidx_ex_[static_cast<size_t>(i) * (ny_ + 1) + j] = nO_++;
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j < ny_; ++j)
        if (!mask.ey.at(i, j)) oidx_ey_[static_cast<size_t>(i) * ny_ + j] = nO_++;
    auto hz = [&](int i, int j) { return i * ny_ + j; };
    auto exi = [&](int i, int j) { return oidx_ex_[static_cast<size_t>(i) * (ny_ + 1) + j]; };
    auto eyi = [&](int i, int j) { return oidx_ey_[static_cast<size_t>(i) * ny_ + j]; };
    // Hz-dot(cell) = -(Ey(i+1,j) - Ey(i,j)) + (Ex(i,j+1) - Ex(i,j))
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j < ny_; ++j) {
        const int r = hz(i, j);
        if (eyi(i + 1, j) >= 0) tS.emplace_back(r, eyi(i + 1, j), -1.0);
        if (eyi(i, j) >= 0) tS.emplace_back(r, eyi(i, j), +1.0);
        if (exi(i, j + 1) >= 0) tS.emplace_back(r, exi(i, j + 1), +1.0);
        if (exi(i, j) >= 0) tS.emplace_back(r, exi(i, j), -1.0);
      }
    // Ex-dot = +(Hz(i,j) - Hz(i,j-1));  Ey-dot = -(Hz(i,j) - Hz(i-1,j))
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j <= ny_; ++j) {
        const int r = exi(i, j);
        if (r < 0) continue;
        if (j < ny_) tO.emplace_back(r, hz(i, j), +1.0);
        if (j >= 1) tO.emplace_back(r, hz(i, j - 1), -1.0);
      }
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j < ny_; ++j) {
        const int r = eyi(i, j);
        if (r < 0) continue;
        if (i < nx_) tO.emplace_back(r, hz(i, j), -1.0);
        if (i >= 1) tO.emplace_back(r, hz(i - 1, j), +1.0);
      }
  }

  S_from_O_.resize(nS_, nO_);
  S_from_O_.setFromTriplets(tS.begin(), tS.end());
  O_from_S_.resize(nO_, nS_);
  O_from_S_.setFromTriplets(tO.begin(), tO.end());
  L_ = (-(S_from_O_ * O_from_S_)).pruned();
  L_.makeCompressed();
}

double GridOracle::skew_defect() const {
  Eigen::SparseMatrix<double> d = S_from_O_ + Eigen::SparseMatrix<double>(O_from_S_.transpose());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

void GridOracle::factorize(double xi) {
  if (xi == cur_xi_) return;
  if (!(xi > 0)) throw std::invalid_argument("grid oracle requires xi > 0");
  Eigen::SparseMatrix<double> I(nS_, nS_);
  I.setIdentity();
  Eigen::SparseMatrix<double> M = L_ + (xi * xi) * I;
  M.makeCompressed();
  if (!analyzed_) {
    solver_.analyzePattern(M);
    analyzed_ = true;
  }
  solver_.factorize(M);
  if (solver_.info() != Eigen::Success)
    throw std::runtime_error("grid oracle factorization failed");
  cur_xi_ = xi;
}

void GridOracle::build_vectors(const SampleList& s, Eigen::VectorXd& vS, Eigen::VectorXd& vO) const {
  vS = Eigen::VectorXd::Zero(nS_);
  vO = Eigen::VectorXd::Zero(nO_);
  for (const Sample& a : s) {
    if (!two_d_) {
      if (a.comp == FieldComp::Ey) {
        const int r = sidx_[static_cast<size_t>(a.i)];
        if (r >= 0) vS[r] += a.w;
      } else if (a.comp == FieldComp::Hz) {
        vO[a.i] += a.w;
      } else {
        throw std::invalid_argument("1D oracle samples must be Ey or Hz");
      }
      continue;
    }
    if (pol_ == Polarization::TM) {
      if (a.comp == FieldComp::Ez) {
        const int r = sidx_[static_cast<size_t>(a.i) * (ny_ + 1) + a.j];
        if (r >= 0) vS[r] += a.w;
      } else if (a.comp == FieldComp::Hx) {
        vO[a.i * ny_ + a.j] += a.w;
      } else if (a.comp == FieldComp::Hy) {
        vO[hx_count_ + a.i * (ny_ + 1) + a.j] += a.w;
      } else {
        throw std::invalid_argument("TM oracle samples must be Ez, Hx, or Hy");
      }
    } else {
      if (a.comp == FieldComp::Hz) {
        vS[a.i * ny_ + a.j] += a.w;
      } else if (a.comp == FieldComp::Ex) {
        const int r = oidx_ex_[static_cast<size_t>(a.i) * (ny_ + 1) + a.j];
        if (r >= 0) vO[r] += a.w;
      } else if (a.comp == FieldComp::Ey) {
        const int r = oidx_ey_[static_cast<size_t>(a.i) * ny_ + a.j];
        if (r >= 0) vO[r] += a.w;
      } else {
        throw std::invalid_argument("TE oracle samples must be Hz, Ex, or Ey");
      }
    }
  }
}

bool GridOracle::scalar_term(bool magnetic) const {
  if (!two_d_) return !magnetic;                      // scalar sector is E
  if (pol_ == Polarization::TM) return !magnetic;     // scalar sector is Ez
  return magnetic;                                    // TE: scalar sector is Hz
}

double GridOracle::force_integrand(double xi, const StressSurface& surf) {
  factorize(xi);
  std::vector<SurfacePoint> pts = surf.points;
  std::sort(pts.begin(), pts.end(), [](const SurfacePoint& a, const SurfacePoint& b) {
    if (a.face != b.face) return a.face < b.face;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  double tot = 0.0;
  Eigen::VectorXd vSa, vOa, vSb, vOb;
  for (const SurfacePoint& p : pts) {
    for (const StressTerm& t : stress_terms(pol_, p.face, two_d_)) {
      build_vectors(sample_points(t.a, p.x, p.y, two_d_), vSa, vOa);
      if (t.a == t.b) {
        vSb = vSa;
        vOb = vOa;
      } else {
        build_vectors(sample_points(t.b, p.x, p.y, two_d_), vSb, vOb);
      }
      double resp;
      if (scalar_term(t.magnetic)) {
        resp = -xi * vSb.dot(solver_.solve(vSa));
      } else {
        const Eigen::VectorXd o = -solver_.solve(Eigen::VectorXd(S_from_O_ * vOa));
        resp = vOb.dot(Eigen::VectorXd(O_from_S_ * o) - vOa) / xi;
      }
      tot += t.coef * p.sgn * resp;
    }
  }
  return xi * tot / M_PI;
}

std::vector<double> GridOracle::green_scalar(double xi, const SampleList& src) {
  factorize(xi);
  Eigen::VectorXd vS, vO;
  build_vectors(src, vS, vO);
  const Eigen::VectorXd g = solver_.solve(vS);
  std::vector<double> out;
  if (!two_d_) {
    out.assign(static_cast<size_t>(nx_) + 1, 0.0);
    for (int i = 0; i <= nx_; ++i) {
      const int r = sidx_[static_cast<size_t>(i)];
      if (r >= 0) out[static_cast<size_t>(i)] = g[r];
    }
  } else if (pol_ == Polarization::TM) {
    out.assign(static_cast<size_t>(nx_ + 1) * (ny_ + 1), 0.0);
    for (size_t k = 0; k < out.size(); ++k) {
      const int r = sidx_[k];
      if (r >= 0) out[k] = g[r];
    }
  } else {
    out.assign(static_cast<size_t>(nx_) * ny_, 0.0);
    for (int k = 0; k < nS_; ++k) out[static_cast<size_t>(k)] = g[k];
  }
  return out;
}

ForceResult force_matsubara_grid(GridOracle& orc, const StressSurface& surf, double omega_T,
                                 double xi0, int n_max, double tail_tol, const TermSink& sink) {
  if (!(omega_T > 0)) throw std::invalid_argument("force_matsubara_grid requires omega_T > 0");
  ForceResult out;
  const double f0 =
      (4.0 * orc.force_integrand(xi0 / 2.0, surf) - orc.force_integrand(xi0, surf)) / 3.0;
  out.n0 = M_PI * omega_T * 0.5 * f0;
  if (sink) sink(0, 0.0, f0, out.n0);
  double npos = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double xn = n * M_PI * omega_T;
    const double fn = orc.force_integrand(xn, surf);
    const double term = M_PI * omega_T * fn;
    npos += term;
    if (sink) sink(n, xn, fn, out.n0 + npos);
    if (std::abs(term) < tail_tol * std::max({std::abs(npos), std::abs(out.n0), 1e-300})) break;
  }
  out.npos = npos;
  out.total = out.n0 + out.npos;
  return out;
}

double force_quadrature_grid(GridOracle& orc, const StressSurface& surf, double xi_hi,
                             int nodes, const TermSink& sink) {
  std::vector<double> x, w;
  gauss_legendre(nodes, xi_hi, x, w);
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double f = orc.force_integrand(x[static_cast<size_t>(i)], surf);
    acc += w[static_cast<size_t>(i)] * f;
    if (sink) sink(i, x[static_cast<size_t>(i)], f, acc);
  }
  return acc;
}

}  // namespace casimir
