#include "casimir/force.hpp"

#include <cmath>
#include <stdexcept>

namespace casimir {

namespace {

void check_pair(const StressTrace& tr, const WeightFunction& wE, const WeightFunction& wH) {
  if (wE.variant != Variant::Electric || wH.variant != Variant::Magnetic)
    throw std::invalid_argument("integrate_force requires an (Electric, Magnetic) weight pair");
  if (wE.kind != wH.kind) throw std::invalid_argument("weight pair must share one spectrum kind");
  if (wE.n_steps != tr.n_steps || wH.n_steps != tr.n_steps)
    throw std::invalid_argument("weight window does not match the trace length");
  if (std::abs(wE.dt - tr.dt) > 1e-12 || std::abs(wH.dt - tr.dt) > 1e-12)
    throw std::invalid_argument("weight dt does not match the trace dt");
  if (std::abs(wE.sigma - tr.sigma) > 1e-12 || std::abs(wH.sigma - tr.sigma) > 1e-12)
    throw std::invalid_argument("weight sigma does not match the trace sigma");
  if (std::abs(wE.omega_T - wH.omega_T) > 1e-15)
    throw std::invalid_argument("weight pair must share one temperature");
}

// (1/pi) int_0^ximax Im[ W(xi) kernel(xi) ] taper(xi) dxi on a dense grid,
// substituting xi = u^2 to tame the xi^(-1/2) behavior of W at the origin.
// kernel_sel: 0 -> exact discrete transform of the unit step theta(t),
//             1 -> exact discrete transform of the discharge pulse C r^k.
double dense_tail_integral(const WeightFunction& w, int kernel_sel, double r, double Cpulse) {
  constexpr int kN = 200001;
  const double umax = std::sqrt(w.xi_max);
  const double du = umax / (kN - 1);
  double acc = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  for (int n = 1; n < kN; ++n) {
    const double u = n * du;
    const double xi = u * u;
    const cplx W = spectrum_value(w.kind, w.variant, xi, w.sigma, w.omega_T) *
                   taper_value(xi, w.xi_max, w.taper_fraction);
    cplx kernel;
    if (kernel_sel == 0) {
      kernel = cplx(0.0, w.dt / (2.0 * std::sin(xi * w.dt / 2.0)));
    } else {
      const cplx eix = std::polar(1.0, xi * w.dt);
      kernel = w.dt * Cpulse * std::polar(1.0, xi * w.dt / 2.0) / (1.0 - r * eix);
    }
    const double f = (W * kernel).imag() * 2.0 * u;  // du jacobian: dxi = 2 u du
    if (have_prev) acc += 0.5 * (prev + f) * du;
    prev = f;
    have_prev = true;
  }
  return acc / M_PI;
}

}  // namespace

double trace_plateau(const std::vector<double>& gamma_H) {
  if (gamma_H.empty()) return 0.0;
  const size_t n = gamma_H.size();
  const size_t w = std::max<size_t>(1, n / 20);
  double mu = 0.0;
  for (size_t k = n - w; k < n; ++k) mu += gamma_H[k];
  return mu / static_cast<double>(w);
}

double zero_mode_force(const StressTrace& tr, double sigma, double omega_T) {
  if (omega_T == 0.0) return 0.0;
  const double zmc = zero_mode_constant(sigma, omega_T);  // sigma k_B T
  const double T = omega_T / 2.0;
  double area = 0.0;
  for (double v : tr.gamma_E) area += v;
  area *= tr.dt;
  const double c_inf = trace_plateau(tr.gamma_H);
  return zmc * area + T * c_inf;
}

ForceResult integrate_force(const StressTrace& tr, const WeightFunction& wE,
                            const WeightFunction& wH) {
  check_pair(tr, wE, wH);
  if (wE.kind == SpectrumKind::NaiveCoth)
    throw std::invalid_argument("NaiveCoth weights belong to integrate_force_naive");

  const int n = tr.n_steps;
  const double dt = tr.dt;
  const double c_inf = trace_plateau(tr.gamma_H);
  double A_E = 0.0;
  for (double v : tr.gamma_E) A_E += v;
  A_E *= dt;

  const double s = 0.5 * tr.sigma * dt;
  const double r = (1.0 - s) / (1.0 + s);
  const double Cpulse = (1.0 - r) / dt;  // dt sum_k C r^k = 1

  double sumE = 0.0, sumH = 0.0;
  double pk = Cpulse;
  for (int k = 0; k < n; ++k) {
    sumE += wE.g[static_cast<size_t>(k)] * (tr.gamma_E[static_cast<size_t>(k)] - A_E * pk);
    sumH += wH.g[static_cast<size_t>(k)] * (tr.gamma_H[static_cast<size_t>(k)] - c_inf);
    pk *= r;
  }
  const double S_H = dense_tail_integral(wH, 0, r, Cpulse);
  const double S_E = dense_tail_integral(wE, 1, r, Cpulse);
  const double npos = dt * sumE + dt * sumH + c_inf * S_H + A_E * S_E;

  ForceResult out;
  out.c_inf = c_inf;
  out.converged = tr.converged;
  out.npos = npos;
  if (wE.kind == SpectrumKind::PoleSubtracted) {
    out.n0 = zero_mode_force(tr, tr.sigma, wE.omega_T);
  }
  out.total = out.n0 + out.npos;
  return out;
}

ForceResult integrate_force_naive(const StressTrace& tr, const WeightFunction& wE,
                                  const WeightFunction& wH, double zero_bin_value) {
  check_pair(tr, wE, wH);
  if (wE.kind == SpectrumKind::PoleSubtracted)
    throw std::invalid_argument(
        "pole-subtracted weights belong to integrate_force, not the naive sum");
  const double zc = wE.dxi / M_PI * zero_bin_value * 0.5;
  double acc = 0.0;
  for (int k = 0; k < tr.n_steps; ++k) {
    acc += (wE.g[static_cast<size_t>(k)] + zc) * tr.gamma_E[static_cast<size_t>(k)];
    acc += (wH.g[static_cast<size_t>(k)] + zc) * tr.gamma_H[static_cast<size_t>(k)];
  }
  ForceResult out;
  out.total = out.npos = tr.dt * acc;
  out.converged = tr.converged;
  return out;
}

}  // namespace casimir
