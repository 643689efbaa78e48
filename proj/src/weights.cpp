#include "casimir/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace casimir {

cplx omega_contour(double xi, double sigma) {
  if (!(xi > 0)) throw std::invalid_argument("omega_contour requires xi > 0");
  return xi * std::sqrt(cplx(1.0, sigma / xi));
}

cplx coth_minus_pole(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return z * (1.0 / 3.0 + z2 * (-1.0 / 45.0 + z2 * (2.0 / 945.0)));
  }
  return 1.0 / std::tanh(z) - 1.0 / z;
}

cplx weight_T0(double xi, double sigma) {
  return cplx(0.0, -1.0) * omega_contour(xi, sigma) * cplx(1.0, 0.5 * sigma / xi);
}

cplx spectrum_value(SpectrumKind kind, Variant var, double xi, double sigma, double omega_T) {
  if (xi == 0.0) {
    if (kind != SpectrumKind::PoleSubtracted)
      throw std::invalid_argument("spectrum_value at xi = 0 is defined only for the pole-subtracted kind");
    if (!(omega_T > 0)) throw std::invalid_argument("pole-subtracted weight requires omega_T > 0");
    // xi -> 0+: g -> -i omega (1 + i sigma/2 xi) -> sigma/2 - ... ; the
    // product with coth(omega/omega_T) - omega_T/omega tends to
    // i sigma^2 / (6 omega_T) for the electric variant and 0 for magnetic.
    if (var == Variant::Magnetic) return cplx(0.0, 0.0);
    return cplx(0.0, sigma * sigma / (6.0 * omega_T));
  }
  cplx g = weight_T0(xi, sigma);
  if (kind != SpectrumKind::ZeroTemperature) {
    if (!(omega_T > 0)) throw std::invalid_argument("thermal weight requires omega_T > 0");
    const cplx z = omega_contour(xi, sigma) / omega_T;
    if (kind == SpectrumKind::PoleSubtracted) {
      g *= coth_minus_pole(z);
    } else {
      g *= 1.0 / std::tanh(z);
    }
  }
  if (var == Variant::Magnetic) g /= cplx(1.0, sigma / xi);
  return g;
}

double zero_mode_constant(double sigma, double omega_T) {
  if (omega_T == 0.0) return 0.0;
  if (!(sigma > 0)) throw std::invalid_argument("zero-frequency contribution requires sigma > 0");
  return sigma * omega_T / 2.0;
}

double taper_value(double xi, double xi_max, double fraction) {
  const double start = (1.0 - fraction) * xi_max;
  if (xi <= start) return 1.0;
  if (xi >= xi_max) return 0.0;
  return 0.5 * (1.0 + std::cos(M_PI * (xi - start) / (fraction * xi_max)));
}

std::vector<double> synthesize(const std::vector<double>& xi, const std::vector<cplx>& W,
                               double dt, int n_steps) {
  if (xi.size() != W.size() || xi.empty())
    throw std::invalid_argument("synthesize requires matching, non-empty bin and value lists");
  if (!(dt > 0) || n_steps <= 0) throw std::invalid_argument("synthesize requires dt > 0 and n_steps > 0");
  const double dxi = xi.size() > 1 ? xi[1] - xi[0] : xi[0];
  if (!(dxi > 0)) throw std::invalid_argument("frequency bins must be ascending");
  for (size_t j = 0; j < xi.size(); ++j) {
    if (std::abs(xi[j] - (static_cast<double>(j) + 1.0) * dxi) > 1e-9 * dxi)
      throw std::invalid_argument("frequency bins must be uniform starting at dxi");
  }
  if (xi.back() > M_PI / dt * (1.0 + 1e-12))
    throw std::invalid_argument("frequency bins exceed the lattice Nyquist limit pi / dt");
  if (n_steps * dt > 2.0 * M_PI / dxi * (1.0 + 1e-12))
    throw std::invalid_argument("time window exceeds the synthesis period 2 pi / dxi");

  std::vector<double> g(static_cast<size_t>(n_steps));
  for (int k = 0; k < n_steps; ++k) {
    const double t = dt * (k + 0.5);
    // accumulate Im[ W_j e^{+i xi_j t} ] with a phase recurrence
    const cplx rot = std::polar(1.0, dxi * t);
    cplx ph = std::polar(1.0, xi[0] * t);
    double acc = 0.0;
    for (size_t j = 0; j < W.size(); ++j) {
      if ((j & 1023u) == 0u && j > 0) ph = std::polar(1.0, xi[j] * t);  // curb phase drift
      acc += W[j].real() * ph.imag() + W[j].imag() * ph.real();
      ph *= rot;
    }
    g[static_cast<size_t>(k)] = dxi / M_PI * acc;
  }
  return g;
}

WeightFunction make_weights(SpectrumKind kind, Variant var, double sigma, double omega_T,
                            double dt, int n_steps, int quad_mult, double taper_fraction) {
  if (quad_mult < 1) throw std::invalid_argument("quad_mult must be at least 1");
  if (!(taper_fraction > 0) || taper_fraction >= 1)
    throw std::invalid_argument("taper_fraction must lie in (0, 1)");
  if (kind != SpectrumKind::ZeroTemperature && !(omega_T > 0))
    throw std::invalid_argument("thermal weight requires omega_T > 0");
  if (kind == SpectrumKind::PoleSubtracted && omega_T > 0 && !(sigma > 0))
    throw std::invalid_argument("zero-frequency contribution requires sigma > 0");

  const long nq = static_cast<long>(quad_mult) * n_steps;
  const long J = nq / 2;
  const double dxi = 2.0 * M_PI / (static_cast<double>(nq) * dt);
  std::vector<double> xi(static_cast<size_t>(J));
  std::vector<cplx> W(static_cast<size_t>(J));
  const double xi_max = static_cast<double>(J) * dxi;
  for (long j = 1; j <= J; ++j) {
    const double x = static_cast<double>(j) * dxi;
    xi[static_cast<size_t>(j - 1)] = x;
    W[static_cast<size_t>(j - 1)] =
        spectrum_value(kind, var, x, sigma, omega_T) * taper_value(x, xi_max, taper_fraction);
  }

  WeightFunction wf;
  wf.kind = kind;
  wf.variant = var;
  wf.sigma = sigma;
  wf.omega_T = (kind == SpectrumKind::ZeroTemperature) ? 0.0 : omega_T;
  wf.dt = dt;
  wf.n_steps = n_steps;
  wf.dxi = dxi;
  wf.xi_max = xi_max;
  wf.taper_fraction = taper_fraction;
  wf.g = synthesize(xi, W, dt, n_steps);
  wf.zero_mode_const =
      (kind == SpectrumKind::PoleSubtracted) ? zero_mode_constant(sigma, omega_T) : 0.0;
  return wf;
}

}  // namespace casimir
