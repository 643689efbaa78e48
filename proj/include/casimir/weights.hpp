#pragma once
// Frequency-domain weight functions and their time-domain synthesis.
//
// Units: hbar = c = k_B = 1, lattice spacing dx = 1.  Transform convention:
// f(xi) = integral dt e^{+i xi t} f(t), so response functions of the damped
// lattice are analytic in the upper half plane.
//
// The field evolution carries a global conductivity sigma, which maps the
// real-frequency force integral onto the complex contour
//     omega(xi) = xi sqrt(1 + i sigma / xi).
// Along the contour the zero-temperature electric-current weight is
//     g(xi) = -i omega(xi) (1 + i sigma / (2 xi)),
// and the magnetic-current variant divides by (1 + i sigma / xi).
// At temperature T (omega_T = 2 T) the thermal weight is g(xi) multiplied by
// coth(omega / omega_T); its zero-frequency pole is split off and handled in
// closed form, leaving the pole-subtracted factor coth(z) - 1/z.

#include <complex>
#include <vector>

namespace casimir {

using cplx = std::complex<double>;

enum class SpectrumKind {
  ZeroTemperature,  // g(xi)
  PoleSubtracted,   // g(xi) [coth(omega/omega_T) - omega_T/omega]
  NaiveCoth,        // g(xi) coth(omega/omega_T)  (control estimator, keeps the pole)
};

enum class Variant { Electric, Magnetic };

// Complex contour frequency, principal branch; requires xi > 0.
cplx omega_contour(double xi, double sigma);

// coth(z) - 1/z, analytic at z = 0 (series for |z| < 1e-3).
cplx coth_minus_pole(cplx z);

// Zero-temperature weight (Electric variant); requires xi > 0.
cplx weight_T0(double xi, double sigma);

// Weight value at frequency xi.  For PoleSubtracted, xi = 0 returns the
// finite limit i sigma^2 / (6 omega_T) (Electric) or 0 (Magnetic); the other
// kinds require xi > 0.  omega_T is ignored for ZeroTemperature.
cplx spectrum_value(SpectrumKind kind, Variant var, double xi, double sigma, double omega_T);

// Closed-form coefficient of the zero-frequency (n = 0) term: the static
// force contribution is  sigma k_B T * (dc area of the electric trace)
// plus k_B T * (plateau of the magnetic trace); this returns sigma k_B T
// = sigma omega_T / 2.  Zero when omega_T = 0.  Requires sigma > 0 when
// omega_T > 0 ("zero-frequency contribution requires sigma > 0").
double zero_mode_constant(double sigma, double omega_T);

// Raised-cosine high-frequency taper: 1 below (1 - fraction) xi_max, rolling
// to 0 at xi_max.
double taper_value(double xi, double xi_max, double fraction);

// g(t_k) = (dxi / pi) sum_j Im[ W_j e^{+i xi_j t_k} ] at t_k = (k + 1/2) dt.
// Bins must be uniform, ascending, start at xi = dxi > 0, and satisfy
// xi.back() <= pi / dt; the window must satisfy n_steps dt <= 2 pi / dxi.
std::vector<double> synthesize(const std::vector<double>& xi, const std::vector<cplx>& W,
                               double dt, int n_steps);

// A time-domain weight sequence along with everything needed to reconstruct
// its spectrum densely (used for the closed-form tail corrections of the
// force integrator).
struct WeightFunction {
  SpectrumKind kind = SpectrumKind::ZeroTemperature;
  Variant variant = Variant::Electric;
  double sigma = 0;
  double omega_T = 0;  // 2 k_B T; 0 at zero temperature
  double dt = 0;
  int n_steps = 0;
  double dxi = 0;
  double xi_max = 0;
  double taper_fraction = 0.1;
  std::vector<double> g;      // weight at t_k = (k + 1/2) dt
  double zero_mode_const = 0; // sigma k_B T (0 at zero temperature)
};

// Builds the tapered spectrum on bins xi_j = j dxi, j = 1 .. J, with
// J = quad_mult * n_steps / 2 and dxi = 2 pi / (quad_mult * n_steps * dt)
// (so xi_max = pi / dt), and synthesizes the time-domain weights.
// quad_mult >= 1 refines the frequency grid relative to the simulation
// window to suppress periodization error.
WeightFunction make_weights(SpectrumKind kind, Variant var, double sigma, double omega_T,
                            double dt, int n_steps, int quad_mult = 4,
                            double taper_fraction = 0.1);

}  // namespace casimir
