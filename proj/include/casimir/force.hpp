#pragma once
// Force integration: contracts stress traces with time-domain weights and
// adds the closed-form zero-frequency (n = 0) term.
//
// The positive-frequency part subtracts two slowly decaying canonical
// components from the traces before the weighted time sum -- the constant
// plateau of the magnetic trace and a unit-area discharge pulse
// p_k = C r^k (r the per-step damping factor, dt sum_k p_k = 1) carrying the
// dc area of the electric trace -- and adds their contributions back through
// dense frequency integrals using the exact discrete-time transforms of
// those two sequences.  This removes the truncation error that a plain
// weighted sum suffers from trace components that have not decayed within
// the window.
//
// The n = 0 term is exact in closed form:
//   F_n0 = sigma k_B T * (dt sum_k gamma_E) + k_B T * (plateau of gamma_H).

#include "casimir/stress.hpp"
#include "casimir/weights.hpp"

namespace casimir {

struct ForceResult {
  double total = 0;
  double n0 = 0;     // zero-frequency (static) contribution
  double npos = 0;   // positive-frequency contribution
  double c_inf = 0;  // magnetic-trace plateau
  bool converged = true;
};

// Plateau of the trailing 5% window of the magnetic trace.
double trace_plateau(const std::vector<double>& gamma_H);

// Zero-frequency contribution alone; omega_T = 2 k_B T (0 -> returns 0).
double zero_mode_force(const StressTrace& tr, double sigma, double omega_T);

// Full force from a trace pair.  `wE` must be the Electric variant and `wH`
// the Magnetic variant of the same spectrum kind, built with the trace's dt
// and n_steps; kinds ZeroTemperature and PoleSubtracted are accepted (the
// pole-subtracted kind adds the closed-form n = 0 term).
ForceResult integrate_force(const StressTrace& tr, const WeightFunction& wE,
                            const WeightFunction& wH);

// Control estimator: plain weighted time sum with NaiveCoth weights, the
// zero-frequency bin approximated by adding the constant
// (dxi / pi) * zero_bin_value * 1/2 to both weight sequences.  No plateau or
// discharge-pulse handling and no closed-form n = 0 term.
ForceResult integrate_force_naive(const StressTrace& tr, const WeightFunction& wE,
                                  const WeightFunction& wH, double zero_bin_value);

}  // namespace casimir
