#pragma once
// Maxwell stress-tensor accumulation: turns impulse-response simulations on a
// measurement surface into the two time traces (electric-sourced and
// magnetic-sourced) that the force integrator consumes.
//
// For the net x-force, constant-x faces carry the T_xx combination
//   TM:  1/2 (Hx^2 - Hy^2 - Ez^2),   TE:  1/2 (Ex^2 - Ey^2 - Hz^2),
// and constant-y faces the shear T_xy:  Hx Hy (TM) or Ex Ey (TE);
// in 1D only  -1/2 (E^2 + H^2)  survives.  Each squared-field expectation is
// realized by sourcing a unit current impulse at the sample location and
// recording the field there; products of distinct components average the two
// source/probe orderings.  Points are processed in a canonical order so the
// result is independent of the order in which the surface lists its points.

#include <optional>
#include <string>
#include <vector>

#include "casimir/fdtd.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

// One product term of the stress tensor on a face.
struct StressTerm {
  double coef = 0;       // weight of <a b> in the x-force integrand
  bool magnetic = false; // true: sourced by magnetic current (accumulates into gamma_H)
  FieldComp a = FieldComp::Ez, b = FieldComp::Ez;
};

// Term table for a face ('x' or 'y') under the given polarization.
// 1D scenes ignore `pol` and have x-faces only.
const std::vector<StressTerm>& stress_terms(Polarization pol, char face, bool two_d);

struct StressTrace {
  std::vector<double> gamma_E;  // electric-sourced trace, length n_steps
  std::vector<double> gamma_H;  // magnetic-sourced trace
  double dt = 0;
  double sigma = 0;
  int n_steps = 0;
  int sims_run = 0;             // unique simulations executed
  bool converged = true;        // every contributing response met the decay criterion
};

struct AssembleOptions {
  int jobs = 1;                           // worker threads for independent simulations
  std::optional<std::string> dump_path;   // write "step,gamma_E,gamma_H" rows here
  std::optional<std::string> raw_dump_path;  // write "sim,step,value" rows per response
};

// Runs every impulse-response simulation required by the surface and
// accumulates the two traces.  Deterministic for fixed inputs regardless of
// `jobs` or of the ordering of surf.points.
StressTrace assemble_stress_trace(const PECMask& mask, const StressSurface& surf,
                                  Polarization pol, const SimParams& prm,
                                  const AssembleOptions& opt = {});

}  // namespace casimir
