#pragma once
// Leapfrog (Yee) time stepping on the staggered lattice with uniform
// conductivity sigma and perfectly conducting bodies.
//
// Update order within step k (fields start at E_k, H_{k-1/2}):
//   1. H += dt * (-curl E)                     -> H_{k+1/2}
//   2. at k == 0: magnetic impulse  H -= w     (unit-strength current K)
//   3. E  = ca E + cb curl H,  ca = (1-s)/(1+s), cb = dt/(1+s), s = sigma dt/2
//      masked tangential-E samples reset to zero
//   4. at k == 0: electric impulse E -= cb (w / dt), masked again
//   5. probes recorded -> sample k of every series
// Both electric and magnetic probe series are therefore associated with
// t_k = (k + 1/2) dt when matched against time-domain weights.

#include <cstdint>
#include <vector>

#include "casimir/geometry.hpp"

namespace casimir {

struct SimParams {
  double sigma = 0.0;
  double dt = 0.5;        // Courant limit: dt <= 1 in 1D, dt <= 1/sqrt(2) in 2D
  int max_steps = 4096;
  double tail_tol = 1e-6; // decay criterion, relative to the series peak
  bool early_stop = true; // test the decay criterion at 1/4, 1/2, 3/4 of max_steps
  bool require_decay = true;  // throw "non-decaying run" if the criterion fails
};

struct ImpulseResponse {
  // One series per probe list, each of length max_steps; series that
  // converged early are extended with their trailing mean.
  std::vector<std::vector<double>> probes;
  int n_used = 0;     // steps actually simulated
  bool converged = false;
};

// Drives a unit current impulse on `source` (all samples must share one
// field component class: electric or magnetic) and records each probe list.
ImpulseResponse run_impulse_response(const PECMask& mask, Polarization pol,
                                     const SampleList& source,
                                     const std::vector<SampleList>& probes,
                                     const SimParams& prm);

// Decay criterion used for early stopping: with mu the mean of the trailing
// 5% window, max |x - mu| over that window must not exceed
// tail_tol * max |x - mu| over the whole series.
bool series_decayed(const std::vector<double>& x, double tail_tol);

// Staggered-lattice energy 1/2 |E_k|^2 + 1/2 <H_{k+1/2}, H_{k-1/2}> per step
// for random initial fields (free E samples only); exactly conserved at
// sigma = 0 and non-increasing for sigma > 0.
std::vector<double> run_energy_series(const PECMask& mask, Polarization pol,
                                      double sigma, double dt, int n_steps, unsigned seed);

// --- low-level engines (public state; tests drive them directly) ---

class Sim1D {
 public:
  Sim1D(const PECMask& mask, double sigma, double dt);
  void step_h();                     // H update (Faraday half of the leapfrog)
  void step_e();                     // E update (Ampere + damping) and mask
  void apply_mask();
  double probe(const SampleList& p) const;
  int nx() const { return nx_; }
  double cb() const { return cb_; }

  std::vector<double> e, h;          // e: nodes 0..nx, h: cells 0..nx-1

 private:
  int nx_;
  double dt_, ca_, cb_;
  std::vector<std::int32_t> masked_;
};

class SimTM {
 public:
  SimTM(const PECMask& mask, double sigma, double dt);
  void step_h();
  void step_e();
  void apply_mask();
  double probe(const SampleList& p) const;
  double cb() const { return cb_; }

  int nx, ny;                         // cells
  std::vector<double> ez, hx, hy;     // ez (nx+1)x(ny+1), hx (nx+1)x(ny), hy (nx)x(ny+1)
  double& EZ(int i, int j) { return ez[static_cast<size_t>(i) * (ny + 1) + j]; }
  double& HX(int i, int j) { return hx[static_cast<size_t>(i) * ny + j]; }
  double& HY(int i, int j) { return hy[static_cast<size_t>(i) * (ny + 1) + j]; }

 private:
  double dt_, ca_, cb_;
  std::vector<std::int32_t> masked_;
};

class SimTE {
 public:
  SimTE(const PECMask& mask, double sigma, double dt);
  void step_h();
  void step_e();
  void apply_mask();
  double probe(const SampleList& p) const;
  double cb() const { return cb_; }

  int nx, ny;
  std::vector<double> hz, ex, ey;     // hz (nx)x(ny), ex (nx)x(ny+1), ey (nx+1)x(ny)
  double& HZ(int i, int j) { return hz[static_cast<size_t>(i) * ny + j]; }
  double& EX(int i, int j) { return ex[static_cast<size_t>(i) * (ny + 1) + j]; }
  double& EY(int i, int j) { return ey[static_cast<size_t>(i) * ny + j]; }

 private:
  double dt_, ca_, cb_;
  std::vector<std::int32_t> masked_ex_, masked_ey_;
};

}  // namespace casimir
