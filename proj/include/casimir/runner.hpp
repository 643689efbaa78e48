#pragma once
// Sweep orchestration for the command-line tool: expands a RunConfig into
// geometry/temperature/conductivity points, runs the requested methods, and
// writes deterministic CSV reports.
//
// Row schema (one row per geometry point, tau, sigma, and method):
//   method,kind,a,d,tau,sigma,resolution,F_total,F_n0,F_npos,F_TE,F_TM,oracle_rel_err
// Rows are sorted by (kind, a, d, tau, sigma, method); d is blank for 1D
// scenes and "inf" for the open piston; F_TE/F_TM are blank in 1D; the
// oracle_rel_err column is filled on timedomain/naive_control rows whenever
// the reference method ran for the same point.  A failed computation emits a
// row with method "error" and blank values (message on stderr), the
// remaining points still run, and the process exits with code 2.
//
// Reported forces use the convention that negative values are attractive;
// 1D values are per unit plate area (F a^2 scaling removed), 2D values per
// unit length.  With resolution r, lattice results are scaled by r^2 (1D)
// or r^3 (2D) so rows at different resolutions are directly comparable.

#include <string>

#include "casimir/config.hpp"

namespace casimir {

struct RunOptions {
  int jobs = 1;
  bool timestamp = true;
  bool debug_dumps = false;
};

// Force sweep; writes cfg.path.  Returns the process exit code (0 or 2).
int cmd_run(const RunConfig& cfg, const RunOptions& opt);

// Weight inspection; writes <stem>_spectrum.csv and <stem>_time.csv where
// <stem> is cfg.path without a trailing ".csv".  Returns exit code.
int cmd_weights(const RunConfig& cfg, const RunOptions& opt);

// Reference-summation table (n, xi_n, f(xi_n), partial sum); writes cfg.path.
int cmd_reference(const RunConfig& cfg, const RunOptions& opt);

}  // namespace casimir
