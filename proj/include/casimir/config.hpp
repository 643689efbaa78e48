#pragma once
// Plain-text run configuration: lines of "section.key = value" with '#'
// comments.  Lists are comma separated.  Unknown keys are rejected by name;
// all values are validated against the preconditions of the modules they
// feed before any simulation starts.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/geometry.hpp"

namespace casimir {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { TimeDomain, Reference, NaiveControl };

const char* to_string(Method m);

struct RunConfig {
  // geometry
  GeometryKind kind = GeometryKind::ParallelPlates1D;
  std::vector<int> a_list = {40};                      // gap sweep
  int wall = 2;                                        // 1D plate thickness
  int pad = 20;                                        // lateral vacuum margin
  int s = 16;                                          // piston block side
  std::vector<std::optional<int>> d_list = {48};       // piston sidewall separations (nullopt = inf)

  // physics
  std::vector<double> tau_list = {0.0};                // reduced temperature T*a
  std::vector<double> sigma_list;                      // empty -> sigma = 1/a per point
  std::vector<Polarization> polarizations = {Polarization::TM, Polarization::TE};

  // numerics
  int resolution = 1;
  double dt_factor = 0.5;
  int max_steps = 4096;
  double tail_tol = 1e-6;
  int quad_mult = 4;
  double taper_fraction = 0.1;
  double naive_zero_bin = 0.0;

  // outputs
  std::string path = "casimir_out.csv";
  std::vector<Method> methods = {Method::TimeDomain};
};

// Parses and validates; throws ConfigError with the offending key/line.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace casimir
