#include "casimir/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace casimir {

const char* to_string(Method m) {
  switch (m) {
    case Method::TimeDomain: return "timedomain";
    case Method::Reference: return "reference";
    case Method::NaiveControl: return "naive_control";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(const std::string& msg, int line) {
  throw ConfigError(msg + " (line " + std::to_string(line) + ")");
}

int parse_int(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail("value of " + key + " must be an integer, got \"" + v + "\"", line);
  }
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail("value of " + key + " must be a number, got \"" + v + "\"", line);
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool kind_set = false;

  const std::set<std::string> known = {
      "geometry.kind", "geometry.a", "geometry.wall", "geometry.pad", "geometry.s", "geometry.d",
      "physics.tau", "physics.sigma", "physics.polarizations",
      "numerics.resolution", "numerics.dt_factor", "numerics.max_steps", "numerics.tail_tol",
      "numerics.quad_mult", "numerics.taper_fraction", "numerics.naive_zero_bin",
      "outputs.path", "outputs.methods"};

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected \"section.key = value\", got \"" + s + "\"", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (!known.count(key)) fail("unknown key \"" + key + "\"", line);
    if (seen.count(key)) fail("duplicate key \"" + key + "\"", line);
    seen.insert(key);
    if (val.empty()) fail("empty value for \"" + key + "\"", line);

    if (key == "geometry.kind") {
      if (val == "parallel_plates_1d") {
        cfg.kind = GeometryKind::ParallelPlates1D;
      } else if (val == "piston_2d") {
        cfg.kind = GeometryKind::Piston2D;
      } else {
        fail("geometry.kind must be parallel_plates_1d or piston_2d, got \"" + val + "\"", line);
      }
      kind_set = true;
    } else if (key == "geometry.a") {
      cfg.a_list.clear();
      for (const std::string& it : split_list(val)) cfg.a_list.push_back(parse_int(it, key, line));
      if (cfg.a_list.empty()) fail("geometry.a must list at least one gap", line);
    } else if (key == "geometry.wall") {
      cfg.wall = parse_int(val, key, line);
    } else if (key == "geometry.pad") {
      cfg.pad = parse_int(val, key, line);
    } else if (key == "geometry.s") {
      cfg.s = parse_int(val, key, line);
    } else if (key == "geometry.d") {
      cfg.d_list.clear();
      for (const std::string& it : split_list(val)) {
        if (it == "inf") {
          cfg.d_list.push_back(std::nullopt);
        } else {
          cfg.d_list.push_back(parse_int(it, key, line));
        }
      }
      if (cfg.d_list.empty()) fail("geometry.d must list at least one separation", line);
    } else if (key == "physics.tau") {
      cfg.tau_list.clear();
      for (const std::string& it : split_list(val)) cfg.tau_list.push_back(parse_double(it, key, line));
      if (cfg.tau_list.empty()) fail("physics.tau must list at least one temperature", line);
    } else if (key == "physics.sigma") {
      cfg.sigma_list.clear();
      for (const std::string& it : split_list(val))
        cfg.sigma_list.push_back(parse_double(it, key, line));
    } else if (key == "physics.polarizations") {
      cfg.polarizations.clear();
      for (const std::string& it : split_list(val)) {
        if (it == "TM") {
          cfg.polarizations.push_back(Polarization::TM);
        } else if (it == "TE") {
          cfg.polarizations.push_back(Polarization::TE);
        } else {
          fail("physics.polarizations entries must be TM or TE, got \"" + it + "\"", line);
        }
      }
      if (cfg.polarizations.empty()) fail("physics.polarizations must not be empty", line);
    } else if (key == "numerics.resolution") {
      cfg.resolution = parse_int(val, key, line);
    } else if (key == "numerics.dt_factor") {
      cfg.dt_factor = parse_double(val, key, line);
    } else if (key == "numerics.max_steps") {
      cfg.max_steps = parse_int(val, key, line);
    } else if (key == "numerics.tail_tol") {
      cfg.tail_tol = parse_double(val, key, line);
    } else if (key == "numerics.quad_mult") {
      cfg.quad_mult = parse_int(val, key, line);
    } else if (key == "numerics.taper_fraction") {
      cfg.taper_fraction = parse_double(val, key, line);
    } else if (key == "numerics.naive_zero_bin") {
      cfg.naive_zero_bin = parse_double(val, key, line);
    } else if (key == "outputs.path") {
      cfg.path = val;
    } else if (key == "outputs.methods") {
      cfg.methods.clear();
      for (const std::string& it : split_list(val)) {
        if (it == "timedomain") {
          cfg.methods.push_back(Method::TimeDomain);
        } else if (it == "reference") {
          cfg.methods.push_back(Method::Reference);
        } else if (it == "naive_control") {
          cfg.methods.push_back(Method::NaiveControl);
        } else {
          fail("outputs.methods entries must be timedomain, reference, or naive_control; got \"" +
                   it + "\"",
               line);
        }
      }
      if (cfg.methods.empty()) fail("outputs.methods must not be empty", line);
    }
  }

  // kind-dependent geometry defaults
  if (kind_set && cfg.kind == GeometryKind::Piston2D) {
    if (!seen.count("geometry.a")) cfg.a_list = {16};
    if (!seen.count("geometry.pad")) cfg.pad = 16;
  }

  // ---- validation against module preconditions -----------------------------
  const int r = cfg.resolution;
  if (r < 1) throw ConfigError("numerics.resolution must be a positive integer");
  if (cfg.max_steps < 16) throw ConfigError("numerics.max_steps must be at least 16");
  if (!(cfg.tail_tol > 0)) throw ConfigError("numerics.tail_tol must be positive");
  if (cfg.quad_mult < 1) throw ConfigError("numerics.quad_mult must be at least 1");
  if (!(cfg.taper_fraction > 0) || cfg.taper_fraction >= 1)
    throw ConfigError("numerics.taper_fraction must lie in (0, 1)");
  if (cfg.naive_zero_bin < 0) throw ConfigError("numerics.naive_zero_bin must be non-negative");
  if (cfg.path.empty()) throw ConfigError("outputs.path must not be empty");

  const double courant = cfg.kind == GeometryKind::ParallelPlates1D ? 1.0 : 1.0 / std::sqrt(2.0);
  if (!(cfg.dt_factor > 0) || cfg.dt_factor > courant * (1.0 + 1e-12))
    throw ConfigError(cfg.kind == GeometryKind::ParallelPlates1D
                          ? "numerics.dt_factor exceeds the 1D Courant limit 1"
                          : "numerics.dt_factor exceeds the 2D Courant limit 1/sqrt(2)");

  for (double tau : cfg.tau_list)
    if (tau < 0) throw ConfigError("physics.tau entries must be non-negative");
  const bool any_thermal =
      std::any_of(cfg.tau_list.begin(), cfg.tau_list.end(), [](double t) { return t > 0; });
  for (double sg : cfg.sigma_list) {
    if (sg < 0) throw ConfigError("physics.sigma entries must be non-negative");
    if (sg == 0 && any_thermal)
      throw ConfigError("zero-frequency contribution requires sigma > 0");
  }

  {
    std::set<double> uniq(cfg.tau_list.begin(), cfg.tau_list.end());
    if (uniq.size() != cfg.tau_list.size())
      throw ConfigError("physics.tau entries must be distinct");
  }

  // construct every swept geometry once at the run resolution so layout
  // errors surface as validation failures
  try {
    for (int a : cfg.a_list) {
      if (cfg.kind == GeometryKind::ParallelPlates1D) {
        build_parallel_plates_1d(a * r, cfg.wall * r, cfg.pad * r);
      } else {
        for (const std::optional<int>& d : cfg.d_list) {
          std::optional<int> dr = d ? std::optional<int>(*d * r) : std::nullopt;
          build_piston_2d(cfg.s * r, a * r, dr, cfg.pad * r);
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace casimir
