#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/config.hpp"
#include "casimir/reference.hpp"
#include "casimir/runner.hpp"

using namespace casimir;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l))
    if (!l.empty()) out.push_back(l);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

const char* kTinyRun =
    "geometry.kind = parallel_plates_1d\n"
    "geometry.a = 8\n"
    "geometry.wall = 2\n"
    "geometry.pad = 4\n"
    "physics.tau = 0, 1.5707963267948966\n"
    "physics.sigma = 0.5\n"
    "physics.polarizations = TM\n"
    "numerics.max_steps = 256\n"
    "outputs.path = test_cli_run.csv\n"
    "outputs.methods = timedomain, reference, naive_control\n";

}  // namespace

TEST_CASE("defaults and kind-dependent defaults") {
  RunConfig c = parse_config_text("geometry.kind = parallel_plates_1d\n");
  CHECK(c.kind == GeometryKind::ParallelPlates1D);
  REQUIRE(c.a_list.size() == 1);
  CHECK(c.a_list[0] == 40);
  CHECK(c.wall == 2);
  CHECK(c.pad == 20);
  CHECK(c.tau_list == std::vector<double>{0.0});
  CHECK(c.sigma_list.empty());  // empty means "pick 1/a per point"
  REQUIRE(c.polarizations.size() == 2);
  CHECK(c.resolution == 1);
  CHECK(c.dt_factor == 0.5);
  CHECK(c.max_steps == 4096);
  CHECK(c.tail_tol == 1e-6);
  CHECK(c.quad_mult == 4);
  CHECK(c.taper_fraction == 0.1);
  CHECK(c.naive_zero_bin == 0.0);
  CHECK(c.path == "casimir_out.csv");
  REQUIRE(c.methods.size() == 1);
  CHECK(c.methods[0] == Method::TimeDomain);

  RunConfig p = parse_config_text("geometry.kind = piston_2d\n");
  REQUIRE(p.a_list.size() == 1);
  CHECK(p.a_list[0] == 16);  // piston sweeps default to the block scale
  CHECK(p.pad == 16);
  CHECK(p.s == 16);
  REQUIRE(p.d_list.size() == 1);
  CHECK(p.d_list[0].has_value());
  CHECK(*p.d_list[0] == 48);

  RunConfig open = parse_config_text(
      "geometry.kind = piston_2d\n"
      "geometry.d = 24, inf\n");
  REQUIRE(open.d_list.size() == 2);
  CHECK(*open.d_list[0] == 24);
  CHECK_FALSE(open.d_list[1].has_value());

  CHECK(std::string(to_string(Method::TimeDomain)) == "timedomain");
  CHECK(std::string(to_string(Method::Reference)) == "reference");
  CHECK(std::string(to_string(Method::NaiveControl)) == "naive_control");
}

TEST_CASE("parser rejects malformed input with the offending line") {
  CHECK_THROWS_WITH_AS(parse_config_text("geometry.kind = parallel_plates_1d\nbogus.key = 1\n"),
                       "unknown key \"bogus.key\" (line 2)", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("geometry.a = 8\ngeometry.a = 12\n"),
                       "duplicate key \"geometry.a\" (line 2)", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("geometry.a\n"),
                       "expected \"section.key = value\", got \"geometry.a\" (line 1)",
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("geometry.wall = two\n"),
                       "value of geometry.wall must be an integer, got \"two\" (line 1)",
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("geometry.kind = sphere\n"),
                       "geometry.kind must be parallel_plates_1d or piston_2d, got \"sphere\" (line 1)",
                       ConfigError);
  // comments and blank lines are fine
  RunConfig c = parse_config_text("# heading\n\ngeometry.a = 12  # trailing\n");
  CHECK(c.a_list[0] == 12);
}

TEST_CASE("validation catches physics and numerics conflicts") {
  CHECK_THROWS_WITH_AS(parse_config_text("physics.tau = 3.14\nphysics.sigma = 0\n"),
                       "zero-frequency contribution requires sigma > 0", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("numerics.dt_factor = 1.5\n"),
                       "numerics.dt_factor exceeds the 1D Courant limit 1", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config_text("geometry.kind = piston_2d\nnumerics.dt_factor = 0.8\n"),
      "numerics.dt_factor exceeds the 2D Courant limit 1/sqrt(2)", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("numerics.resolution = 0\n"),
                       "numerics.resolution must be a positive integer", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("physics.tau = 1, 1\nphysics.sigma = 0.1\n"),
                       "physics.tau entries must be distinct", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("numerics.max_steps = 8\n"),
                       "numerics.max_steps must be at least 16", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("geometry.a = 3\n"),
                       "gap under-resolved: gap must be at least 4 cells", ConfigError);
  // a geometry that only breaks at the run resolution parses at r = 1
  CHECK_NOTHROW(parse_config_text("geometry.a = 4\n"));
}

TEST_CASE("config files load and report open failures") {
  RunConfig c = parse_config_file(std::string(TEST_DATA_DIR) + "/mini1d.cfg");
  CHECK(c.kind == GeometryKind::ParallelPlates1D);
  CHECK(c.a_list[0] == 20);
  CHECK(c.max_steps == 2048);
  REQUIRE(c.methods.size() == 3);
  CHECK_THROWS_WITH_AS(parse_config_file("/nonexistent/x.cfg"),
                       "cannot open config file: /nonexistent/x.cfg", ConfigError);
}

TEST_CASE("force sweep writes a deterministic, sorted report") {
  RunConfig cfg = parse_config_text(kTinyRun);
  RunOptions opt;
  opt.timestamp = false;

  REQUIRE(cmd_run(cfg, opt) == 0);
  std::string first = slurp("test_cli_run.csv");
  REQUIRE(cmd_run(cfg, opt) == 0);
  CHECK(slurp("test_cli_run.csv") == first);  // byte-identical rerun

  std::vector<std::string> rows = lines_of(first);
  REQUIRE(rows.size() == 7);  // header + 2 temperatures x 3 methods
  CHECK(rows[0] ==
        "method,kind,a,d,tau,sigma,resolution,F_total,F_n0,F_npos,F_TE,F_TM,oracle_rel_err");
  // per (tau, sigma) block, methods are ordered by name
  auto f1 = fields_of(rows[1]);
  auto f4 = fields_of(rows[4]);
  REQUIRE(f1.size() == 13);
  CHECK(f1[0] == "naive_control");
  CHECK(fields_of(rows[2])[0] == "reference");
  CHECK(fields_of(rows[3])[0] == "timedomain");
  CHECK(f4[0] == "naive_control");
  CHECK(std::stod(f1[4]) == 0.0);
  CHECK(std::stod(f4[4]) > 1.5);  // second temperature block
  CHECK(f1[1] == "parallel_plates_1d");
  CHECK(f1[3].empty());   // d is blank in 1D
  CHECK(f1[10].empty());  // no TE split in 1D
  CHECK(f1[11].empty());

  // time-domain result tracks the analytic benchmark recorded on its row;
  // on this deliberately tiny 8-cell smoke lattice the benchmark is a
  // difference of two coarse composed terms, so agreement is only ~20%
  auto td0 = fields_of(rows[3]);
  double ftd = std::stod(td0[7]);
  double fref = std::stod(fields_of(rows[2])[7]);
  const double rel = std::fabs(ftd - fref) / std::fabs(fref);
  CHECK(rel < 0.25);
  REQUIRE_FALSE(td0[12].empty());
  CHECK(std::fabs(std::stod(td0[12]) - rel) < 1e-9);  // column matches recomputation
  REQUIRE_FALSE(fields_of(rows[6])[12].empty());
  CHECK(std::stod(fields_of(rows[6])[12]) < 0.25);  // second temperature block
  // reference rows do not compare against themselves
  CHECK(fields_of(rows[2])[12].empty());

  std::remove("test_cli_run.csv");
}

TEST_CASE("weight inspection writes spectrum and time tables") {
  RunConfig cfg = parse_config_text(
      "geometry.kind = parallel_plates_1d\n"
      "geometry.a = 8\n"
      "geometry.pad = 4\n"
      "physics.tau = 1.5707963267948966\n"
      "physics.sigma = 0.25\n"
      "numerics.max_steps = 64\n"
      "outputs.path = test_cli_w.csv\n");
  RunOptions opt;
  opt.timestamp = false;
  REQUIRE(cmd_weights(cfg, opt) == 0);

  std::vector<std::string> spectrum_rows = lines_of(slurp("test_cli_w_spectrum.csv"));
  REQUIRE(spectrum_rows.size() > 1);
  CHECK(spectrum_rows[0] == "a,d,tau,sigma,variant,xi,re,im,taper");
  // J = quad_mult * n_steps / 2 bins per variant
  CHECK(spectrum_rows.size() == 1 + 2 * (4 * 64 / 2));
  bool sawE = false, sawM = false;
  for (size_t i = 1; i < spectrum_rows.size(); ++i) {
    std::string v = fields_of(spectrum_rows[i])[4];
    sawE |= v == "electric";
    sawM |= v == "magnetic";
  }
  CHECK(sawE);
  CHECK(sawM);

  std::vector<std::string> tim = lines_of(slurp("test_cli_w_time.csv"));
  CHECK(tim[0] == "a,d,tau,sigma,variant,t,g,zero_mode_constant");
  CHECK(tim.size() == 1 + 2 * 64);
  auto r1 = fields_of(tim[1]);
  REQUIRE(r1.size() == 8);
  CHECK(std::stod(r1[5]) == 0.25);  // first sample sits at t = dt/2 with dt = 1/2
  std::remove("test_cli_w_spectrum.csv");
  std::remove("test_cli_w_time.csv");
}

TEST_CASE("reference tables expose the summation trace") {
  RunConfig cfg = parse_config_text(
      "geometry.kind = parallel_plates_1d\n"
      "geometry.a = 8\n"
      "geometry.pad = 4\n"
      "physics.tau = 0\n"
      "physics.sigma = 0.5\n"
      "outputs.path = test_cli_ref.csv\n");
  RunOptions opt;
  opt.timestamp = false;
  REQUIRE(cmd_reference(cfg, opt) == 0);

  std::vector<std::string> rows = lines_of(slurp("test_cli_ref.csv"));
  REQUIRE(rows.size() == 1 + 96);  // fixed-order quadrature trace
  CHECK(rows[0] == "kind,a,d,tau,polarization,n,xi_n,f_xi,partial_sum");
  auto last = fields_of(rows.back());
  REQUIRE(last.size() == 9);
  CHECK(last[5] == "95");
  double total = std::stod(last[8]);
  double analytic = lifshitz_parallel_plates_1d(8.0, 0.0).total -
                    lifshitz_parallel_plates_1d(4.0, 0.0).total;
  CHECK(std::fabs(total - analytic) / std::fabs(analytic) < 1e-3);
  std::remove("test_cli_ref.csv");
}
