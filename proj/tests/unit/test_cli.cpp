#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fvnsf/commands.hpp"

using namespace fvnsf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string c; std::getline(in, c, ',');) out.push_back(c);
  return out;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fvnsf_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("number formatting") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(HUGE_VAL) == "inf");
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("config parsing") {
  RunConfig c = parse(
      "# comment\n[grid]\ndim = 3\nn = 8 ; trailing\n[time]\ndt = 1/64\nt_end = 1/8\n"
      "[physics]\ngamma = 5/3\n[scheme]\nalpha = 2/3\neps = -0.25\n[ic]\npreset = thermal-spot\n");
  CHECK(c.dim == 3);
  CHECK(c.n == 8);
  CHECK(*c.dt == 1.0 / 64);
  CHECK(c.params.gas.gamma == doctest::Approx(5.0 / 3.0));
  CHECK(*c.params.alpha == doctest::Approx(2.0 / 3.0));
  CHECK(c.params.eps == -0.25);
  CHECK(c.preset == "thermal-spot");
  CHECK_FALSE(parse("[scheme]\nalpha = none\n").params.alpha.has_value());
  CHECK(parse("").resolved_dt() == 0.5 / 32);

  CHECK(config_error("[grid]\nsize = 3\n").find("unknown key") != std::string::npos);
  CHECK(config_error("[mesh]\n").find("unknown section") != std::string::npos);
  CHECK(config_error("[physics]\ngamma = 1\n").find("physics.gamma") != std::string::npos);
  CHECK(config_error("[grid]\nn = x\n").find("grid.n") != std::string::npos);
  CHECK(config_error("[time]\nt_end = 0.1\ndt = 0.03\n").find("time.t_end") != std::string::npos);
  CHECK(config_error("[ic]\npreset = vortex\n").find("ic.preset") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("run command writes a timeseries") {
  RunConfig c = parse("[grid]\nn = 8\n[time]\ndt = 1/80\nt_end = 1/8\n[ic]\npreset = constant\n");
  fs::path out = scratch("run");
  std::ostringstream log;
  CHECK(run_command(c, out, log) == 0);
  auto l = lines(slurp(out / "timeseries.csv"));
  REQUIRE(l.size() == 11);
  CHECK(l[0] == kTimeseriesHeader);
  const auto header = split(l[0]);
  for (std::size_t i = 1; i < l.size(); ++i) {
    auto cols = split(l[i]);
    REQUIRE(cols.size() == header.size());
    CHECK(std::stoi(cols[0]) == static_cast<int>(i));
    CHECK(std::abs(std::stod(cols[10])) <= 1e-12);
  }
  const std::string first = slurp(out / "timeseries.csv");
  CHECK(run_command(c, out, log) == 0);
  CHECK(slurp(out / "timeseries.csv") == first);
}

TEST_CASE("study command writes eoc rows") {
  RunConfig c = parse(
      "[grid]\nn = 4\n[time]\nt_end = 1/8\n[ic]\npreset = constant\n[study]\nlevels = 4, 8\n"
      "reference = 16\n");
  fs::path out = scratch("study");
  std::ostringstream log;
  CHECK(study_command(c, out, log) == 0);
  auto l = lines(slurp(out / "eoc.csv"));
  REQUIRE(l.size() == 3);
  CHECK(l[0] == kEocHeader);
  auto r1 = split(l[1]), r2 = split(l[2]);
  CHECK(r1[0] == "4");
  CHECK(r1[9] == "nan");
  CHECK(std::stod(r1[3]) <= 1e-14);
  CHECK(r2[9] == "nan");  // zero errors give no rate
  CHECK(fs::exists(out / "timeseries_N4.csv"));
  CHECK(fs::exists(out / "timeseries_N8.csv"));
  CHECK(slurp(out / "study_report.txt").find("self-convergence") != std::string::npos);

  RunConfig s = parse(
      "[grid]\nn = 4\n[time]\nt_end = 1/8\n[study]\nlevels = 4, 8, 16\nreference = 32\n");
  fs::path out3 = scratch("study3");
  CHECK(study_command(s, out3, log) == 0);
  auto l3 = lines(slurp(out3 / "eoc.csv"));
  REQUIRE(l3.size() == 4);
  CHECK(split(l3[1])[9] == "nan");
  CHECK(split(l3[2])[9] != "nan");
  CHECK(split(l3[3])[9] != "nan");
}

TEST_CASE("check command") {
  RunConfig c;
  c.trials = 10;
  fs::path out = scratch("check");
  std::ostringstream log;
  CHECK(check_command(c, out, log) == 0);
  CHECK(log.str().find("FAIL") == std::string::npos);
  const std::string csv = slurp(out / "check.csv");
  CHECK(csv.rfind("property,passed,worst,threshold\n", 0) == 0);
  std::ostringstream log2;
  CHECK(check_command(c, out, log2) == 0);
  CHECK(slurp(out / "check.csv") == csv);

  // deliberately broken jump orientation must be caught
  OperatorTable broken;
  broken.grad_E = [](const CellField& r) {
    FaceField w(r.grid_ptr());
    const Grid& g = r.grid();
    for (Index id = 0; id < g.num_faces(); ++id) {
      Face f = g.face(id);
      w(id) = (r(f.in_cell) - r(f.out_cell)) / g.h();
    }
    return w;
  };
  std::ostringstream log3;
  CHECK(check_command(c, scratch("check_broken"), log3, broken) == 1);
  CHECK(log3.str().find("FAIL duality") != std::string::npos);
}

TEST_CASE("consistency command") {
  RunConfig c = parse("[consistency]\nlevels = 4, 8\ntau = 1/16\n");
  fs::path out = scratch("consistency");
  std::ostringstream log;
  CHECK(consistency_command(c, out, log) == 0);
  auto l = lines(slurp(out / "consistency.csv"));
  REQUIRE(l.size() == 3);
  CHECK(l[0] == kConsistencyHeader);
  CHECK(split(l[1]).size() == 7);
  CHECK(std::stod(split(l[2])[6]) >= 0.0);
  CHECK(fs::exists(out / "consistency_detail.csv"));
}

TEST_CASE("error lines") {
  CHECK(error_line(SolverError(SolverError::Kind::NoConvergence, "step 3: no \"luck\"", 3)) ==
        "error kind=NoConvergence step=3 message=\"step 3: no \\\"luck\\\"\"");
  CHECK(error_line(ConfigError("physics.gamma must be > 1")) ==
        "error kind=ConfigError step=- message=\"physics.gamma must be > 1\"");
  CHECK(error_line(std::runtime_error("x")).find("kind=Error") != std::string::npos);
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) {
    for (int d : {2, 3}) {
      InitialData ic = make_preset(name, d);
      CHECK(ic.u.size() == static_cast<std::size_t>(d));
      Point x{0.3, 0.7, 0.1};
      CHECK(ic.rho(x) > 0.0);
      CHECK(ic.theta(x) > 0.0);
    }
  }
  CHECK(make_preset("constant", 2).rho({0.2, 0.4, 0.0}) == 1.0);
  CHECK_THROWS_AS(make_preset("vortex", 2), std::invalid_argument);
  CHECK_THROWS_AS(make_preset("smooth-wave", 2, {1.0, 0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_preset("thermal-spot", 2, {0.2, 0.1, -1.0}), std::invalid_argument);
}
