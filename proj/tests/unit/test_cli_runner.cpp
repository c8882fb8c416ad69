#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "rgqm/cli_runner.hpp"
#include "rgqm/errors.hpp"

using namespace rgqm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string error_path(const json& j) {
  try {
    parse_config(j.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("rgqm_test_" + name);
  fs::remove_all(d);
  return d;
}

json base() {
  return {{"task", "lpa"}, {"discretization", {{"N", 64}, {"beta", 8.0}}}};
}

}  // namespace

TEST_CASE("config errors carry the offending path") {
  CHECK(error_path(json::object()) == "task");
  CHECK(error_path({{"task", "nope"}}) == "task");
  CHECK(error_path({{"task", "lpa"}}) == "discretization.N");
  json j = base();
  j["discretization"]["N"] = 5;
  CHECK(error_path(j) == "discretization.N");
  j = base();
  j["discretization"].erase("beta");
  CHECK(error_path(j) == "discretization.epsilon");
  j = base();
  j["discretization"]["epsilon"] = 1.0;
  CHECK(error_path(j) == "discretization.beta");
  j = base();
  j["physics"] = {{"M", -1.0}};
  CHECK(error_path(j) == "physics.M");
  j = base();
  j["grid"] = {{"x_min", 1.0}, {"x_max", 0.0}};
  CHECK(error_path(j) == "grid.x_max");
  j = base();
  j["discretization"]["freq_convention"] = "other";
  CHECK(error_path(j) == "discretization.freq_convention");
  j = base();
  j["potential"] = {{"coefficients", json::array()}};
  CHECK(error_path(j) == "potential.coefficients");
  j = base();
  j["output"] = {{"format", "xml"}};
  CHECK(error_path(j) == "output.format");
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("defaults are resolved and echoed") {
  const RunConfig c = parse_config(base().dump());
  CHECK(c.task == Task::Lpa);
  CHECK(c.epsilon == doctest::Approx(8.0 / 65.0));
  CHECK(c.potential == std::vector<double>{0.0, 0.0, 0.5});
  CHECK(c.echo["grid"]["n_points"] == 81);
  CHECK(c.echo["discretization"]["freq_convention"] == "laplacian");
  CHECK(c.echo["potential_source"] == "physics");
  CHECK(c.params().beta == 8.0);

  json j = base();
  j["discretization"] = {{"N", 10}, {"epsilon", 0.5}};
  CHECK(parse_config(j.dump()).beta == doctest::Approx(5.5));
  for (const char* t : {"lpa", "couplings", "generalized", "kinetic", "oracle", "fq_demo", "compare"})
    CHECK(to_string(task_from_string(t)) == t);
}

TEST_CASE("lpa run writes deterministic outputs and a manifest") {
  const RunConfig c = parse_config(base().dump());
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const RunManifest m = dispatch(c, a.string());
  dispatch(c, b.string());
  for (const auto& f : m.files) CHECK(slurp(a / f) == slurp(b / f));
  CHECK(m.json["status"] == "ok");
  CHECK(m.json["digest"]["E0"].get<double>() == doctest::Approx(0.5).epsilon(0.05));
  const json disk = json::parse(slurp(a / "manifest.json"));
  CHECK(disk["config"] == c.echo);
  CHECK(slurp(a / "potential.csv").rfind("x,V0\r\n", 0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("failure still writes the manifest and the partial trace") {
  json j = base();
  j["discretization"] = {{"N", 256}, {"beta", 30.0}};
  j["potential"] = {{"coefficients", {0.0, 0.0, -1.0, 0.0, 0.25}}};
  j["grid"] = {{"x_min", -3.0}, {"x_max", 3.0}, {"n_points", 61}};
  const fs::path d = scratch("fail");
  std::exception_ptr err;
  try {
    dispatch(parse_config(j.dump()), d.string());
  } catch (...) {
    err = std::current_exception();
  }
  REQUIRE(err);
  CHECK(exit_code_for(err) == 3);
  const json m = json::parse(slurp(d / "manifest.json"));
  CHECK(m["status"] == "error");
  CHECK(m["exit_code"] == 3);
  CHECK(fs::exists(d / "lpa_trace.csv"));
  CHECK_FALSE(fs::exists(d / "potential.csv"));
  fs::remove_all(d);
}

TEST_CASE("json output and the smaller tasks") {
  json j = base();
  j["task"] = "fq_demo";
  j["discretization"] = {{"N", 8}, {"beta", 5.0}};
  j["output"] = {{"format", "json"}};
  const fs::path d = scratch("fq");
  const RunManifest m = dispatch(parse_config(j.dump()), d.string());
  CHECK(fs::exists(d / "fq.csv"));
  CHECK(fs::exists(d / "result.json"));
  CHECK(m.json["digest"]["F_discrete"].get<double>() == 0.0);
  fs::remove_all(d);

  j = base();
  j["task"] = "couplings";
  j["discretization"] = {{"N", 4096}, {"beta", 60.0}};
  const RunManifest c = dispatch(parse_config(j.dump()), scratch("coup").string());
  CHECK(c.json["digest"]["gap"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  fs::remove_all(scratch("coup"));
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(nullptr) == 0);
  CHECK(exit_code_for(std::make_exception_ptr(ConfigError("a", "b"))) == 2);
  CHECK(exit_code_for(std::make_exception_ptr(ConvexityError(1, 0.0, -1.0))) == 3);
  CHECK(exit_code_for(std::make_exception_ptr(NonConvergence("x"))) == 4);
  CHECK(exit_code_for(std::make_exception_ptr(NegativeGapError(-1.0))) == 5);
  CHECK(exit_code_for(std::make_exception_ptr(std::runtime_error("x"))) == 1);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, std::nextafter(1.0, 2.0)})
    CHECK(std::stod(format_double(v)) == v);
}
