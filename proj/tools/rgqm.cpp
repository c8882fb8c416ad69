// rgqm <task> --config run.json --out dir [--convention laplacian|paper] [--seed-check]
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgqm/cli_runner.hpp"
#include "rgqm/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mode-by-mode renormalization group flows for 1D quantum mechanics"};
  std::string task;
  std::string config;
  std::string out = ".";
  std::string convention;
  bool seed_check = false;
  app.add_option("task", task, "lpa | couplings | generalized | kinetic | oracle | fq_demo | compare");
  app.add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory");
  app.add_option("--convention", convention, "frequency convention")
      ->check(CLI::IsMember({"laplacian", "paper"}));
  app.add_flag("--seed-check", seed_check, "validate the pairing counts against quadrature first");
  CLI11_PARSE(app, argc, argv);

  if (seed_check) {
    std::string summary;
    const bool ok = rgqm::write_seed_check(out, &summary);
    std::cout << summary;
    if (!ok) {
      std::cerr << "seed check failed; flows are not trusted\n";
      return 1;
    }
    if (task.empty()) return 0;
  }
  if (task.empty()) {
    std::cerr << "no task given\n" << app.help();
    return 2;
  }

  try {
    nlohmann::json j = nlohmann::json::object();
    if (!config.empty()) {
      std::ifstream in(config);
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        j = nlohmann::json::parse(ss.str());
      } catch (const nlohmann::json::parse_error& e) {
        throw rgqm::ConfigError("", std::string("malformed JSON: ") + e.what());
      }
    }
    if (!j.is_object()) throw rgqm::ConfigError("", "top level must be an object");
    if (j.contains("task") && j["task"] != task)
      throw rgqm::ConfigError("task", "config says '" + j["task"].dump() + "', command line says '" + task + "'");
    j["task"] = task;
    if (!convention.empty()) j["discretization"]["freq_convention"] = convention;
    const rgqm::RunConfig cfg = rgqm::parse_config(j.dump());
    const rgqm::RunManifest m = rgqm::dispatch(cfg, out);
    std::cout << m.json["digest"].dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rgqm::exit_code_for(std::current_exception());
  }
}
