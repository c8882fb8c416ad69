#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rgqm/continuum_artifact.hpp"
#include "rgqm/core.hpp"

namespace rgqm {

enum class Task { Lpa, Couplings, Generalized, Kinetic, Oracle, FqDemo, Compare };

Task task_from_string(const std::string& s);  // ConfigError at "task"
std::string to_string(Task t);

struct RunConfig {
  Task task = Task::Lpa;

  // V = sum a[i] x^i; filled from physics when potential is absent
  std::vector<double> potential;
  double mass = 1.0;
  double hbar = 1.0;
  double omega = 1.0;
  double lambda = 0.0;

  int n_slices = 0;
  double epsilon = 0.0;
  double beta = 0.0;
  FreqConvention convention = FreqConvention::Laplacian;

  double x_min = -4.0;
  double x_max = 4.0;
  int n_points = 81;

  int max_order = 8;

  double cutoff = 0.0;   // continuum Lambda, 0 when unused
  double delta_k = 0.0;

  std::vector<double> kinetic{1.0};  // Z(x) coefficients

  ShellSpec shell;
  double q_max = 2e-3;
  int q_steps = 40;
  DiscreteProbe probe;

  int basis_size = 200;

  std::string output_path = ".";
  std::string format = "csv";

  // Resolved configuration, defaults included.
  nlohmann::json echo;

  FlowParams params() const;
};

// Throws ConfigError(path, reason) on any missing or inconsistent field.
RunConfig parse_config(const std::string& text);

struct RunManifest {
  nlohmann::json json;
  std::vector<std::string> files;
};

// Runs the task, writes its CSV/JSON outputs and manifest.json under out_dir. On failure the
// manifest and any partial trace are written before the exception is rethrown.
RunManifest dispatch(const RunConfig& cfg, const std::string& out_dir);

// 0 ok, 1 other, 2 ConfigError, 3 ConvexityError, 4 NonConvergence, 5 NegativeGapError.
int exit_code_for(std::exception_ptr e);

// Writes seed_check.csv (name, oracle, formula, pass, informational) and returns all_pass.
bool write_seed_check(const std::string& out_dir, std::string* summary = nullptr);

std::string format_double(double v);

}  // namespace rgqm
