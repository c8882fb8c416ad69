#pragma once

#include <string>
#include <vector>

#include "rgqm/brute_force.hpp"

namespace rgqm {

struct SeedCheckLine {
  std::string name;
  double oracle = 0.0;
  double formula = 0.0;
  double tolerance = 1e-6;
  bool pass = false;
  bool informational = false;  // reported, not gating
};

struct SeedCheckReport {
  std::vector<SeedCheckLine> lines;
  double cubic_loop_weight = 0.0;  // oracle value per 3-pairing
  double tree_prefactor = 0.0;     // oracle / printed tree term
  double tree_loop_part = 0.0;     // 1/beta coefficient of the tree-only instance
  bool all_pass() const;
};

// Validates the pairing and partition counts behind flow_g4 and flow_g6 against brute-force
// quadrature on two-mode instances (N = 4, m = 2, background modes -1, 0, 1).
SeedCheckReport run_seed_check(const OracleSpec& spec = {});

}  // namespace rgqm
