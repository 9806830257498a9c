#pragma once

#include <cstdint>
#include <string>

namespace mupo {

// Which reward population an advantage is normalized against.
enum class AdvantageScope { kGroupLocal, kGlobal };

std::string to_string(AdvantageScope scope);
AdvantageScope advantage_scope_from_string(const std::string& s);

/// Batch-level settings shared by the optimizer, the grouping stage and the
/// simulator. Defaults: 15 responses per example split into 3 groups of at
/// least 3, load-balance exponent 1, diversity weight annealed 0.4 -> 0.1.
struct MupoConfig {
  int n = 15;          // responses sampled per example
  int k = 3;           // number of groups
  int g_min = 3;       // minimum group size
  double beta = 1.0;   // load-balance exponent, >= 0
  double lambda_max = 0.4;
  double lambda_min = 0.1;
  int t_max = 200;     // total training steps for the annealing schedule
  double clip_eps = 0.2;
  double std_floor = 1e-6;  // smallest std treated as nonzero
  AdvantageScope advantage_scope = AdvantageScope::kGroupLocal;
  std::uint64_t seed = 0;
  bool sample_std = false;  // population std by default
  bool k_reduced = false;   // set by validate_config when k had to be lowered
};

bool operator==(const MupoConfig& a, const MupoConfig& b);

/// Checks every config invariant and returns the config unchanged when they
/// hold. An infeasible group count (k * g_min > n) is not an error: k is
/// reduced to floor(n / g_min), at least 1, and k_reduced is set. Violations
/// of the remaining invariants throw std::invalid_argument naming the field.
/// Validating an already-validated config returns it byte-identically.
MupoConfig validate_config(const MupoConfig& cfg);

}  // namespace mupo
