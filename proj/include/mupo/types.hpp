#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace mupo {

/// Reward components of a single rollout. The invariant, maintained by
/// total_reward(), is total = r_acc + r_fmt + lambda * [r_acc == 1] * r_div:
/// the diversity term is gated on correctness.
struct RewardBreakdown {
  double r_acc = 0.0;
  double r_fmt = 0.0;
  double r_div = 0.0;
  double lambda = 0.0;
  double total = 0.0;
};

/// One sampled response. The embedding row is unit norm; reward and group
/// are absent until scoring / partitioning has run.
struct RolloutRecord {
  int rollout_id = 0;
  std::string example_id;
  int token_count = 1;
  bool correct = false;
  bool well_formed = false;
  Eigen::VectorXd embedding;
  std::optional<RewardBreakdown> reward;
  std::optional<int> group;
};

/// Assignment of n rollouts to k groups. assignments[i] is the group index
/// of rollout id i; group_sizes has one positive entry per group.
struct GroupPartition {
  std::vector<int> assignments;
  std::vector<int> group_sizes;
  int k = 0;
  int n = 0;
};

/// Single-group partition (everything in group 0). The degenerate case the
/// plain GRPO path runs on.
GroupPartition single_group_partition(int n);

/// Asserts every partition invariant: sizes sum to n, every size >= g_min,
/// every rollout assigned to a group in [0, k), no empty group. Throws
/// std::invalid_argument describing the first violation.
void validate_partition(const GroupPartition& p, int g_min);

}  // namespace mupo
