#pragma once

#include "mupo/config.hpp"
#include "mupo/types.hpp"

#include <Eigen/Core>

namespace mupo {

/// Normalized per-rollout advantages. std_floor_hits counts normalization
/// scopes whose reward std fell below the floor (those scopes get all-zero
/// advantages instead of a blow-up).
struct AdvantageSet {
  Eigen::VectorXd per_rollout;
  AdvantageScope scope = AdvantageScope::kGlobal;
  int std_floor_hits = 0;
};

/// Everything the clipped surrogate needs for one batch. Ratios are the
/// new-over-old policy probability ratios, strictly positive; token_counts
/// drive the per-token broadcast of each rollout's advantage.
struct SurrogateInputs {
  Eigen::VectorXd ratios;
  AdvantageSet advantages;
  double clip_eps = 0.2;
  Eigen::VectorXi token_counts;
};

/// (R_i - mean) / std over the whole batch, population std by default.
/// Rewards with std below std_floor yield all-zero advantages. Needs at
/// least two rewards.
AdvantageSet grpo_advantages(const Eigen::VectorXd& rewards, double std_floor = 1e-6,
                             bool sample_std = false);

/// w_k = (n / (k * group_size))^beta.
double load_balance_weight(int n, int k, int group_size, double beta);

/// Group-local scope applies the batch normalization independently inside
/// each group (every group needs >= 2 members); global scope normalizes all
/// rewards together and is provided for comparison.
AdvantageSet mupo_advantages(const Eigen::VectorXd& rewards, const GroupPartition& partition,
                             AdvantageScope scope, double std_floor = 1e-6,
                             bool sample_std = false);

/// min(ratio * adv, clamp(ratio, 1 - eps, 1 + eps) * adv).
double clipped_surrogate(double ratio, double advantage, double clip_eps);

/// Mean clipped-surrogate term over a single group of rollouts; each
/// rollout's term is the mean over its token positions of the broadcast
/// advantage (identical per token, kept for gradient attribution).
double grpo_objective(const SurrogateInputs& inputs);

/// Sum over groups of w_k / |G_k| times the group's surrogate terms, with
/// w_k from load_balance_weight. Degenerates to grpo_objective at k = 1.
double mupo_objective(const SurrogateInputs& inputs, const GroupPartition& partition,
                      double beta);

}  // namespace mupo
