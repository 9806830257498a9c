#pragma once

#include <Eigen/Core>

#include <random>

namespace mupo::sim {

/// Factorized categorical policy over discrete trajectories: one logit row
/// per step, softmax at the configured temperature per step, trajectory
/// log-probability the sum of per-step log-probabilities.
struct TabularPolicy {
  Eigen::MatrixXd logits;  // steps x actions
  double temperature = 1.0;

  int num_steps() const { return static_cast<int>(logits.rows()); }
  int num_actions() const { return static_cast<int>(logits.cols()); }

  /// Softmax of logit row t at the sampling temperature.
  Eigen::VectorXd step_probs(int t) const;

  /// All per-step distributions, one row per step.
  Eigen::MatrixXd step_prob_matrix() const;

  double log_prob(const Eigen::VectorXi& trajectory) const;

  static TabularPolicy zeros(int steps, int actions);
};

struct SampleBatch {
  Eigen::MatrixXi trajectories;  // n x steps
  Eigen::VectorXd log_probs;     // under the sampling policy
};

/// n i.i.d. trajectories from the factorized policy; deterministic given the
/// generator state.
SampleBatch sample_batch(const TabularPolicy& policy, int n, std::mt19937_64& rng);

}  // namespace mupo::sim
