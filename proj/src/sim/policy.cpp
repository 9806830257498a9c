#include "mupo/sim/policy.hpp"

#include "mupo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mupo::sim {

namespace {

void check_trajectory(const TabularPolicy& policy, const Eigen::VectorXi& trajectory) {
  if (trajectory.size() != policy.logits.rows()) {
    throw std::invalid_argument("policy: trajectory length differs from the step count");
  }
  for (Eigen::Index t = 0; t < trajectory.size(); ++t) {
    if (trajectory[t] < 0 || trajectory[t] >= policy.logits.cols()) {
      throw std::invalid_argument("policy: action index out of range");
    }
  }
}

}  // namespace

Eigen::VectorXd TabularPolicy::step_probs(int t) const {
  const Eigen::VectorXd scaled = logits.row(t).transpose() / temperature;
  const Eigen::VectorXd shifted = scaled.array() - scaled.maxCoeff();
  const Eigen::VectorXd expd = shifted.array().exp();
  return expd / expd.sum();
}

Eigen::MatrixXd TabularPolicy::step_prob_matrix() const {
  Eigen::MatrixXd probs(logits.rows(), logits.cols());
  for (int t = 0; t < num_steps(); ++t) probs.row(t) = step_probs(t).transpose();
  return probs;
}

double TabularPolicy::log_prob(const Eigen::VectorXi& trajectory) const {
  check_trajectory(*this, trajectory);
  double total = 0.0;
  for (int t = 0; t < num_steps(); ++t) {
    const Eigen::VectorXd scaled = logits.row(t).transpose() / temperature;
    const double max = scaled.maxCoeff();
    const double lse = max + std::log((scaled.array() - max).exp().sum());
    total += scaled[trajectory[t]] - lse;
  }
  return total;
}

TabularPolicy TabularPolicy::zeros(int steps, int actions) {
  if (steps < 1 || actions < 1) throw std::invalid_argument("policy: empty shape");
  TabularPolicy policy;
  policy.logits = Eigen::MatrixXd::Zero(steps, actions);
  return policy;
}

SampleBatch sample_batch(const TabularPolicy& policy, int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("sample_batch: n must be >= 1");
  const int steps = policy.num_steps();
  const Eigen::MatrixXd probs = policy.step_prob_matrix();

  SampleBatch batch;
  batch.trajectories.resize(n, steps);
  batch.log_probs.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < steps; ++t) {
      batch.trajectories(i, t) = sample_categorical(probs.row(t).transpose(), rng);
    }
    // Same log-softmax path as log_prob so later ratios against the
    // sampling policy come out exactly 1.
    batch.log_probs[i] = policy.log_prob(batch.trajectories.row(i).transpose());
  }
  return batch;
}

}  // namespace mupo::sim
