#pragma once

#include "mupo/sim/policy.hpp"

#include <Eigen/Core>

#include <random>
#include <string>
#include <vector>

namespace mupo::sim {

/// One high-reward region: the Hamming ball of the given radius around a
/// prototype trajectory. A trajectory inside the ball is judged correct with
/// probability success_prob.
struct ModeSpec {
  Eigen::VectorXi prototype;
  int radius = 0;
  double success_prob = 1.0;
};

/// Discrete reward landscape. Prototypes must sit further than twice the
/// maximum radius apart so the balls never overlap and mode membership is
/// unambiguous. init_bias is the logit bonus the initial policy places on
/// the first mode's prototype actions, making that mode the "near" one.
struct LandscapeConfig {
  int num_actions = 2;
  int num_steps = 1;
  std::vector<ModeSpec> modes;
  double init_bias = 0.0;

  int embedding_dim() const { return num_actions * num_steps; }
};

void validate_landscape(const LandscapeConfig& land);

/// Bundled landscapes: "easy", "collapse-demo", "deceptive-modes".
LandscapeConfig canned_landscape(const std::string& name);
bool is_canned_landscape(const std::string& name);

LandscapeConfig landscape_from_json_text(const std::string& text);
LandscapeConfig landscape_from_json(const std::string& path);

int hamming_distance(const Eigen::VectorXi& a, const Eigen::VectorXi& b);

/// Index of the mode whose ball contains the trajectory, or -1.
int match_mode(const Eigen::VectorXi& trajectory, const LandscapeConfig& land);

/// Unit-normalized one-hot position-action encoding of dimension
/// num_actions * num_steps; trajectories differing in h positions have
/// cosine distance h / num_steps.
Eigen::VectorXd trajectory_embedding(const Eigen::VectorXi& trajectory,
                                     const LandscapeConfig& land);

struct TrajectoryVerdict {
  bool correct = false;
  bool well_formed = true;  // the simulator never produces malformed output
};

/// Correct with the containing mode's success probability (seeded draw),
/// incorrect outside every ball.
TrajectoryVerdict trajectory_reward(const Eigen::VectorXi& trajectory,
                                    const LandscapeConfig& land, std::mt19937_64& rng);

inline constexpr double kEnumerationGuard = 1e6;

/// Exact accuracy-reward expectation: sum over all num_actions^num_steps
/// trajectories of probability times the containing mode's success_prob.
/// Guarded against state spaces above kEnumerationGuard.
double exact_expected_reward(const TabularPolicy& policy, const LandscapeConfig& land);

/// Zero logits plus init_bias on the first mode's prototype actions.
TabularPolicy initial_policy(const LandscapeConfig& land);

}  // namespace mupo::sim
