#pragma once

#include "mupo/advantage.hpp"
#include "mupo/config.hpp"
#include "mupo/embedding.hpp"
#include "mupo/sim/landscape.hpp"
#include "mupo/sim/policy.hpp"
#include "mupo/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mupo::sim {

enum class Algo { kGrpo, kMupo };

std::string to_string(Algo algo);
Algo algo_from_string(const std::string& s);

struct TrainOptions {
  int steps = 200;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  int validation_samples = 10;
  bool log_exact_reward = true;  // skipped when the state space exceeds the guard
};

struct TrainRecord {
  int step = 0;
  double mean_r_acc = 0.0;
  double mean_r_div = 0.0;  // realized diversity term, lambda * gate * r_div averaged
  double lambda = 0.0;
  double objective = 0.0;  // surrogate re-evaluated after the step's update; 0 on the final row
  double validation_diversity = 0.0;
  std::optional<double> expected_reward_exact;
};

struct TrainLog {
  std::vector<TrainRecord> records;  // steps + 1 rows, steps 0..steps
  TabularPolicy final_policy;
  EmbeddingMatrix final_validation_embeddings;
};

/// Frozen state of one optimization step: the sampled batch, its advantages
/// and grouping, and the clip width. The surrogate below is a function of a
/// candidate policy against this frozen state.
struct StepState {
  Eigen::MatrixXi trajectories;
  Eigen::VectorXd old_log_probs;
  AdvantageSet advantages;
  GroupPartition partition;
  double beta = 1.0;
  double clip_eps = 0.2;
};

/// Clipped surrogate of the candidate policy against the frozen step state
/// (ratios = exp(log_prob(policy) - old_log_probs)).
double surrogate_objective(const TabularPolicy& policy, const StepState& state);

/// Analytic gradient of surrogate_objective with respect to the candidate
/// policy's logits.
Eigen::MatrixXd surrogate_gradient(const TabularPolicy& policy, const StepState& state);

/// Runs the full loop: sample n trajectories per step, score them, (mupo)
/// embed + cluster + diversity-shape the rewards, normalize advantages,
/// ascend the analytic surrogate gradient, and record per-step metrics plus
/// a 10-sample validation diversity probe. Emits steps + 1 records; the
/// record at step s reflects the batch sampled at s and the update applied
/// at s (the final record performs no update).
TrainLog train(Algo algo, const MupoConfig& cfg, const LandscapeConfig& land,
               const TrainOptions& opts);

}  // namespace mupo::sim
