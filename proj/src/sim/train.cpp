#include "mupo/sim/train.hpp"

#include "mupo/grouping.hpp"
#include "mupo/reward.hpp"
#include "mupo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mupo::sim {

namespace {

// Independent deterministic rng streams per (seed, step); the reward stream
// is additionally keyed by rollout so accuracy draws are reproducible
// record by record.
enum Stream : std::uint64_t { kStreamBatch = 1, kStreamReward = 2, kStreamValidation = 3 };

constexpr double kLogitBound = 1e6;

Eigen::VectorXd ratios_against(const TabularPolicy& policy, const StepState& state) {
  const int n = static_cast<int>(state.trajectories.rows());
  Eigen::VectorXd ratios(n);
  for (int i = 0; i < n; ++i) {
    ratios[i] = std::exp(policy.log_prob(state.trajectories.row(i).transpose()) -
                         state.old_log_probs[i]);
  }
  return ratios;
}

SurrogateInputs make_inputs(const Eigen::VectorXd& ratios, const StepState& state) {
  SurrogateInputs inputs;
  inputs.ratios = ratios;
  inputs.advantages = state.advantages;
  inputs.clip_eps = state.clip_eps;
  inputs.token_counts =
      Eigen::VectorXi::Constant(ratios.size(), static_cast<int>(state.trajectories.cols()));
  return inputs;
}

}  // namespace

std::string to_string(Algo algo) { return algo == Algo::kGrpo ? "grpo" : "mupo"; }

Algo algo_from_string(const std::string& s) {
  if (s == "grpo") return Algo::kGrpo;
  if (s == "mupo") return Algo::kMupo;
  throw std::invalid_argument("algo: expected 'grpo' or 'mupo', got '" + s + "'");
}

double surrogate_objective(const TabularPolicy& policy, const StepState& state) {
  return mupo_objective(make_inputs(ratios_against(policy, state), state), state.partition,
                        state.beta);
}

Eigen::MatrixXd surrogate_gradient(const TabularPolicy& policy, const StepState& state) {
  const int n = static_cast<int>(state.trajectories.rows());
  const int steps = policy.num_steps();
  const Eigen::MatrixXd probs = policy.step_prob_matrix();
  const Eigen::VectorXd ratios = ratios_against(policy, state);

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(steps, policy.num_actions());
  for (int i = 0; i < n; ++i) {
    const int group = state.partition.assignments[static_cast<std::size_t>(i)];
    const int size = state.partition.group_sizes[static_cast<std::size_t>(group)];
    const double scale =
        load_balance_weight(state.partition.n, state.partition.k, size, state.beta) /
        static_cast<double>(size);

    const double ratio = ratios[i];
    const double adv = state.advantages.per_rollout[i];
    const double clamped = std::clamp(ratio, 1.0 - state.clip_eps, 1.0 + state.clip_eps);
    // min(r*A, clamp(r)*A): when the unclipped branch is active its slope in
    // r is A; otherwise the clamp is binding and the slope is 0.
    const double dmin_dr = (ratio * adv <= clamped * adv) ? adv : 0.0;
    if (dmin_dr == 0.0) continue;

    const double coef = scale * dmin_dr * ratio / policy.temperature;
    for (int t = 0; t < steps; ++t) {
      grad.row(t) -= coef * probs.row(t);
      grad(t, state.trajectories(i, t)) += coef;
    }
  }
  return grad;
}

TrainLog train(Algo algo, const MupoConfig& cfg_in, const LandscapeConfig& land,
               const TrainOptions& opts) {
  const MupoConfig cfg = validate_config(cfg_in);
  validate_landscape(land);
  if (opts.steps < 1) throw std::invalid_argument("train: steps must be >= 1");
  if (cfg.t_max < opts.steps) {
    throw std::invalid_argument("train: t_max is shorter than the requested run");
  }
  const bool exact_feasible =
      std::pow(static_cast<double>(land.num_actions), land.num_steps) <= kEnumerationGuard;

  TabularPolicy policy = initial_policy(land);
  TrainLog log;
  log.records.reserve(static_cast<std::size_t>(opts.steps) + 1);

  for (int step = 0; step <= opts.steps; ++step) {
    std::mt19937_64 batch_rng = make_rng(opts.seed, kStreamBatch, static_cast<std::uint64_t>(step));
    const SampleBatch batch = sample_batch(policy, cfg.n, batch_rng);

    std::vector<RewardBreakdown> breakdowns(static_cast<std::size_t>(cfg.n));
    StepState state;
    state.trajectories = batch.trajectories;
    state.old_log_probs = batch.log_probs;
    state.beta = cfg.beta;
    state.clip_eps = cfg.clip_eps;

    std::vector<bool> correct(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
      std::mt19937_64 reward_rng = make_rng(opts.seed, kStreamReward,
                                            static_cast<std::uint64_t>(step),
                                            static_cast<std::uint64_t>(i));
      const TrajectoryVerdict verdict =
          trajectory_reward(batch.trajectories.row(i).transpose(), land, reward_rng);
      correct[static_cast<std::size_t>(i)] = verdict.correct;
    }

    double lambda = 0.0;
    if (algo == Algo::kMupo) {
      EmbeddingMatrix embeddings(cfg.n, land.embedding_dim());
      for (int i = 0; i < cfg.n; ++i) {
        embeddings.row(i) =
            trajectory_embedding(batch.trajectories.row(i).transpose(), land).transpose();
      }
      state.partition = constrained_kmeans(embeddings, cfg);
      lambda = lambda_schedule(step, cfg.t_max, cfg.lambda_max, cfg.lambda_min);
      for (int i = 0; i < cfg.n; ++i) {
        const double r_div = diversity_reward(i, state.partition, embeddings);
        breakdowns[static_cast<std::size_t>(i)] =
            total_reward(correct[static_cast<std::size_t>(i)], true, r_div, lambda);
      }
    } else {
      state.partition = single_group_partition(cfg.n);
      for (int i = 0; i < cfg.n; ++i) {
        breakdowns[static_cast<std::size_t>(i)] =
            total_reward(correct[static_cast<std::size_t>(i)], true, 0.0, 0.0);
      }
    }

    Eigen::VectorXd totals(cfg.n);
    double mean_acc = 0.0;
    double mean_div_term = 0.0;
    for (int i = 0; i < cfg.n; ++i) {
      const RewardBreakdown& rb = breakdowns[static_cast<std::size_t>(i)];
      totals[i] = rb.total;
      mean_acc += rb.r_acc;
      mean_div_term += rb.lambda * (rb.r_acc == 1.0 ? 1.0 : 0.0) * rb.r_div;
    }
    mean_acc /= static_cast<double>(cfg.n);
    mean_div_term /= static_cast<double>(cfg.n);

    state.advantages =
        algo == Algo::kMupo
            ? mupo_advantages(totals, state.partition, cfg.advantage_scope, cfg.std_floor,
                              cfg.sample_std)
            : grpo_advantages(totals, cfg.std_floor, cfg.sample_std);

    std::mt19937_64 val_rng =
        make_rng(opts.seed, kStreamValidation, static_cast<std::uint64_t>(step));
    const SampleBatch val_batch = sample_batch(policy, opts.validation_samples, val_rng);
    EmbeddingMatrix val_embeddings(opts.validation_samples, land.embedding_dim());
    for (int i = 0; i < opts.validation_samples; ++i) {
      val_embeddings.row(i) =
          trajectory_embedding(val_batch.trajectories.row(i).transpose(), land).transpose();
    }

    TrainRecord record;
    record.step = step;
    record.mean_r_acc = mean_acc;
    record.mean_r_div = mean_div_term;
    record.lambda = lambda;
    record.validation_diversity = pairwise_diversity(val_embeddings);
    if (opts.log_exact_reward && exact_feasible) {
      record.expected_reward_exact = exact_expected_reward(policy, land);
    }

    if (step < opts.steps) {
      const Eigen::MatrixXd grad = surrogate_gradient(policy, state);
      policy.logits += opts.learning_rate * grad;
      if (!policy.logits.allFinite() || policy.logits.cwiseAbs().maxCoeff() > kLogitBound) {
        throw std::runtime_error("train: policy logits diverged");
      }
      const Eigen::VectorXd new_ratios = ratios_against(policy, state);
      const SurrogateInputs inputs = make_inputs(new_ratios, state);
      record.objective = algo == Algo::kMupo
                             ? mupo_objective(inputs, state.partition, cfg.beta)
                             : grpo_objective(inputs);
    }

    log.records.push_back(record);
    if (step == opts.steps) log.final_validation_embeddings = val_embeddings;
  }

  log.final_policy = policy;
  return log;
}

}  // namespace mupo::sim
