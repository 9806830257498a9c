#include "mupo/advantage.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mupo {

namespace {

// Normalizes values in place. Returns true when the std fell below the
// floor, in which case everything is zeroed instead.
bool normalize_scope(Eigen::Ref<Eigen::VectorXd> values, double std_floor, bool sample_std) {
  const Eigen::Index n = values.size();
  const double mean = values.mean();
  const double denom = sample_std ? static_cast<double>(n - 1) : static_cast<double>(n);
  const double var = (values.array() - mean).square().sum() / denom;
  const double std = std::sqrt(var);
  if (std < std_floor) {
    values.setZero();
    return true;
  }
  values = (values.array() - mean) / std;
  return false;
}

void check_surrogate_inputs(const SurrogateInputs& inputs) {
  const Eigen::Index n = inputs.ratios.size();
  if (n == 0) throw std::invalid_argument("surrogate: empty batch");
  if (inputs.advantages.per_rollout.size() != n || inputs.token_counts.size() != n) {
    throw std::invalid_argument("surrogate: ratios, advantages and token counts disagree in size");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inputs.ratios[i] > 0.0)) {
      throw std::invalid_argument("surrogate: ratios must be strictly positive");
    }
    if (inputs.token_counts[i] < 1) {
      throw std::invalid_argument("surrogate: token counts must be positive");
    }
  }
}

// Mean over a rollout's token positions of its broadcast surrogate term.
// The values are identical per token; the loop keeps the token dimension
// explicit.
double token_mean_term(double ratio, double advantage, double clip_eps, int token_count) {
  double acc = 0.0;
  for (int t = 0; t < token_count; ++t) {
    acc += clipped_surrogate(ratio, advantage, clip_eps);
  }
  return acc / static_cast<double>(token_count);
}

}  // namespace

AdvantageSet grpo_advantages(const Eigen::VectorXd& rewards, double std_floor, bool sample_std) {
  if (rewards.size() < 2) {
    throw std::invalid_argument("grpo_advantages: need at least two rewards");
  }
  AdvantageSet out;
  out.scope = AdvantageScope::kGlobal;
  out.per_rollout = rewards;
  if (normalize_scope(out.per_rollout, std_floor, sample_std)) out.std_floor_hits = 1;
  return out;
}

double load_balance_weight(int n, int k, int group_size, double beta) {
  if (group_size < 1) throw std::invalid_argument("load_balance_weight: group_size must be >= 1");
  return std::pow(static_cast<double>(n) / (static_cast<double>(k) * group_size), beta);
}

AdvantageSet mupo_advantages(const Eigen::VectorXd& rewards, const GroupPartition& partition,
                             AdvantageScope scope, double std_floor, bool sample_std) {
  if (rewards.size() != partition.n) {
    throw std::invalid_argument("mupo_advantages: rewards not aligned with the partition");
  }
  if (scope == AdvantageScope::kGlobal) {
    AdvantageSet out = grpo_advantages(rewards, std_floor, sample_std);
    out.scope = AdvantageScope::kGlobal;
    return out;
  }

  AdvantageSet out;
  out.scope = AdvantageScope::kGroupLocal;
  out.per_rollout.resize(rewards.size());
  for (int g = 0; g < partition.k; ++g) {
    std::vector<int> members;
    for (int i = 0; i < partition.n; ++i) {
      if (partition.assignments[static_cast<std::size_t>(i)] == g) members.push_back(i);
    }
    if (members.size() < 2) {
      throw std::invalid_argument("mupo_advantages: advantage undefined in singleton group");
    }
    Eigen::VectorXd local(static_cast<Eigen::Index>(members.size()));
    for (std::size_t m = 0; m < members.size(); ++m) local[static_cast<Eigen::Index>(m)] = rewards[members[m]];
    if (normalize_scope(local, std_floor, sample_std)) ++out.std_floor_hits;
    for (std::size_t m = 0; m < members.size(); ++m) {
      out.per_rollout[members[m]] = local[static_cast<Eigen::Index>(m)];
    }
  }
  return out;
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clamped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clamped * advantage);
}

double grpo_objective(const SurrogateInputs& inputs) {
  check_surrogate_inputs(inputs);
  const Eigen::Index n = inputs.ratios.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += token_mean_term(inputs.ratios[i], inputs.advantages.per_rollout[i], inputs.clip_eps,
                           inputs.token_counts[i]);
  }
  return acc / static_cast<double>(n);
}

double mupo_objective(const SurrogateInputs& inputs, const GroupPartition& partition,
                      double beta) {
  check_surrogate_inputs(inputs);
  if (inputs.ratios.size() != partition.n) {
    throw std::invalid_argument("mupo_objective: partition does not match the batch");
  }
  double total = 0.0;
  for (int g = 0; g < partition.k; ++g) {
    const int size = partition.group_sizes[static_cast<std::size_t>(g)];
    if (size < 1) throw std::invalid_argument("mupo_objective: empty group");
    double acc = 0.0;
    for (int i = 0; i < partition.n; ++i) {
      if (partition.assignments[static_cast<std::size_t>(i)] != g) continue;
      acc += token_mean_term(inputs.ratios[i], inputs.advantages.per_rollout[i], inputs.clip_eps,
                             inputs.token_counts[i]);
    }
    const double weight = load_balance_weight(partition.n, partition.k, size, beta);
    total += weight * (acc / static_cast<double>(size));
  }
  return total;
}

}  // namespace mupo
