#pragma once

#include "mupo/embedding.hpp"
#include "mupo/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mupo {

/// Cosine-annealed diversity weight: lambda_max at step 0 decaying smoothly
/// to lambda_min at t_max. Monotonically non-increasing in t_cur.
inline double lambda_schedule(int t_cur, int t_max, double lambda_max, double lambda_min) {
  if (t_max < 1) throw std::invalid_argument("lambda_schedule: t_max must be >= 1");
  if (t_cur < 0 || t_cur > t_max) {
    throw std::invalid_argument("lambda_schedule: t_cur outside [0, t_max]");
  }
  const double phase = std::numbers::pi * static_cast<double>(t_cur) / static_cast<double>(t_max);
  return lambda_min + 0.5 * (lambda_max - lambda_min) * (1.0 + std::cos(phase));
}

/// Diversity reward of one rollout: the average cosine distance from its
/// embedding to every rollout outside its group. Defined as 0 when there is
/// nothing outside (single group).
double diversity_reward(int rollout, const GroupPartition& partition,
                        const EmbeddingMatrix& embeddings);

/// Combines accuracy, format and the gated diversity term into the final
/// scalar. An incorrect rollout contributes no diversity reward regardless
/// of r_div or lambda.
inline RewardBreakdown total_reward(bool correct, bool well_formed, double r_div,
                                    double lambda) {
  RewardBreakdown rb;
  rb.r_acc = correct ? 1.0 : 0.0;
  rb.r_fmt = well_formed ? 1.0 : 0.0;
  rb.r_div = r_div;
  rb.lambda = lambda;
  rb.total = rb.r_acc + rb.r_fmt + lambda * (correct ? 1.0 : 0.0) * r_div;
  return rb;
}

/// True iff text contains exactly one open_tag and exactly one close_tag,
/// with the open tag appearing first.
bool verify_format(const std::string& text, const std::string& open_tag = "<think>",
                   const std::string& close_tag = "</think>");

}  // namespace mupo
