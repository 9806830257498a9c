#pragma once

#include "mupo/embedding.hpp"

#include <string>
#include <vector>

namespace mupo {

/// Responses recorded for one evaluation example: correctness verdicts in
/// sampling order, plus optional embeddings (0x0 when absent).
struct ExampleSamples {
  std::string example_id;
  std::vector<bool> correct;
  EmbeddingMatrix embeddings;
};

using SampleSet = std::vector<ExampleSamples>;

/// Fraction of examples whose first k responses contain at least one correct
/// verdict. Every example must have at least k responses.
double acc_at_k(const SampleSet& samples, int k);

/// y0 = x0; yt = alpha * xt + (1 - alpha) * y(t-1). alpha in (0, 1].
std::vector<double> ema_smooth(const std::vector<double>& series, double alpha);

/// pairwise_diversity per step, in step order.
std::vector<double> diversity_curve(const std::vector<EmbeddingMatrix>& per_step_embeddings);

}  // namespace mupo
