#include "mupo/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace mupo {

double acc_at_k(const SampleSet& samples, int k) {
  if (k < 1) throw std::invalid_argument("acc_at_k: k must be >= 1");
  if (samples.empty()) throw std::invalid_argument("acc_at_k: empty sample set");
  int solved = 0;
  for (const ExampleSamples& example : samples) {
    if (static_cast<int>(example.correct.size()) < k) {
      throw std::invalid_argument("acc_at_k: example '" + example.example_id + "' has only " +
                                  std::to_string(example.correct.size()) + " responses, need " +
                                  std::to_string(k));
    }
    for (int i = 0; i < k; ++i) {
      if (example.correct[static_cast<std::size_t>(i)]) {
        ++solved;
        break;
      }
    }
  }
  return static_cast<double>(solved) / static_cast<double>(samples.size());
}

std::vector<double> ema_smooth(const std::vector<double>& series, double alpha) {
  if (series.empty()) throw std::invalid_argument("ema_smooth: empty series");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("ema_smooth: alpha must be in (0, 1]");
  }
  std::vector<double> out(series.size());
  out[0] = series[0];
  for (std::size_t t = 1; t < series.size(); ++t) {
    // incremental form of alpha*x + (1-alpha)*y: constant series stay
    // bit-exactly constant
    out[t] = out[t - 1] + alpha * (series[t] - out[t - 1]);
  }
  return out;
}

std::vector<double> diversity_curve(const std::vector<EmbeddingMatrix>& per_step_embeddings) {
  std::vector<double> curve;
  curve.reserve(per_step_embeddings.size());
  for (const EmbeddingMatrix& step : per_step_embeddings) {
    curve.push_back(pairwise_diversity(step));
  }
  return curve;
}

}  // namespace mupo
