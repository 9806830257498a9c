#include "mupo/reward.hpp"

#include <cstddef>
#include <stdexcept>

namespace mupo {

double diversity_reward(int rollout, const GroupPartition& partition,
                        const EmbeddingMatrix& embeddings) {
  const int n = partition.n;
  if (static_cast<int>(embeddings.rows()) != n) {
    throw std::invalid_argument("diversity_reward: partition does not cover the embedding rows");
  }
  if (rollout < 0 || rollout >= n) {
    throw std::invalid_argument("diversity_reward: rollout index out of range");
  }
  const int own_group = partition.assignments[static_cast<std::size_t>(rollout)];
  const int outside = n - partition.group_sizes[static_cast<std::size_t>(own_group)];
  if (outside == 0) return 0.0;  // single group: nothing to be distant from

  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (partition.assignments[static_cast<std::size_t>(j)] == own_group) continue;
    sum += cosine_distance(embeddings.row(rollout), embeddings.row(j));
  }
  return sum / static_cast<double>(outside);
}

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += 1;
    if (count > 2) break;  // more than enough to reject
  }
  return count;
}

}  // namespace

bool verify_format(const std::string& text, const std::string& open_tag,
                   const std::string& close_tag) {
  if (open_tag.empty() || close_tag.empty()) {
    throw std::invalid_argument("verify_format: tags must be non-empty");
  }
  if (open_tag == close_tag) {
    return count_occurrences(text, open_tag) == 2;
  }
  if (count_occurrences(text, open_tag) != 1) return false;
  if (count_occurrences(text, close_tag) != 1) return false;
  return text.find(open_tag) < text.find(close_tag);
}

}  // namespace mupo
