#include "mupo/types.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace mupo {

GroupPartition single_group_partition(int n) {
  GroupPartition p;
  p.assignments.assign(static_cast<std::size_t>(n), 0);
  p.group_sizes = {n};
  p.k = 1;
  p.n = n;
  return p;
}

void validate_partition(const GroupPartition& p, int g_min) {
  if (p.k < 1) throw std::invalid_argument("partition: k must be >= 1");
  if (p.n < 1) throw std::invalid_argument("partition: n must be >= 1");
  if (static_cast<int>(p.assignments.size()) != p.n) {
    throw std::invalid_argument("partition: assignment count differs from n");
  }
  if (static_cast<int>(p.group_sizes.size()) != p.k) {
    throw std::invalid_argument("partition: group_sizes count differs from k");
  }

  std::vector<int> counted(static_cast<std::size_t>(p.k), 0);
  for (int i = 0; i < p.n; ++i) {
    const int g = p.assignments[static_cast<std::size_t>(i)];
    if (g < 0 || g >= p.k) {
      throw std::invalid_argument("partition: rollout " + std::to_string(i) +
                                  " assigned to out-of-range group " + std::to_string(g));
    }
    ++counted[static_cast<std::size_t>(g)];
  }
  for (int g = 0; g < p.k; ++g) {
    const int size = p.group_sizes[static_cast<std::size_t>(g)];
    if (size != counted[static_cast<std::size_t>(g)]) {
      throw std::invalid_argument("partition: stored size of group " + std::to_string(g) +
                                  " does not match its members");
    }
    if (size == 0) throw std::invalid_argument("partition: group " + std::to_string(g) + " is empty");
    if (size < g_min) {
      throw std::invalid_argument("partition: group " + std::to_string(g) + " has " +
                                  std::to_string(size) + " members, below the minimum " +
                                  std::to_string(g_min));
    }
  }
  const int total = std::accumulate(p.group_sizes.begin(), p.group_sizes.end(), 0);
  if (total != p.n) throw std::invalid_argument("partition: group sizes do not sum to n");
}

}  // namespace mupo
