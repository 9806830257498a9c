#pragma once

#include "mupo/config.hpp"
#include "mupo/embedding.hpp"
#include "mupo/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace mupo {

/// Centroid set produced by initialization / refined by constrained_kmeans.
struct ClusterState {
  Eigen::MatrixXd centroids;  // one centroid per row
  int iteration = 0;
  bool converged = false;
};

/// Cost ties below this are broken lexicographically in rollout-index order.
/// Exact ties from duplicated rows land within a few ulps of each other;
/// genuinely distinct assignment costs on real data sit far above this.
inline constexpr double kCostTieTol = 1e-9;

/// Deterministic farthest-point initialization: the first centroid is the
/// row of maximal norm (lowest index on ties; rows are unit norm, so row 0),
/// each next centroid the row maximizing the minimum cosine distance to the
/// chosen set, ties again to the lowest index. The seed is reserved for
/// stochastic variants and unused here.
ClusterState init_centroids(const EmbeddingMatrix& embeddings, int k, std::uint64_t seed = 0);

/// Minimum total cosine distance assignment of rows to centroids subject to
/// every group receiving at least g_min rows, solved as a min-cost flow
/// (rows are unit-supply sources; each group has a demand-g_min arc and an
/// overflow arc). Among cost-equal optima returns the assignment that is
/// lexicographically smallest in rollout-index order.
GroupPartition assign_min_size(const EmbeddingMatrix& embeddings,
                               const Eigen::MatrixXd& centroids, int g_min);

/// Exhaustive oracle: enumerates every size-feasible assignment (guarded to
/// k^n <= 1e6) and returns the minimum-cost one under the same lexicographic
/// tie-break as assign_min_size.
GroupPartition brute_force_assignment(const EmbeddingMatrix& embeddings,
                                      const Eigen::MatrixXd& centroids, int g_min);

/// Total cost of an assignment, summed in rollout-index order.
double assignment_cost(const EmbeddingMatrix& embeddings, const Eigen::MatrixXd& centroids,
                       const std::vector<int>& assignments);

/// Alternates assign_min_size with centroid recomputation (renormalized mean
/// of member rows; a zero mean resets the centroid to the member row of
/// lowest index) until the assignment stops changing or 50 iterations
/// elapse. Deterministic; the assignment cost never increases across
/// iterations.
GroupPartition constrained_kmeans(const EmbeddingMatrix& embeddings, const MupoConfig& cfg);
GroupPartition constrained_kmeans(const EmbeddingMatrix& embeddings, const MupoConfig& cfg,
                                  ClusterState& final_state,
                                  std::vector<double>* iteration_costs);

}  // namespace mupo
