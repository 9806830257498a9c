#include "mupo/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mupo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost completion of a partially fixed assignment, solved as a
// successive-shortest-path min-cost flow over one reusable buffer set.
// Nodes: source, one per free row, one per group, sink. Each group has a
// free arc of capacity g_min and an overflow arc priced at a bonus that
// dominates any achievable assignment-cost difference (arc costs live in
// [0, 2]), so every min-cost solution fills the demand arcs first; the
// overflow units then cost a constant offset that cancels when comparing
// assignments. All arc costs are non-negative, and the search is Dijkstra
// with potentials: every node settles at most once per augmentation, so
// parent pointers always form a tree even under heavy cost ties.
class AssignmentSolver {
 public:
  explicit AssignmentSolver(const Eigen::MatrixXd& cost)
      : cost_(cost),
        n_(static_cast<int>(cost.rows())),
        k_(static_cast<int>(cost.cols())) {
    const int max_nodes = n_ + k_ + 2;
    const int max_arcs = 2 * (n_ + n_ * k_ + 2 * k_);
    arc_to_.reserve(max_arcs);
    arc_cap_.reserve(max_arcs);
    arc_cost_.reserve(max_arcs);
    arc_next_.reserve(max_arcs);
    head_.assign(max_nodes, -1);
    dist_.assign(max_nodes, kInf);
    potential_.assign(max_nodes, 0.0);
    parent_.assign(max_nodes, -1);
    settled_.assign(max_nodes, 0);
  }

  // Fills `assignment` with fixed entries completed by min-cost choices for
  // the free rows (fixed[i] < 0). Returns false when the demands cannot be
  // met.
  bool solve(const std::vector<int>& fixed, const std::vector<int>& demands,
             std::vector<int>& assignment) {
    free_rows_.clear();
    for (int i = 0; i < n_; ++i) {
      if (fixed[static_cast<std::size_t>(i)] < 0) free_rows_.push_back(i);
    }
    int total_demand = 0;
    for (int d : demands) total_demand += d;
    const int m = static_cast<int>(free_rows_.size());
    if (total_demand > m) return false;

    assignment = fixed;
    if (m == 0) return true;

    const int source = 0;
    const int sink = 1 + m + k_;
    num_nodes_ = sink + 1;
    arc_to_.clear();
    arc_cap_.clear();
    arc_cost_.clear();
    arc_next_.clear();
    std::fill(head_.begin(), head_.begin() + num_nodes_, -1);
    std::fill(potential_.begin(), potential_.begin() + num_nodes_, 0.0);

    const double bonus = 2.0 * m + 5.0;
    for (int r = 0; r < m; ++r) add_arc(source, 1 + r, 1.0, 0.0);
    // Row->group arcs laid out contiguously: arc id of (r, g) is
    // row_arc_base_ + 2 * (r * k_ + g).
    row_arc_base_ = static_cast<int>(arc_to_.size());
    for (int r = 0; r < m; ++r) {
      for (int g = 0; g < k_; ++g) {
        add_arc(1 + r, 1 + m + g, 1.0, cost_(free_rows_[static_cast<std::size_t>(r)], g));
      }
    }
    for (int g = 0; g < k_; ++g) {
      if (demands[static_cast<std::size_t>(g)] > 0) {
        add_arc(1 + m + g, sink, static_cast<double>(demands[static_cast<std::size_t>(g)]), 0.0);
      }
      add_arc(1 + m + g, sink, static_cast<double>(m), bonus);
    }

    int sent = 0;
    while (sent < m) {
      if (!dijkstra(source, sink)) return false;
      double push = static_cast<double>(m - sent);
      for (int v = sink; v != source; v = arc_to_[static_cast<std::size_t>(parent_[v] ^ 1)]) {
        push = std::min(push, arc_cap_[static_cast<std::size_t>(parent_[v])]);
      }
      for (int v = sink; v != source; v = arc_to_[static_cast<std::size_t>(parent_[v] ^ 1)]) {
        arc_cap_[static_cast<std::size_t>(parent_[v])] -= push;
        arc_cap_[static_cast<std::size_t>(parent_[v] ^ 1)] += push;
      }
      sent += static_cast<int>(push + 0.5);
    }

    for (int r = 0; r < m; ++r) {
      for (int g = 0; g < k_; ++g) {
        const int arc = row_arc_base_ + 2 * (r * k_ + g);
        if (arc_cap_[static_cast<std::size_t>(arc)] < 0.5) {
          assignment[static_cast<std::size_t>(free_rows_[static_cast<std::size_t>(r)])] = g;
          break;
        }
      }
    }
    return true;
  }

 private:
  void add_arc(int from, int to, double cap, double cost) {
    arc_to_.push_back(to);
    arc_cap_.push_back(cap);
    arc_cost_.push_back(cost);
    arc_next_.push_back(head_[static_cast<std::size_t>(from)]);
    head_[static_cast<std::size_t>(from)] = static_cast<int>(arc_to_.size()) - 1;

    arc_to_.push_back(from);
    arc_cap_.push_back(0.0);
    arc_cost_.push_back(-cost);
    arc_next_.push_back(head_[static_cast<std::size_t>(to)]);
    head_[static_cast<std::size_t>(to)] = static_cast<int>(arc_to_.size()) - 1;
  }

  // O(V^2) Dijkstra on reduced costs. Reduced costs are non-negative up to
  // float dust, which gets clamped.
  bool dijkstra(int s, int t) {
    std::fill(dist_.begin(), dist_.begin() + num_nodes_, kInf);
    std::fill(parent_.begin(), parent_.begin() + num_nodes_, -1);
    std::fill(settled_.begin(), settled_.begin() + num_nodes_, 0);
    dist_[static_cast<std::size_t>(s)] = 0.0;
    for (int round = 0; round < num_nodes_; ++round) {
      int u = -1;
      double best = kInf;
      for (int v = 0; v < num_nodes_; ++v) {
        if (!settled_[static_cast<std::size_t>(v)] && dist_[static_cast<std::size_t>(v)] < best) {
          best = dist_[static_cast<std::size_t>(v)];
          u = v;
        }
      }
      if (u < 0) break;
      settled_[static_cast<std::size_t>(u)] = 1;
      for (int arc = head_[static_cast<std::size_t>(u)]; arc >= 0;
           arc = arc_next_[static_cast<std::size_t>(arc)]) {
        if (arc_cap_[static_cast<std::size_t>(arc)] <= 0.0) continue;
        const int v = arc_to_[static_cast<std::size_t>(arc)];
        if (settled_[static_cast<std::size_t>(v)]) continue;
        const double reduced =
            std::max(0.0, arc_cost_[static_cast<std::size_t>(arc)] +
                              potential_[static_cast<std::size_t>(u)] -
                              potential_[static_cast<std::size_t>(v)]);
        const double cand = dist_[static_cast<std::size_t>(u)] + reduced;
        if (cand < dist_[static_cast<std::size_t>(v)]) {
          dist_[static_cast<std::size_t>(v)] = cand;
          parent_[v] = arc;
        }
      }
    }
    if (parent_[t] < 0) return false;
    for (int v = 0; v < num_nodes_; ++v) {
      if (dist_[static_cast<std::size_t>(v)] < kInf) {
        potential_[static_cast<std::size_t>(v)] += dist_[static_cast<std::size_t>(v)];
      }
    }
    return true;
  }

  const Eigen::MatrixXd& cost_;
  int n_;
  int k_;
  int num_nodes_ = 0;
  int row_arc_base_ = 0;
  std::vector<int> free_rows_;
  std::vector<int> arc_to_;
  std::vector<double> arc_cap_;
  std::vector<double> arc_cost_;
  std::vector<int> arc_next_;
  std::vector<int> head_;
  std::vector<double> dist_;
  std::vector<double> potential_;
  std::vector<int> parent_;
  std::vector<char> settled_;
};

Eigen::MatrixXd distance_matrix(const EmbeddingMatrix& embeddings,
                                const Eigen::MatrixXd& centroids) {
  const Eigen::Index n = embeddings.rows();
  const Eigen::Index k = centroids.rows();
  Eigen::MatrixXd cost(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index g = 0; g < k; ++g) {
      cost(i, g) = cosine_distance(embeddings.row(i), centroids.row(g));
    }
  }
  return cost;
}

double cost_of(const Eigen::MatrixXd& cost, const std::vector<int>& assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    total += cost(static_cast<Eigen::Index>(i), assignment[i]);
  }
  return total;
}

GroupPartition make_partition(const std::vector<int>& assignment, int k) {
  GroupPartition p;
  p.assignments = assignment;
  p.k = k;
  p.n = static_cast<int>(assignment.size());
  p.group_sizes.assign(static_cast<std::size_t>(k), 0);
  for (int g : assignment) ++p.group_sizes[static_cast<std::size_t>(g)];
  return p;
}

void check_assignment_inputs(const EmbeddingMatrix& embeddings, const Eigen::MatrixXd& centroids,
                             int g_min) {
  const int n = static_cast<int>(embeddings.rows());
  const int k = static_cast<int>(centroids.rows());
  if (n < 1) throw std::invalid_argument("assignment: no embeddings");
  if (k < 1) throw std::invalid_argument("assignment: no centroids");
  if (embeddings.cols() != centroids.cols()) {
    throw std::invalid_argument("assignment: embedding and centroid dimensions differ");
  }
  if (g_min < 0) throw std::invalid_argument("assignment: g_min must be >= 0");
  if (static_cast<long long>(k) * g_min > n) {
    throw std::invalid_argument("assignment: k * g_min exceeds the number of rollouts");
  }
}

}  // namespace

ClusterState init_centroids(const EmbeddingMatrix& embeddings, int k, std::uint64_t seed) {
  (void)seed;
  const int n = static_cast<int>(embeddings.rows());
  if (k < 1) throw std::invalid_argument("init_centroids: k must be >= 1");
  if (k > n) throw std::invalid_argument("init_centroids: k exceeds the number of rows");

  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  int first = 0;
  double best_norm = embeddings.row(0).norm();
  for (int i = 1; i < n; ++i) {
    const double norm = embeddings.row(i).norm();
    if (norm > best_norm) {
      best_norm = norm;
      first = i;
    }
  }
  chosen.push_back(first);

  Eigen::VectorXd min_dist(n);
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  taken[static_cast<std::size_t>(first)] = 1;
  for (int i = 0; i < n; ++i) {
    min_dist[i] = cosine_distance(embeddings.row(i), embeddings.row(first));
  }
  while (static_cast<int>(chosen.size()) < k) {
    int next = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (min_dist[i] > best) {
        best = min_dist[i];
        next = i;
      }
    }
    chosen.push_back(next);
    taken[static_cast<std::size_t>(next)] = 1;
    for (int i = 0; i < n; ++i) {
      min_dist[i] = std::min(min_dist[i], cosine_distance(embeddings.row(i), embeddings.row(next)));
    }
  }

  ClusterState state;
  state.centroids.resize(k, embeddings.cols());
  for (int g = 0; g < k; ++g) state.centroids.row(g) = embeddings.row(chosen[static_cast<std::size_t>(g)]);
  return state;
}

GroupPartition assign_min_size(const EmbeddingMatrix& embeddings,
                               const Eigen::MatrixXd& centroids, int g_min) {
  check_assignment_inputs(embeddings, centroids, g_min);
  const int n = static_cast<int>(embeddings.rows());
  const int k = static_cast<int>(centroids.rows());
  const Eigen::MatrixXd cost = distance_matrix(embeddings, centroids);
  AssignmentSolver solver(cost);

  std::vector<int> known(static_cast<std::size_t>(n), -1);
  std::vector<int> all_free(static_cast<std::size_t>(n), -1);
  std::vector<int> demands(static_cast<std::size_t>(k), g_min);
  if (!solver.solve(all_free, demands, known)) {
    throw std::invalid_argument("assign_min_size: infeasible size constraint");
  }
  const double optimum = cost_of(cost, known);

  // Row-suffix sums of per-row minima, a demand-free lower bound on any
  // completion cost; used to prune tie probes.
  std::vector<double> suffix_min(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    suffix_min[static_cast<std::size_t>(i)] =
        suffix_min[static_cast<std::size_t>(i) + 1] + cost.row(i).minCoeff();
  }

  // Lexicographic refinement: fix rollouts in index order to the smallest
  // group that still admits a completion within the cost-tie tolerance of
  // the optimum. `known` always holds one optimal completion of the fixed
  // prefix, so its own group needs no probe.
  std::vector<int> fixed(static_cast<std::size_t>(n), -1);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  std::vector<int> candidate;
  double prefix_cost = 0.0;
  for (int i = 0; i < n; ++i) {
    int placed = -1;
    for (int g = 0; g < k && placed < 0; ++g) {
      if (g == known[static_cast<std::size_t>(i)]) {
        placed = g;
        break;
      }
      // Feasibility of the remaining demands.
      int deficit = 0;
      for (int j = 0; j < k; ++j) {
        const int have = counts[static_cast<std::size_t>(j)] + (j == g ? 1 : 0);
        deficit += std::max(0, g_min - have);
      }
      if (deficit > n - i - 1) continue;
      if (prefix_cost + cost(i, g) + suffix_min[static_cast<std::size_t>(i) + 1] >
          optimum + kCostTieTol) {
        continue;
      }
      fixed[static_cast<std::size_t>(i)] = g;
      std::vector<int> remaining(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        const int have = counts[static_cast<std::size_t>(j)] + (j == g ? 1 : 0);
        remaining[static_cast<std::size_t>(j)] = std::max(0, g_min - have);
      }
      if (solver.solve(fixed, remaining, candidate) &&
          cost_of(cost, candidate) <= optimum + kCostTieTol) {
        placed = g;
        known = candidate;
      } else {
        fixed[static_cast<std::size_t>(i)] = -1;
      }
    }
    if (placed < 0) throw std::logic_error("assign_min_size: refinement lost feasibility");
    fixed[static_cast<std::size_t>(i)] = placed;
    ++counts[static_cast<std::size_t>(placed)];
    prefix_cost += cost(i, placed);
  }
  return make_partition(fixed, k);
}

GroupPartition brute_force_assignment(const EmbeddingMatrix& embeddings,
                                      const Eigen::MatrixXd& centroids, int g_min) {
  check_assignment_inputs(embeddings, centroids, g_min);
  const int n = static_cast<int>(embeddings.rows());
  const int k = static_cast<int>(centroids.rows());

  double space = 1.0;
  for (int i = 0; i < n; ++i) {
    space *= static_cast<double>(k);
    if (space > 1e6) {
      throw std::invalid_argument("brute_force_assignment: instance too large (k^n > 1e6)");
    }
  }

  const Eigen::MatrixXd cost = distance_matrix(embeddings, centroids);
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  std::vector<int> best;
  double best_cost = kInf;
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);

  // Odometer with the last index fastest enumerates assignments in
  // lexicographic order, so keeping the first strict improvement realizes
  // the shared tie-break.
  while (true) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int g : current) ++sizes[static_cast<std::size_t>(g)];
    bool feasible = true;
    for (int g = 0; g < k; ++g) {
      if (sizes[static_cast<std::size_t>(g)] < g_min) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      const double c = cost_of(cost, current);
      if (c < best_cost - kCostTieTol) {
        best_cost = c;
        best = current;
      }
    }
    int pos = n - 1;
    while (pos >= 0 && current[static_cast<std::size_t>(pos)] == k - 1) {
      current[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
  }

  if (best.empty()) {
    throw std::invalid_argument("brute_force_assignment: infeasible size constraint");
  }
  return make_partition(best, k);
}

double assignment_cost(const EmbeddingMatrix& embeddings, const Eigen::MatrixXd& centroids,
                       const std::vector<int>& assignments) {
  const Eigen::MatrixXd cost = distance_matrix(embeddings, centroids);
  return cost_of(cost, assignments);
}

GroupPartition constrained_kmeans(const EmbeddingMatrix& embeddings, const MupoConfig& cfg) {
  ClusterState state;
  return constrained_kmeans(embeddings, cfg, state, nullptr);
}

GroupPartition constrained_kmeans(const EmbeddingMatrix& embeddings, const MupoConfig& cfg,
                                  ClusterState& final_state,
                                  std::vector<double>* iteration_costs) {
  constexpr int kMaxIterations = 50;
  ClusterState state = init_centroids(embeddings, cfg.k, cfg.seed);
  GroupPartition partition;
  std::vector<int> previous;

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    partition = assign_min_size(embeddings, state.centroids, cfg.g_min);
    state.iteration = iter + 1;
    if (iteration_costs != nullptr) {
      iteration_costs->push_back(assignment_cost(embeddings, state.centroids, partition.assignments));
    }
    if (cfg.k == 1 || partition.assignments == previous) {
      state.converged = true;  // k == 1 leaves no choice; otherwise a fixed point
      break;
    }
    previous = partition.assignments;

    for (int g = 0; g < cfg.k; ++g) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(embeddings.cols());
      int lowest_member = -1;
      for (int i = 0; i < partition.n; ++i) {
        if (partition.assignments[static_cast<std::size_t>(i)] != g) continue;
        mean += embeddings.row(i).transpose();
        if (lowest_member < 0) lowest_member = i;
      }
      mean /= static_cast<double>(partition.group_sizes[static_cast<std::size_t>(g)]);
      const double norm = mean.norm();
      if (norm == 0.0) {
        state.centroids.row(g) = embeddings.row(lowest_member);
      } else {
        state.centroids.row(g) = mean.transpose() / norm;
      }
    }
  }

  final_state = state;
  return partition;
}

}  // namespace mupo
