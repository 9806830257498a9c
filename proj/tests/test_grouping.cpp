#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mupo/grouping.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <random>

using mupo::assign_min_size;
using mupo::assignment_cost;
using mupo::brute_force_assignment;
using mupo::ClusterState;
using mupo::constrained_kmeans;
using mupo::GroupPartition;
using mupo::init_centroids;
using mupo::MupoConfig;
using mupo::validate_partition;

namespace {

Eigen::MatrixXd basis_rows(std::initializer_list<int> axes, int dim) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(axes.size()), dim);
  rows.setZero();
  Eigen::Index r = 0;
  for (int axis : axes) rows(r++, axis) = 1.0;
  return rows;
}

struct RandomInstance {
  Eigen::MatrixXd rows;
  Eigen::MatrixXd centroids;
  int g_min;
};

RandomInstance random_instance(std::mt19937_64& gen, int max_n, int max_k) {
  const int k = testutil::uniform_int(gen, 1, max_k);
  const int g_min = testutil::uniform_int(gen, 1, 2);
  const int n = testutil::uniform_int(gen, std::max(2, k * g_min), max_n);
  const int dim = testutil::uniform_int(gen, 2, 4);

  RandomInstance inst;
  inst.g_min = g_min;
  inst.rows.resize(n, dim);
  for (int i = 0; i < n; ++i) {
    if (i > 0 && testutil::uniform01(gen) < 0.35) {
      inst.rows.row(i) = inst.rows.row(testutil::uniform_int(gen, 0, i - 1));  // force ties
    } else {
      inst.rows.row(i) = testutil::random_unit_vector(dim, gen).transpose();
    }
  }
  inst.centroids.resize(k, dim);
  for (int g = 0; g < k; ++g) {
    if (testutil::uniform01(gen) < 0.5) {
      inst.centroids.row(g) = inst.rows.row(testutil::uniform_int(gen, 0, n - 1));
    } else {
      inst.centroids.row(g) = testutil::random_unit_vector(dim, gen).transpose();
    }
  }
  return inst;
}

}  // namespace

TEST_CASE("farthest-point initialization") {
  const Eigen::MatrixXd rows = basis_rows({0, 0, 1}, 2);

  SUBCASE("k=1 picks row 0") {
    const ClusterState state = init_centroids(rows, 1);
    CHECK(state.centroids.rows() == 1);
    CHECK(state.centroids.row(0) == rows.row(0));
  }
  SUBCASE("duplicate rows: the distinct row is chosen second") {
    const ClusterState state = init_centroids(rows, 2);
    CHECK(state.centroids.row(0) == rows.row(0));
    CHECK(state.centroids.row(1) == rows.row(2));
  }
  SUBCASE("k=n on equidistant rows keeps index order") {
    const Eigen::MatrixXd ortho = basis_rows({0, 1, 2}, 3);
    const ClusterState state = init_centroids(ortho, 3);
    for (int g = 0; g < 3; ++g) CHECK(state.centroids.row(g) == ortho.row(g));
  }
  SUBCASE("k=n exhausts every row") {
    std::mt19937_64 gen(3);
    Eigen::MatrixXd random_rows(5, 3);
    for (int i = 0; i < 5; ++i) {
      random_rows.row(i) = testutil::random_unit_vector(3, gen).transpose();
    }
    const ClusterState state = init_centroids(random_rows, 5);
    for (int i = 0; i < 5; ++i) {
      bool found = false;
      for (int g = 0; g < 5; ++g) {
        if (state.centroids.row(g) == random_rows.row(i)) found = true;
      }
      CHECK(found);
    }
  }
  SUBCASE("k above n is rejected") {
    CHECK_THROWS_AS(init_centroids(rows, 4), std::invalid_argument);
  }
}

TEST_CASE("min-size assignment on separable data") {
  const Eigen::MatrixXd rows = basis_rows({0, 0, 1, 1}, 2);
  const Eigen::MatrixXd centroids = basis_rows({0, 1}, 2);
  const GroupPartition p = assign_min_size(rows, centroids, 1);
  CHECK(p.assignments == std::vector<int>{0, 0, 1, 1});
  CHECK(p.group_sizes == std::vector<int>{2, 2});
  validate_partition(p, 1);
}

TEST_CASE("forced move takes the lexicographically largest-index row") {
  // three identical rows, one must fill the second group; the lex-smallest
  // assignment vector keeps rows 0 and 1 at home
  const Eigen::MatrixXd rows = basis_rows({0, 0, 0}, 2);
  const Eigen::MatrixXd centroids = basis_rows({0, 1}, 2);
  const GroupPartition p = assign_min_size(rows, centroids, 1);
  CHECK(p.assignments == std::vector<int>{0, 0, 1});
}

TEST_CASE("assignment is infeasible when k * g_min exceeds n") {
  const Eigen::MatrixXd rows = basis_rows({0, 1}, 2);
  const Eigen::MatrixXd centroids = basis_rows({0, 1}, 2);
  CHECK_THROWS_AS(assign_min_size(rows, centroids, 2), std::invalid_argument);
}

TEST_CASE("brute force oracle basics") {
  const Eigen::MatrixXd rows = basis_rows({0, 1, 2}, 3);

  SUBCASE("k=1 puts everything in group 0") {
    const GroupPartition p = brute_force_assignment(rows, basis_rows({0}, 3), 1);
    CHECK(p.assignments == std::vector<int>{0, 0, 0});
  }
  SUBCASE("identity on orthogonal rows with matching centroids") {
    const GroupPartition p = brute_force_assignment(rows, rows, 1);
    CHECK(p.assignments == std::vector<int>{0, 1, 2});
  }
  SUBCASE("guard rejects oversized instances") {
    std::mt19937_64 gen(4);
    Eigen::MatrixXd big(30, 2);
    for (int i = 0; i < 30; ++i) big.row(i) = testutil::random_unit_vector(2, gen).transpose();
    CHECK_THROWS_WITH_AS(brute_force_assignment(big, basis_rows({0, 1}, 2), 1),
                         doctest::Contains("too large"), std::invalid_argument);
  }
}

TEST_CASE("flow assignment matches the enumeration oracle") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const RandomInstance inst = random_instance(gen, 8, 3);
    const GroupPartition fast = assign_min_size(inst.rows, inst.centroids, inst.g_min);
    const GroupPartition slow = brute_force_assignment(inst.rows, inst.centroids, inst.g_min);
    REQUIRE(fast.assignments == slow.assignments);
    CHECK(assignment_cost(inst.rows, inst.centroids, fast.assignments) ==
          assignment_cost(inst.rows, inst.centroids, slow.assignments));
    validate_partition(fast, inst.g_min);
  }
}

TEST_CASE("constrained kmeans separates orthogonal clusters") {
  const Eigen::MatrixXd rows = basis_rows({0, 0, 0, 1, 1, 1}, 2);
  MupoConfig cfg;
  cfg.n = 6;
  cfg.k = 2;
  cfg.g_min = 3;
  const GroupPartition p = constrained_kmeans(rows, cfg);
  validate_partition(p, cfg.g_min);
  CHECK(p.group_sizes == std::vector<int>{3, 3});
  CHECK(p.assignments[0] == p.assignments[1]);
  CHECK(p.assignments[1] == p.assignments[2]);
  CHECK(p.assignments[3] == p.assignments[4]);
  CHECK(p.assignments[4] == p.assignments[5]);
  CHECK(p.assignments[0] != p.assignments[3]);
}

TEST_CASE("kmeans with one group converges immediately") {
  std::mt19937_64 gen(5);
  Eigen::MatrixXd rows(4, 3);
  for (int i = 0; i < 4; ++i) rows.row(i) = testutil::random_unit_vector(3, gen).transpose();
  MupoConfig cfg;
  cfg.n = 4;
  cfg.k = 1;
  cfg.g_min = 1;
  ClusterState state;
  const GroupPartition p = constrained_kmeans(rows, cfg, state, nullptr);
  CHECK(p.group_sizes == std::vector<int>{4});
  CHECK(state.converged);
  CHECK(state.iteration == 1);
}

TEST_CASE("kmeans is deterministic and seed independent") {
  std::mt19937_64 gen(6);
  Eigen::MatrixXd rows(10, 4);
  for (int i = 0; i < 10; ++i) rows.row(i) = testutil::random_unit_vector(4, gen).transpose();
  MupoConfig cfg;
  cfg.n = 10;
  cfg.k = 3;
  cfg.g_min = 2;
  cfg.seed = 1;
  const GroupPartition a = constrained_kmeans(rows, cfg);
  cfg.seed = 999;
  const GroupPartition b = constrained_kmeans(rows, cfg);
  CHECK(a.assignments == b.assignments);
}

TEST_CASE("kmeans cost never increases across iterations") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testutil::uniform_int(gen, 6, 15);
    Eigen::MatrixXd rows(n, 3);
    for (int i = 0; i < n; ++i) {
      if (i > 0 && testutil::uniform01(gen) < 0.3) {
        rows.row(i) = rows.row(testutil::uniform_int(gen, 0, i - 1));
      } else {
        rows.row(i) = testutil::random_unit_vector(3, gen).transpose();
      }
    }
    MupoConfig cfg;
    cfg.n = n;
    cfg.k = testutil::uniform_int(gen, 1, 3);
    cfg.g_min = std::min(2, n / cfg.k);
    ClusterState state;
    std::vector<double> costs;
    const GroupPartition p = constrained_kmeans(rows, cfg, state, &costs);
    validate_partition(p, cfg.g_min);
    for (std::size_t i = 1; i < costs.size(); ++i) CHECK(costs[i] <= costs[i - 1] + 1e-9);
  }
}

TEST_CASE("permuting rows permutes the partition at identical cost") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const RandomInstance inst = random_instance(gen, 8, 3);
    const int n = static_cast<int>(inst.rows.rows());
    const GroupPartition base = assign_min_size(inst.rows, inst.centroids, inst.g_min);

    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), gen);
    Eigen::MatrixXd shuffled(n, inst.rows.cols());
    for (int i = 0; i < n; ++i) shuffled.row(i) = inst.rows.row(perm[static_cast<std::size_t>(i)]);

    const GroupPartition moved = assign_min_size(shuffled, inst.centroids, inst.g_min);
    std::vector<int> unpermuted(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      unpermuted[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
          moved.assignments[static_cast<std::size_t>(i)];
    }
    CHECK(assignment_cost(inst.rows, inst.centroids, unpermuted) ==
          doctest::Approx(assignment_cost(inst.rows, inst.centroids, base.assignments))
              .epsilon(1e-12));
  }
}

TEST_CASE("partition validation catches violations") {
  GroupPartition p;
  p.n = 3;
  p.k = 2;
  p.assignments = {0, 0, 1};
  p.group_sizes = {2, 1};
  CHECK_NOTHROW(validate_partition(p, 1));
  CHECK_THROWS_AS(validate_partition(p, 2), std::invalid_argument);  // size below minimum

  p.group_sizes = {1, 2};  // stored sizes disagree with members
  CHECK_THROWS_AS(validate_partition(p, 1), std::invalid_argument);

  p.group_sizes = {2, 1};
  p.assignments = {0, 0, 2};  // out of range group
  CHECK_THROWS_AS(validate_partition(p, 1), std::invalid_argument);

  p.assignments = {0, 0, 1};
  p.n = 4;  // assignment count mismatch
  CHECK_THROWS_AS(validate_partition(p, 1), std::invalid_argument);
}
