#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mupo/reward.hpp"
#include "test_util.hpp"

#include <random>

using mupo::diversity_reward;
using mupo::GroupPartition;
using mupo::lambda_schedule;
using mupo::RewardBreakdown;
using mupo::total_reward;
using mupo::verify_format;

namespace {

GroupPartition partition_of(std::vector<int> assignments, int k) {
  GroupPartition p;
  p.n = static_cast<int>(assignments.size());
  p.k = k;
  p.group_sizes.assign(static_cast<std::size_t>(k), 0);
  for (int g : assignments) ++p.group_sizes[static_cast<std::size_t>(g)];
  p.assignments = std::move(assignments);
  return p;
}

}  // namespace

TEST_CASE("lambda schedule endpoints and midpoint") {
  CHECK(lambda_schedule(0, 100, 0.4, 0.1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(lambda_schedule(100, 100, 0.4, 0.1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(lambda_schedule(50, 100, 0.4, 0.1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_schedule(101, 100, 0.4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lambda_schedule(-1, 100, 0.4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lambda_schedule(0, 0, 0.4, 0.1), std::invalid_argument);
}

TEST_CASE("lambda schedule decays strictly, flat when degenerate") {
  double prev = lambda_schedule(0, 200, 0.4, 0.1);
  for (int t = 1; t <= 200; ++t) {
    const double cur = lambda_schedule(t, 200, 0.4, 0.1);
    CHECK(cur < prev);
    prev = cur;
  }
  for (int t = 0; t <= 10; ++t) CHECK(lambda_schedule(t, 10, 0.2, 0.2) == 0.2);
}

TEST_CASE("diversity reward over two singleton groups") {
  Eigen::MatrixXd emb(2, 2);
  emb << 1, 0, 0, 1;
  const GroupPartition p = partition_of({0, 1}, 2);
  CHECK(diversity_reward(0, p, emb) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(diversity_reward(1, p, emb) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diversity reward of identical embeddings is exactly zero") {
  Eigen::MatrixXd emb(4, 3);
  for (int i = 0; i < 4; ++i) emb.row(i) = Eigen::RowVector3d(0, 0, 1);
  const GroupPartition p = partition_of({0, 0, 1, 1}, 2);
  for (int i = 0; i < 4; ++i) CHECK(diversity_reward(i, p, emb) == 0.0);
}

TEST_CASE("single group means zero diversity reward") {
  std::mt19937_64 gen(5);
  Eigen::MatrixXd emb(3, 4);
  for (int i = 0; i < 3; ++i) emb.row(i) = testutil::random_unit_vector(4, gen).transpose();
  const GroupPartition p = partition_of({0, 0, 0}, 1);
  for (int i = 0; i < 3; ++i) CHECK(diversity_reward(i, p, emb) == 0.0);
}

TEST_CASE("diversity reward matches a direct set-based oracle") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testutil::uniform_int(gen, 4, 12);
    const int k = testutil::uniform_int(gen, 2, 3);
    Eigen::MatrixXd emb(n, 3);
    std::vector<int> assign(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      emb.row(i) = testutil::random_unit_vector(3, gen).transpose();
      assign[static_cast<std::size_t>(i)] = (i < k) ? i : testutil::uniform_int(gen, 0, k - 1);
    }
    const GroupPartition p = partition_of(assign, k);
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      int outside = 0;
      for (int j = 0; j < n; ++j) {
        if (p.assignments[static_cast<std::size_t>(j)] ==
            p.assignments[static_cast<std::size_t>(i)]) {
          continue;
        }
        sum += mupo::cosine_distance(emb.row(i), emb.row(j));
        ++outside;
      }
      const double expected = outside == 0 ? 0.0 : sum / outside;
      const double got = diversity_reward(i, p, emb);
      CHECK(got == doctest::Approx(expected).epsilon(1e-12));
      CHECK(got >= 0.0);
      CHECK(got <= 2.0);
    }
    // group-sum identity: summing members equals size times their mean
    for (int g = 0; g < k; ++g) {
      double sum = 0.0;
      int size = 0;
      for (int i = 0; i < n; ++i) {
        if (p.assignments[static_cast<std::size_t>(i)] == g) {
          sum += diversity_reward(i, p, emb);
          ++size;
        }
      }
      CHECK(sum == doctest::Approx(size * (sum / size)).epsilon(1e-12));
    }
  }
}

TEST_CASE("total reward composes and gates on accuracy") {
  const RewardBreakdown full = total_reward(true, true, 0.5, 0.4);
  CHECK(full.total == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(full.r_acc == 1.0);
  CHECK(full.r_fmt == 1.0);

  const RewardBreakdown gated = total_reward(false, true, 2.0, 0.4);
  CHECK(gated.total == 1.0);

  const RewardBreakdown zero = total_reward(false, false, 1.3, 0.4);
  CHECK(zero.total == 0.0);
}

TEST_CASE("incorrect rollouts are bit-for-bit independent of the diversity term") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 200; ++trial) {
    const bool well_formed = gen() & 1;
    const double r_div = testutil::uniform(gen, 0.0, 2.0);
    const double lambda = testutil::uniform(gen, 0.0, 1.0);
    const RewardBreakdown a = total_reward(false, well_formed, r_div, lambda);
    const RewardBreakdown b = total_reward(false, well_formed, 0.0, 0.0);
    CHECK(a.total == b.total);
  }
}

TEST_CASE("reward breakdown invariant holds for random inputs") {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 200; ++trial) {
    const bool correct = gen() & 1;
    const bool well_formed = gen() & 1;
    const double r_div = testutil::uniform(gen, 0.0, 2.0);
    const double lambda = testutil::uniform(gen, 0.0, 1.0);
    const RewardBreakdown rb = total_reward(correct, well_formed, r_div, lambda);
    const double expected = rb.r_acc + rb.r_fmt + rb.lambda * (rb.r_acc == 1.0 ? 1.0 : 0.0) * rb.r_div;
    CHECK(std::abs(rb.total - expected) < 1e-12);
  }
}

TEST_CASE("format verification") {
  CHECK(verify_format("<think>x</think>answer"));
  CHECK_FALSE(verify_format("no tags"));
  CHECK_FALSE(verify_format("<think><think>x</think>"));
  CHECK_FALSE(verify_format("</think>x<think>"));
  CHECK_FALSE(verify_format("<think>x</think><think>y</think>"));
  CHECK(verify_format("[a]x[/a]", "[a]", "[/a]"));
  CHECK_FALSE(verify_format(""));
  CHECK_THROWS_AS(verify_format("x", "", "</think>"), std::invalid_argument);
}
