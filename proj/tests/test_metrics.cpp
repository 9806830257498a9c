#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mupo/metrics.hpp"
#include "test_util.hpp"

#include <random>

using mupo::acc_at_k;
using mupo::diversity_curve;
using mupo::ema_smooth;
using mupo::ExampleSamples;
using mupo::SampleSet;

namespace {

SampleSet one_example(std::vector<bool> verdicts) {
  SampleSet samples;
  samples.push_back({"ex0", std::move(verdicts), {}});
  return samples;
}

}  // namespace

TEST_CASE("acc@k on listed examples") {
  CHECK(acc_at_k(one_example({true, false, false, false}), 1) == 1.0);
  CHECK(acc_at_k(one_example({true, false, false, false}), 4) == 1.0);
  CHECK(acc_at_k(one_example({false, false, true, false}), 1) == 0.0);
  CHECK(acc_at_k(one_example({false, false, true, false}), 4) == 1.0);

  SampleSet two;
  two.push_back({"a", {false, false, false, false}, {}});
  two.push_back({"b", {false, true, false, false}, {}});
  CHECK(acc_at_k(two, 2) == 0.5);
}

TEST_CASE("acc@k errors name the offending example") {
  SampleSet samples;
  samples.push_back({"short-example", {true}, {}});
  CHECK_THROWS_WITH_AS(acc_at_k(samples, 2), doctest::Contains("short-example"),
                       std::invalid_argument);
  CHECK_THROWS_AS(acc_at_k(samples, 0), std::invalid_argument);
  CHECK_THROWS_AS(acc_at_k(SampleSet{}, 1), std::invalid_argument);
}

TEST_CASE("acc@k is monotone in k") {
  std::mt19937_64 gen(71);
  for (int trial = 0; trial < 300; ++trial) {
    const int examples = testutil::uniform_int(gen, 1, 12);
    const int responses = testutil::uniform_int(gen, 1, 8);
    SampleSet samples;
    for (int e = 0; e < examples; ++e) {
      std::vector<bool> verdicts(static_cast<std::size_t>(responses));
      for (int r = 0; r < responses; ++r) verdicts[static_cast<std::size_t>(r)] = gen() & 1;
      samples.push_back({"e" + std::to_string(e), std::move(verdicts), {}});
    }
    double previous = 0.0;
    for (int k = 1; k <= responses; ++k) {
      const double value = acc_at_k(samples, k);
      CHECK(value >= previous);
      previous = value;
    }
  }
}

TEST_CASE("acc@k saturates on all-correct and all-incorrect sets") {
  SampleSet all_correct, all_wrong;
  for (int e = 0; e < 5; ++e) {
    all_correct.push_back({"c" + std::to_string(e), {true, true, true}, {}});
    all_wrong.push_back({"w" + std::to_string(e), {false, false, false}, {}});
  }
  for (int k = 1; k <= 3; ++k) {
    CHECK(acc_at_k(all_correct, k) == 1.0);
    CHECK(acc_at_k(all_wrong, k) == 0.0);
  }
}

TEST_CASE("ema smoothing") {
  const std::vector<double> series{0.0, 1.0};
  CHECK(ema_smooth(series, 0.5) == std::vector<double>{0.0, 0.5});

  const std::vector<double> ramp{3.0, 1.0, 4.0, 1.0, 5.0};
  CHECK(ema_smooth(ramp, 1.0) == ramp);

  const std::vector<double> flat{2.5, 2.5, 2.5};
  CHECK(ema_smooth(flat, 0.1) == flat);

  CHECK_THROWS_AS(ema_smooth({}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ema_smooth(series, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ema_smooth(series, 1.5), std::invalid_argument);
}

TEST_CASE("ema stays within the input bounds") {
  std::mt19937_64 gen(73);
  for (int trial = 0; trial < 100; ++trial) {
    const int len = testutil::uniform_int(gen, 1, 40);
    std::vector<double> series(static_cast<std::size_t>(len));
    for (double& x : series) x = testutil::uniform(gen, -5.0, 5.0);
    const double alpha = testutil::uniform(gen, 0.01, 1.0);
    const double lo = *std::min_element(series.begin(), series.end());
    const double hi = *std::max_element(series.begin(), series.end());
    for (double y : ema_smooth(series, alpha)) {
      CHECK(y >= lo - 1e-12);
      CHECK(y <= hi + 1e-12);
    }
  }
}

TEST_CASE("diversity curve follows per-step batches") {
  Eigen::MatrixXd same(3, 2);
  same << 1, 0, 1, 0, 1, 0;
  Eigen::MatrixXd ortho(2, 2);
  ortho << 1, 0, 0, 1;
  const std::vector<double> curve = diversity_curve({same, ortho, same});
  REQUIRE(curve.size() == 3);
  CHECK(curve[0] == 0.0);
  CHECK(curve[1] == 1.0);
  CHECK(curve[2] == 0.0);

  std::mt19937_64 gen(79);
  Eigen::MatrixXd batch(5, 3);
  for (int i = 0; i < 5; ++i) batch.row(i) = testutil::random_unit_vector(3, gen).transpose();
  Eigen::MatrixXd reversed = batch.colwise().reverse();
  const std::vector<double> pair = diversity_curve({batch, reversed});
  CHECK(pair[0] == doctest::Approx(pair[1]).epsilon(1e-12));
}
