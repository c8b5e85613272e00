#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rropt/birr.hpp"

using namespace rropt;

namespace {

RunConfig birr_config(double R, std::int64_t K, std::uint64_t seed, double q,
                      int dim) {
  RunConfig config;
  config.method = Method::BIRR;
  config.schedule = StepsizeSchedule{R, 0.75};
  config.q = q;
  config.cycles = K;
  config.seed = seed;
  config.x0 = Vector::Ones(dim);
  config.log_stride = K;
  return config;
}

}  // namespace

TEST_CASE("driver validation") {
  const auto problem = make_example1();
  auto config = birr_config(1.0, 100, 1, 0.5, 1);
  config.method = Method::RR;
  CHECK_THROWS_AS(birr_run(problem, config), std::invalid_argument);
  config = birr_config(1.0, 1, 1, 0.5, 1);
  CHECK_THROWS_AS(birr_run(problem, config), std::invalid_argument);
}

TEST_CASE("the uncorrected value equals a plain reshuffled run bit for bit") {
  const auto problem = make_quadratic_problem(3, 4, 1.0, 2);
  auto config = birr_config(0.05, 500, 7, 0.5, 3);
  const auto result = birr_run(problem, config);
  config.method = Method::RR;
  const auto plain = run(problem, config);
  CHECK(result.suffix_avg == plain.xbar_suffix);
  CHECK(result.alpha_bar_suffix == plain.alpha_bar_suffix);
  CHECK(result.output == result.suffix_avg - result.bias_hat);
}

TEST_CASE("replays are deterministic") {
  const auto problem = make_quadratic_problem(3, 4, 1.0, 2);
  const auto config = birr_config(0.05, 300, 9, 0.5, 3);
  const auto a = birr_run(problem, config);
  const auto b = birr_run(problem, config);
  CHECK(a.output == b.output);
  CHECK(a.bias_hat == b.bias_hat);
}

TEST_CASE("q = 1 averages the whole run") {
  const auto problem = make_example1();
  const auto result = birr_run(problem, birr_config(1.0, 200, 3, 1.0, 1));
  CHECK(result.trajectory.snapshot_cycle == 0);
  CHECK(result.suffix_avg == result.trajectory.xbar_full);
}

TEST_CASE("estimated bias tracks the deterministic bias") {
  const auto problem = make_quadratic_problem(3, 4, 1.0, 5);
  const std::int64_t K = 20000;
  const auto result = birr_run(problem, birr_config(0.05, K, 4, 0.5, 3));
  const Vector b = oracle::bias(problem, StepsizeSchedule{0.05, 0.75}, 0.5, K);
  CHECK((result.bias_hat - b).norm() <= 0.05 * b.norm() + 1e-8);
}

TEST_CASE("without drift the correction is negligible") {
  Component a, b;
  a.P = 2.0 * Matrix::Identity(2, 2);
  b.P = Matrix::Identity(2, 2);
  a.q = Vector::Zero(2);
  b.q = Vector::Zero(2);
  const FiniteSumProblem aligned({a, b});
  const auto result = birr_run(aligned, birr_config(0.2, 10000, 1, 0.5, 2));
  CHECK(result.bias_hat.norm() <= 1e-4);
}

TEST_CASE("trajectory diagnostics are filled and exported") {
  const auto problem = make_example1();
  const auto result = birr_run(problem, birr_config(1.0, 100, 1, 0.5, 1));
  REQUIRE(result.trajectory.bhat_norm.has_value());
  REQUIRE(result.trajectory.output_dist.has_value());
  CHECK(*result.trajectory.bhat_norm == result.bias_hat.norm());
  CHECK(*result.trajectory.output_dist ==
        (result.output - problem.optimum()).norm());
  std::ostringstream out;
  result.trajectory.write_csv(out);
  CHECK(out.str().rfind("k,dist,f_gap,xbar_dist,alpha_bar,bhat_norm,output_dist", 0) == 0);
}

TEST_CASE("bias removal beats the plain suffix average in the median") {
  const auto problem = make_example1();
  const std::int64_t K = 10000;
  std::vector<double> out_dist, avg_dist;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto result = birr_run(problem, birr_config(1.0, K, seed, 0.5, 1));
    out_dist.push_back((result.output - problem.optimum()).norm());
    avg_dist.push_back((result.suffix_avg - problem.optimum()).norm());
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median(out_dist) <= 0.5 * median(avg_dist));
}
