#include <doctest.h>

#include <cmath>

#include "rropt/engine.hpp"
#include "rropt/oracles.hpp"

using namespace rropt;

TEST_CASE("v(sigma) on the two-component fixture") {
  const auto problem = make_example1();
  // grad f_1(x*) = -1, grad f_2(x*) = 1, P_1 = 1, P_2 = 2.
  // order (1,2): v = -P_2 * grad f_1(x*) = 2; order (2,1): v = -P_1 * grad f_2(x*) = -1.
  CHECK(oracle::v_of_sigma(problem, {0, 1})(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(oracle::v_of_sigma(problem, {1, 0})(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(oracle::mu_star(problem)(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("single-component problems have zero drift") {
  Component comp;
  comp.P = Matrix::Identity(2, 2);
  comp.q = Vector::Ones(2);
  const FiniteSumProblem problem({comp});
  CHECK(oracle::v_of_sigma(problem, {0}).norm() == 0.0);
  CHECK(oracle::mu_star(problem).norm() == 0.0);
  CHECK(oracle::M_gamma(problem).value == 0.0);
}

TEST_CASE("mu* equals the brute-force permutation mean of v") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto problem = make_quadratic_problem(3, 4, 1.0, seed);
    const Vector mean = oracle::permutation_mean_v(problem);
    const Vector mu = oracle::mu_star(problem);
    CHECK((mean - mu).norm() <= 1e-12 * std::max(1.0, mu.norm()));
  }
}

TEST_CASE("theta* equals mu* on quadratics and vanishes without drift") {
  const auto problem = make_quadratic_problem(3, 4, 1.0, 6);
  CHECK(oracle::theta_star(problem) == oracle::mu_star(problem));

  // Components sharing the same minimizer: all gradients vanish at x*.
  Component a, b;
  a.P = 2.0 * Matrix::Identity(2, 2);
  b.P = Matrix::Identity(2, 2);
  const Vector common = Vector::Constant(2, 1.5);
  a.q = a.P * common;
  b.q = b.P * common;
  const FiniteSumProblem aligned({a, b});
  CHECK((aligned.optimum() - common).norm() <= 1e-12);
  CHECK(oracle::theta_star(aligned).norm() <= 1e-12);
}

TEST_CASE("M_gamma on the two-component fixture is the larger |v|") {
  const auto problem = make_example1();
  const auto mg = oracle::M_gamma(problem);
  CHECK(mg.exact);
  CHECK(mg.value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mg.value <= problem.constants().M_gamma_bound);
}

TEST_CASE("M_gamma falls back to the analytic bound for large m") {
  const auto problem = make_quadratic_problem(2, 9, 1.0, 1);
  const auto mg = oracle::M_gamma(problem);
  CHECK_FALSE(mg.exact);
  CHECK(mg.value == problem.constants().M_gamma_bound);
  CHECK_THROWS_AS(oracle::permutation_mean_v(problem), std::invalid_argument);
}

TEST_CASE("limit constant a_q(s): endpoints and monotonicity") {
  // q = 1: a_1(s) = -R/(1-s); numerically matched by the exact stepsize sums.
  CHECK(oracle::a_q_s(1.0, 0.75, 1.0) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(oracle::a_q_s(2.0, 0.5, 1.0) == doctest::Approx(-4.0).epsilon(1e-15));
  // |a_q| grows with q: wider windows include older, larger stepsizes.
  double prev = 0.0;
  for (double q = 0.05; q <= 1.0; q += 0.05) {
    const double cur = std::abs(oracle::a_q_s(1.0, 0.75, q));
    CHECK(cur > prev);
    prev = cur;
  }
  // q -> 0 limit is R (the window degenerates to the newest stepsize scale).
  CHECK(std::abs(oracle::a_q_s(1.0, 0.75, 1e-9)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(oracle::a_q_s(1.0, 0.75, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(oracle::a_q_s(1.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(oracle::a_q_s(-1.0, 0.75, 0.5), std::invalid_argument);
}

TEST_CASE("scaled stepsize averages approach -a_q(s)") {
  // Convergence is O(k^{-(1-s)}), so check a shrinking gap plus a loose
  // absolute tolerance at the last grid point.
  const StepsizeSchedule schedule{1.0, 0.75};
  for (double q : {0.5, 1.0}) {
    const double target = -oracle::a_q_s(schedule.R, schedule.s, q);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (std::int64_t k : {10000, 160000, 2560000}) {
      const double scaled = suffix_stepsize_average(schedule, q, k) *
                            std::pow(static_cast<double>(k), schedule.s);
      const double gap = std::abs(scaled - target);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap <= 0.03 * target);
  }
}

TEST_CASE("deterministic bias on the two-component fixture at k = 1") {
  const auto problem = make_example1();
  const StepsizeSchedule schedule{1.0, 0.75};
  // abar_{1,1} = alpha_0 = R, H* = 3, mu* = 1/2: b = -R/6.
  CHECK(oracle::bias(problem, schedule, 1.0, 1)(0) ==
        doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("bias vanishes when the drift does") {
  Component a, b;
  a.P = 2.0 * Matrix::Identity(2, 2);
  b.P = Matrix::Identity(2, 2);
  a.q = Vector::Zero(2);
  b.q = Vector::Zero(2);
  const FiniteSumProblem aligned({a, b});
  CHECK(oracle::bias(aligned, StepsizeSchedule{1.0, 0.75}, 0.5, 100).norm() <= 1e-15);
}

TEST_CASE("bias estimate frozen at the optimum reproduces the bias exactly") {
  for (std::uint64_t seed : {3u, 8u}) {
    const auto problem = make_quadratic_problem(3, 4, 1.0, seed);
    const StepsizeSchedule schedule{0.05, 0.75};
    const double q = 0.5;
    const std::int64_t k = 1000;
    const double abar = suffix_stepsize_average(schedule, q, k);
    std::vector<Vector> frozen(problem.count() + 1, problem.optimum());
    std::vector<int> order(problem.count());
    std::iota(order.begin(), order.end(), 0);
    const Vector bhat = oracle::bias_estimate(problem, frozen, order, abar);
    const Vector b = oracle::bias(problem, schedule, q, k);
    CHECK((bhat - b).norm() <= 1e-12 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("bias estimate error scales like the squared stepsize") {
  const auto problem = make_quadratic_problem(3, 4, 1.0, 5);
  const StepsizeSchedule schedule{0.05, 0.75};
  const double q = 0.5;
  std::vector<double> ratios;
  for (std::int64_t K : {1000, 10000, 100000}) {
    std::vector<double> per_seed;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RunConfig config;
      config.method = Method::RR;
      config.schedule = schedule;
      config.q = q;
      config.cycles = K;
      config.seed = seed;
      config.x0 = Vector::Ones(3);
      const auto traj = run(problem, config);
      const Vector bhat = oracle::bias_estimate(problem, traj.last_cycle_inner,
                                                traj.last_cycle_order,
                                                traj.alpha_bar_suffix);
      const Vector b = oracle::bias(problem, schedule, q, K);
      const double alpha_k = schedule.alpha(K);
      per_seed.push_back((bhat - b).norm() / (alpha_k * alpha_k));
    }
    std::sort(per_seed.begin(), per_seed.end());
    ratios.push_back(per_seed[per_seed.size() / 2]);
  }
  // The normalized error must stay bounded as K grows.
  const double base = std::max(ratios[0], 1e-12);
  CHECK(ratios[1] <= 3.0 * base);
  CHECK(ratios[2] <= 3.0 * base);
}

TEST_CASE("Y recovers the drift from synthetic cycle errors") {
  const auto problem = make_example1();
  const Vector mu = oracle::mu_star(problem);
  const StepsizeSchedule schedule{1.0, 0.75};
  std::vector<Vector> errors;
  std::vector<double> alphas;
  for (int j = 0; j < 100; ++j) {
    alphas.push_back(schedule.alpha(j));
    errors.push_back(alphas.back() * mu);
  }
  const Vector y = oracle::Y_qk(errors, alphas, 0.5, 100);
  CHECK((y - mu).norm() <= 1e-13);
  errors.assign(100, Vector::Zero(1));
  CHECK(oracle::Y_qk(errors, alphas, 1.0, 100).norm() == 0.0);
  CHECK_THROWS_AS(oracle::Y_qk(errors, alphas, 0.5, 101), std::invalid_argument);
}

TEST_CASE("Y from a real run approaches the drift") {
  const auto problem = make_example1();
  RunConfig config;
  config.method = Method::RR;
  config.schedule = StepsizeSchedule{1.0, 0.75};
  config.q = 0.5;
  config.cycles = 100000;
  config.seed = 2;
  config.x0 = Vector::Ones(1);
  config.dense_log = true;
  config.log_stride = config.cycles;
  const auto traj = run(problem, config);
  const Vector y = oracle::Y_qk(traj.cycle_errors, traj.alphas, 0.5, config.cycles);
  const Vector mu = oracle::mu_star(problem);
  CHECK((y - mu).norm() <= 0.05 * mu.norm() + 0.05);
}

TEST_CASE("I vanishes for constant iterates and respects bounds checks") {
  std::vector<Vector> iterates(11, Vector::Ones(2));
  std::vector<double> alphas(10, 0.5);
  CHECK(oracle::I_qk(iterates, alphas, 0.5, 10).norm() == 0.0);
  CHECK_THROWS_AS(oracle::I_qk(iterates, alphas, 0.5, 11), std::invalid_argument);
}

TEST_CASE("squared-stepsize sums: scaling, base case, and domain") {
  const StepsizeSchedule r1{1.0, 0.75};
  const StepsizeSchedule r2{2.0, 0.75};
  CHECK(oracle::zeta_stepsize_sum(r1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(oracle::zeta_stepsize_sum(r2, 1) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(oracle::zeta_stepsize_sum(r2, 1000) ==
        doctest::Approx(4.0 * oracle::zeta_stepsize_sum(r1, 1000)).epsilon(1e-14));
  CHECK_THROWS_AS(oracle::zeta_stepsize_sum(StepsizeSchedule{1.0, 0.5}, 10),
                  std::invalid_argument);
}

TEST_CASE("oracle report lists every permutation for small problems") {
  const auto problem = make_example1();
  const auto doc = oracle::report(problem);
  CHECK(doc["mu_star"][0].get<double>() == doctest::Approx(0.5));
  CHECK(doc["M_gamma"].get<double>() == doctest::Approx(2.0));
  CHECK(doc["per_sigma"].size() == 2);
  CHECK(doc["per_sigma"]["(1,2)"].get<double>() == doctest::Approx(2.0));
  CHECK(doc["per_sigma"]["(2,1)"].get<double>() == doctest::Approx(1.0));
  CHECK_THROWS_AS(oracle::report(make_quadratic_problem(2, 6, 1.0, 1)),
                  std::invalid_argument);
}
