#include <doctest.h>

#include <Eigen/Dense>

#include "rropt/problem.hpp"
#include "rropt/problem_io.hpp"
#include "rropt/rng.hpp"

using rropt::Component;
using rropt::FiniteSumProblem;
using rropt::Matrix;
using rropt::Vector;

namespace {

Vector fd_gradient(const Component& comp, const Vector& x, double h = 1e-5) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (comp.value(xp) - comp.value(xm)) / (2 * h);
  }
  return g;
}

Matrix fd_hessian(const Component& comp, const Vector& x, double h = 1e-5) {
  Matrix hess(x.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    hess.col(i) = (comp.gradient(xp) - comp.gradient(xm)) / (2 * h);
  }
  return hess;
}

Vector random_point(int n, std::uint64_t tag) {
  rropt::KeyedStream stream(0xF00Du, tag);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = stream.next_normal();
  return x;
}

}  // namespace

TEST_CASE("Example-1 fixture matches its hand-computed quantities") {
  const auto problem = rropt::make_example1();
  CHECK(problem.optimum()(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(problem.hessian_at_optimum()(0, 0) == doctest::Approx(3.0));
  CHECK(problem.optimal_value() == doctest::Approx(1.0));

  const auto& c = problem.constants();
  CHECK(c.c == doctest::Approx(3.0));
  CHECK(c.L == doctest::Approx(3.0));
  CHECK(c.G_star == doctest::Approx(1.0));
  CHECK(c.M_gamma_bound == doctest::Approx(6.0));
}

TEST_CASE("component gradients at the Example-1 optimum") {
  const auto problem = rropt::make_example1();
  const Vector zero = Vector::Zero(1);
  CHECK(problem.component_gradient(0, zero)(0) == doctest::Approx(-1.0));
  CHECK(problem.component_gradient(1, zero)(0) == doctest::Approx(1.0));
  CHECK(problem.gradient(problem.optimum()).norm() <= 1e-12);
  CHECK_THROWS_AS((void)problem.component_gradient(2, zero), std::out_of_range);
  Vector bad = Vector::Constant(1, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS((void)problem.component_gradient(0, bad));
}

TEST_CASE("single symmetric quadratic has optimum zero and no drift constants") {
  Component comp;
  comp.P = Matrix::Identity(3, 3);
  comp.q = Vector::Zero(3);
  const FiniteSumProblem problem({comp});
  CHECK(problem.optimum().norm() == 0.0);
  CHECK(problem.constants().G_star == 0.0);
  CHECK(problem.constants().M_gamma_bound == 0.0);
}

TEST_CASE("seed-7 quadratic optimum matches an independent dense solve") {
  const auto problem = rropt::make_quadratic_problem(5, 5, 1.0, 7);
  Matrix psum = Matrix::Zero(5, 5);
  Vector qsum = Vector::Zero(5);
  for (const auto& comp : problem.components()) {
    psum += comp.P;
    qsum += comp.q;
  }
  const Vector x_ref = psum.fullPivLu().solve(qsum);
  CHECK((problem.optimum() - x_ref).norm() <= 1e-10 * std::max(1.0, x_ref.norm()));
  // normal-equation residual
  CHECK((psum * problem.optimum() - qsum).norm() <= 1e-10 * qsum.norm());
  // G* equals the directly evaluated max gradient norm
  double g = 0.0;
  for (const auto& comp : problem.components())
    g = std::max(g, (comp.P * problem.optimum() - comp.q).norm());
  CHECK(problem.constants().G_star == doctest::Approx(g).epsilon(1e-14));
}

TEST_CASE("quadratic generator is deterministic and meets the curvature target") {
  const auto a = rropt::make_quadratic_problem(3, 4, 1.0, 0);
  const auto b = rropt::make_quadratic_problem(3, 4, 1.0, 0);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.component(i).P == b.component(i).P);
    CHECK(a.component(i).q == b.component(i).q);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.hessian_at_optimum(), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= 1.0);
  // H* = sum P_i exactly for quadratics
  Matrix psum = Matrix::Zero(3, 3);
  for (const auto& comp : a.components()) psum += comp.P;
  CHECK((a.hessian_at_optimum() - psum).norm() == 0.0);
}

TEST_CASE("smooth components pass finite-difference checks") {
  const auto problem = rropt::make_smooth_problem(2, 3, 1.0, 1);
  CHECK_FALSE(problem.is_quadratic());
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = random_point(2, trial);
    for (const auto& comp : problem.components()) {
      const Vector g = comp.gradient(x);
      CHECK((g - fd_gradient(comp, x)).norm() <= 1e-6 * std::max(1.0, g.norm()));
      const Matrix h = comp.hessian(x);
      CHECK((h - fd_hessian(comp, x)).norm() <= 1e-6 * std::max(1.0, h.norm()));
      CHECK((h - h.transpose()).norm() <= 1e-10);
    }
  }
  CHECK(problem.gradient(problem.optimum()).norm() <= 1e-9);
}

TEST_CASE("smooth Hessians are Lipschitz with the stored constant") {
  const auto problem = rropt::make_smooth_problem(2, 3, 1.0, 1);
  for (int pair = 0; pair < 100; ++pair) {
    const Vector x = random_point(2, 1000 + pair);
    const Vector y = random_point(2, 2000 + pair);
    for (const auto& comp : problem.components()) {
      const double lhs = (comp.hessian(x) - comp.hessian(y)).operatorNorm();
      CHECK(lhs <= comp.hessian_lipschitz() * (x - y).norm() * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("Taylor remainder of the sum gradient is controlled by U") {
  const auto problem = rropt::make_smooth_problem(2, 3, 1.0, 1);
  const Vector x_star = problem.optimum();
  const double U = problem.constants().U;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = x_star + 0.3 * random_point(2, 3000 + trial);
    const Vector remainder = problem.gradient(x) - problem.gradient(x_star) -
                             problem.hessian_at_optimum() * (x - x_star);
    CHECK(remainder.norm() <= 0.5 * U * (x - x_star).squaredNorm() * (1.0 + 1e-9));
  }
}

TEST_CASE("quadratic problems report U = 0") {
  CHECK(rropt::make_quadratic_problem(3, 4, 1.0, 2).constants().U == 0.0);
}

TEST_CASE("invalid components are rejected") {
  Component asym;
  asym.P = Matrix::Zero(2, 2);
  asym.P(0, 1) = 1.0;  // not symmetric
  asym.q = Vector::Zero(2);
  CHECK_THROWS_AS(FiniteSumProblem({asym}), std::invalid_argument);

  Component indefinite;
  indefinite.P = -Matrix::Identity(2, 2);
  indefinite.q = Vector::Zero(2);
  CHECK_THROWS_AS(FiniteSumProblem({indefinite}), std::invalid_argument);

  Component flat;  // PSD but the sum is singular
  flat.P = Matrix::Zero(2, 2);
  flat.q = Vector::Zero(2);
  CHECK_THROWS_AS(FiniteSumProblem({flat}), std::invalid_argument);
}

TEST_CASE("JSON round trip is value-exact") {
  const auto quad = rropt::make_quadratic_problem(3, 4, 1.0, 9);
  const auto quad2 = rropt::problem_from_json(
      nlohmann::json::parse(rropt::problem_to_json(quad).dump()));
  for (int i = 0; i < quad.count(); ++i) {
    CHECK(quad.component(i).P == quad2.component(i).P);
    CHECK(quad.component(i).q == quad2.component(i).q);
    CHECK(quad.component(i).r == quad2.component(i).r);
  }

  const auto smooth = rropt::make_smooth_problem(2, 3, 1.0, 4);
  const auto smooth2 = rropt::problem_from_json(rropt::problem_to_json(smooth));
  for (int i = 0; i < smooth.count(); ++i) {
    CHECK(smooth.component(i).eps == smooth2.component(i).eps);
    CHECK(smooth.component(i).a == smooth2.component(i).a);
  }
  CHECK(rropt::problem_to_json(smooth2) == rropt::problem_to_json(smooth));
}
