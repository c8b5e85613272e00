#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rropt/rng.hpp"

namespace rropt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

inline double softplus(double t) {
  // log(1 + e^t), overflow-safe
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}
inline double sigmoid(double t) {
  return t > 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

// max |rho'''| for rho = softplus, attained where sigmoid = (3 +- sqrt(3))/6.
inline constexpr double kSoftplusThirdDerivMax = 0.09622504486493764;  // 1/(6*sqrt(3))

}  // namespace detail

// One summand f_i(x) = 1/2 x'Px - q'x + r + eps * softplus(a'x).
// eps == 0 is the pure quadratic case.
struct Component {
  Matrix P;
  Vector q;
  double r = 0.0;
  double eps = 0.0;
  Vector a;

  int dim() const { return static_cast<int>(P.rows()); }
  bool is_quadratic() const { return eps == 0.0; }

  double value(const Vector& x) const {
    double v = 0.5 * x.dot(P * x) - q.dot(x) + r;
    if (eps != 0.0) v += eps * detail::softplus(a.dot(x));
    return v;
  }
  Vector gradient(const Vector& x) const {
    Vector g = P * x - q;
    if (eps != 0.0) g += eps * detail::sigmoid(a.dot(x)) * a;
    return g;
  }
  Matrix hessian(const Vector& x) const {
    if (eps == 0.0) return P;
    const double s = detail::sigmoid(a.dot(x));
    return P + (eps * s * (1.0 - s)) * (a * a.transpose());
  }

  // Gradient Lipschitz constant L_i (softplus has rho'' <= 1/4).
  double gradient_lipschitz() const {
    double l = P.operatorNorm();
    if (eps != 0.0) l += 0.25 * eps * a.squaredNorm();
    return l;
  }
  // Hessian Lipschitz constant U_i = eps * ||a||^3 * max|rho'''|.
  double hessian_lipschitz() const {
    if (eps == 0.0) return 0.0;
    const double na = a.norm();
    return eps * na * na * na * detail::kSoftplusThirdDerivMax;
  }

  void validate() const {
    const double pnorm = P.norm();
    if ((P - P.transpose()).norm() > 1e-12 * std::max(1.0, pnorm))
      throw std::invalid_argument("component curvature matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(P, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("component curvature matrix is not PSD");
    if (eps < 0.0) throw std::invalid_argument("softplus weight must be >= 0");
    if (eps != 0.0 && a.size() != P.rows())
      throw std::invalid_argument("softplus direction has wrong dimension");
  }
};

struct ProblemConstants {
  double c = 0.0;        // strong convexity of the sum, lambda_min of H*
  double L = 0.0;        // sum of component gradient Lipschitz constants
  double G_star = 0.0;   // max_i ||grad f_i(x*)||
  double U = 0.0;        // sum of component Hessian Lipschitz constants
  double M_gamma_bound = 0.0;  // L * m * G_star
};

// Finite sum f = sum_i f_i with its solved optimum and analytic constants.
// Immutable after construction; safe for concurrent reads.
class FiniteSumProblem {
 public:
  FiniteSumProblem(std::vector<Component> components, std::uint64_t seed = 0)
      : components_(std::move(components)), seed_(seed) {
    if (components_.empty()) throw std::invalid_argument("empty component list");
    n_ = components_.front().dim();
    for (const auto& comp : components_) {
      if (comp.dim() != n_) throw std::invalid_argument("dimension mismatch");
      comp.validate();
    }
    solve();
  }

  int dimension() const { return n_; }
  int count() const { return static_cast<int>(components_.size()); }
  std::uint64_t seed() const { return seed_; }
  bool is_quadratic() const { return quadratic_; }
  const std::vector<Component>& components() const { return components_; }
  const Component& component(int i) const {
    check_index(i);
    return components_[i];
  }

  const Vector& optimum() const { return x_star_; }
  const Matrix& hessian_at_optimum() const { return h_star_; }
  double optimal_value() const { return f_star_; }
  const ProblemConstants& constants() const { return constants_; }

  double value(const Vector& x) const {
    double v = 0.0;
    for (const auto& comp : components_) v += comp.value(x);
    return v;
  }
  Vector gradient(const Vector& x) const {
    Vector g = Vector::Zero(n_);
    for (const auto& comp : components_) g += comp.gradient(x);
    return g;
  }
  Matrix hessian(const Vector& x) const {
    Matrix h = Matrix::Zero(n_, n_);
    for (const auto& comp : components_) h += comp.hessian(x);
    return h;
  }
  Vector component_gradient(int i, const Vector& x) const {
    check_index(i);
    if (!x.allFinite()) throw std::invalid_argument("non-finite point");
    return components_[i].gradient(x);
  }
  Matrix component_hessian(int i, const Vector& x) const {
    check_index(i);
    return components_[i].hessian(x);
  }
  Vector gradient_at_optimum(int i) const {
    check_index(i);
    return grads_at_optimum_[i];
  }
  Matrix hessian_at_optimum_of(int i) const {
    check_index(i);
    return quadratic_ ? components_[i].P : components_[i].hessian(x_star_);
  }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= count()) throw std::out_of_range("component index out of range");
  }

  void solve() {
    quadratic_ = true;
    for (const auto& comp : components_)
      if (!comp.is_quadratic()) quadratic_ = false;

    // Quadratic: exact normal-equation solve (sum P) x = sum q.
    Matrix psum = Matrix::Zero(n_, n_);
    Vector qsum = Vector::Zero(n_);
    for (const auto& comp : components_) {
      psum += comp.P;
      qsum += comp.q;
    }
    {
      Eigen::SelfAdjointEigenSolver<Matrix> es(psum, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("sum function is not strongly convex");
    }
    x_star_ = Eigen::LDLT<Matrix>(psum).solve(qsum);

    if (!quadratic_) newton_refine();

    h_star_ = hessian(x_star_);
    f_star_ = value(x_star_);

    grads_at_optimum_.reserve(components_.size());
    double g_star = 0.0, l = 0.0, u = 0.0;
    for (const auto& comp : components_) {
      grads_at_optimum_.push_back(comp.gradient(x_star_));
      g_star = std::max(g_star, grads_at_optimum_.back().norm());
      l += comp.gradient_lipschitz();
      u += comp.hessian_lipschitz();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h_star_, Eigen::EigenvaluesOnly);
    constants_.c = es.eigenvalues().minCoeff();
    constants_.L = l;
    constants_.G_star = g_star;
    constants_.U = u;
    constants_.M_gamma_bound = l * static_cast<double>(count()) * g_star;

    const double init_norm = gradient(Vector::Zero(n_)).norm();
    if (gradient(x_star_).norm() > 1e-10 * std::max(1.0, init_norm))
      throw std::runtime_error("optimum solve did not reach tolerance");
  }

  // Damped Newton with backtracking (halving); tolerance 1e-12 on the
  // gradient norm, 100 iteration cap.
  void newton_refine() {
    constexpr int kMaxIter = 100;
    constexpr double kTol = 1e-12;
    Vector x = x_star_;
    for (int it = 0; it < kMaxIter; ++it) {
      const Vector g = gradient(x);
      if (g.norm() <= kTol) {
        x_star_ = x;
        return;
      }
      const Vector step = Eigen::LDLT<Matrix>(hessian(x)).solve(g);
      double t = 1.0;
      const double f0 = value(x);
      while (t > 1e-16 && value(x - t * step) > f0 - 0.25 * t * g.dot(step))
        t *= 0.5;
      x -= t * step;
    }
    if (gradient(x).norm() > kTol)
      throw std::runtime_error("Newton solve for the optimum did not converge");
    x_star_ = x;
  }

  std::vector<Component> components_;
  std::uint64_t seed_;
  int n_ = 0;
  bool quadratic_ = true;
  Vector x_star_;
  Matrix h_star_;
  double f_star_ = 0.0;
  std::vector<Vector> grads_at_optimum_;
  ProblemConstants constants_;
};

// Random strongly convex quadratic family: P_i = A_i'A_i + (c/m) I with
// standard normal A_i, normal q_i. Gradients at x* stay nonzero
// generically, so mu* != 0.
inline FiniteSumProblem make_quadratic_problem(int n, int m, double c_target,
                                               std::uint64_t seed) {
  if (n < 1 || m < 1 || c_target <= 0.0)
    throw std::invalid_argument("need n >= 1, m >= 1, c_target > 0");
  std::vector<Component> comps;
  comps.reserve(m);
  for (int i = 0; i < m; ++i) {
    KeyedStream stream(seed, static_cast<std::uint64_t>(i));
    Matrix a(n, n);
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < n; ++col) a(row, col) = stream.next_normal();
    Component comp;
    comp.P = a.transpose() * a + (c_target / m) * Matrix::Identity(n, n);
    comp.P = 0.5 * (comp.P + comp.P.transpose());  // kill rounding asymmetry
    comp.q = Vector(n);
    for (int row = 0; row < n; ++row) comp.q(row) = stream.next_normal();
    comps.push_back(std::move(comp));
  }
  return FiniteSumProblem(std::move(comps), seed);
}

// Quadratic-plus-softplus family: each component is convex with globally
// Lipschitz gradient and Lipschitz Hessian, so the smooth-case assumptions
// hold by construction.
inline FiniteSumProblem make_smooth_problem(int n, int m, double c_target,
                                            std::uint64_t seed) {
  if (n < 1 || m < 1 || c_target <= 0.0)
    throw std::invalid_argument("need n >= 1, m >= 1, c_target > 0");
  std::vector<Component> comps;
  comps.reserve(m);
  for (int i = 0; i < m; ++i) {
    KeyedStream stream(seed ^ 0x5eed5eedULL, static_cast<std::uint64_t>(i));
    Matrix a(n, n);
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < n; ++col) a(row, col) = stream.next_normal();
    Component comp;
    comp.P = a.transpose() * a + (c_target / m) * Matrix::Identity(n, n);
    comp.P = 0.5 * (comp.P + comp.P.transpose());
    comp.q = Vector(n);
    for (int row = 0; row < n; ++row) comp.q(row) = stream.next_normal();
    comp.eps = 0.5 + stream.next_unit();
    comp.a = Vector(n);
    for (int row = 0; row < n; ++row) comp.a(row) = stream.next_normal();
    comps.push_back(std::move(comp));
  }
  return FiniteSumProblem(std::move(comps), seed);
}

// Two quadratics in dimension one: f1 = (x-1)^2/2, f2 = (x+1)^2/2 + x^2/2.
// x* = 0, H* = 3, grad f1(x*) = -1, grad f2(x*) = +1.
inline FiniteSumProblem make_example1() {
  Component c1;
  c1.P = Matrix::Constant(1, 1, 1.0);
  c1.q = Vector::Constant(1, 1.0);
  c1.r = 0.5;
  Component c2;
  c2.P = Matrix::Constant(1, 1, 2.0);
  c2.q = Vector::Constant(1, -1.0);
  c2.r = 0.5;
  return FiniteSumProblem({c1, c2});
}

}  // namespace rropt
