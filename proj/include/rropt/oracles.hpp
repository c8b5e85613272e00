#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rropt/averaging.hpp"
#include "rropt/problem.hpp"
#include "rropt/sampling.hpp"
#include "rropt/schedule.hpp"

namespace rropt::oracle {

// Shared bias-estimator scale. The per-cycle accumulator
// sum_i H_{sigma(i)} grad f_{sigma(i)}(x_{i-1}) evaluates to twice the
// limit drift mu* when frozen at x*, so a factor 1/2 is required for the
// estimate to match the deterministic bias up to O(alpha^2). Kept as one
// constant so the oracle and the BIRR driver cannot diverge.
inline constexpr double kBiasEstimateScale = 0.5;

// v(sigma) = -sum_i H_{sigma(i)}(x*) sum_{l<i} grad f_{sigma(l)}(x*).
// For quadratics H_i(x*) = P_i; same expression drives the smooth case.
inline Vector v_of_sigma(const FiniteSumProblem& problem, const std::vector<int>& sigma) {
  const int n = problem.dimension();
  Vector prefix = Vector::Zero(n);  // sum of gradients at x* over sigma(0..i-1)
  Vector v = Vector::Zero(n);
  for (int idx : sigma) {
    v -= problem.hessian_at_optimum_of(idx) * prefix;
    prefix += problem.gradient_at_optimum(idx);
  }
  return v;
}

// mu* = 1/2 sum_i P_i grad f_i(x*): mean of v(sigma) over all permutations.
inline Vector mu_star(const FiniteSumProblem& problem) {
  Vector mu = Vector::Zero(problem.dimension());
  for (int i = 0; i < problem.count(); ++i)
    mu += problem.component(i).P * problem.gradient_at_optimum(i);
  return 0.5 * mu;
}

// theta* = 1/2 sum_i hess f_i(x*) grad f_i(x*); equals mu* on quadratics.
inline Vector theta_star(const FiniteSumProblem& problem) {
  Vector theta = Vector::Zero(problem.dimension());
  for (int i = 0; i < problem.count(); ++i)
    theta += problem.hessian_at_optimum_of(i) * problem.gradient_at_optimum(i);
  return 0.5 * theta;
}

// Drift of the problem: theta* in general, which reduces to mu* on quadratics.
inline Vector drift(const FiniteSumProblem& problem) { return theta_star(problem); }

inline double M_sigma(const FiniteSumProblem& problem, const std::vector<int>& sigma) {
  return v_of_sigma(problem, sigma).norm();
}

struct MGammaResult {
  double value = 0.0;
  bool exact = false;  // false: L*m*G* upper bound, enumeration skipped
};

// Exact sup over all permutations for m <= 8; the triangle-inequality
// bound L*m*G* otherwise.
inline MGammaResult M_gamma(const FiniteSumProblem& problem) {
  if (problem.count() > 8)
    return {problem.constants().M_gamma_bound, false};
  double best = 0.0;
  for (const auto& sigma : enumerate_permutations(problem.count()))
    best = std::max(best, M_sigma(problem, sigma));
  return {best, true};
}

// Brute-force mean of v(sigma) over all m! permutations (m <= 7).
inline Vector permutation_mean_v(const FiniteSumProblem& problem) {
  if (problem.count() > 7)
    throw std::invalid_argument("brute-force permutation mean capped at m = 7");
  Vector sum = Vector::Zero(problem.dimension());
  const auto perms = enumerate_permutations(problem.count());
  for (const auto& sigma : perms) sum += v_of_sigma(problem, sigma);
  return sum / static_cast<double>(perms.size());
}

// Limit constant of the scaled suffix-average drift:
//   k^s * abar_{q,k} -> -a_q(s) = R (1 - (1-q)^{1-s}) / (q (1-s)).
// The 1/(1-s) factor comes from the integral bound on the stepsize sum;
// confirmed numerically against the exact partial sums.
inline double a_q_s(double R, double s, double q) {
  if (q <= 0.0 || q > 1.0) throw std::invalid_argument("q must be in (0,1]");
  if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("s must be in (0,1)");
  if (R <= 0.0) throw std::invalid_argument("R must be > 0");
  return -R * (1.0 - std::pow(1.0 - q, 1.0 - s)) / (q * (1.0 - s));
}

// Deterministic bias b_{q,k} = -abar_{q,k} H*^{-1} mu* (r_{q,k} with
// theta* in the smooth case). Linear solve, no explicit inverse.
inline Vector bias(const FiniteSumProblem& problem, const StepsizeSchedule& schedule,
                   double q, std::int64_t k) {
  const double abar = suffix_stepsize_average(schedule, q, k);
  const Vector mu = drift(problem);
  return -abar * Eigen::LDLT<Matrix>(problem.hessian_at_optimum()).solve(mu);
}

// Per-run bias estimate bhat_{q,K} from one cycle's inner iterates:
//   Hhat = sum_i hess f_{sigma(i)}(x_{i-1}),
//   muhat = sum_i hess f_{sigma(i)}(x_{i-1}) grad f_{sigma(i)}(x_{i-1}),
//   bhat = -abar * scale * Hhat^{-1} muhat.
inline Vector bias_estimate(const FiniteSumProblem& problem,
                            const std::vector<Vector>& inner_iterates,
                            const std::vector<int>& order, double alpha_bar_suffix) {
  if (inner_iterates.size() != order.size() + 1)
    throw std::invalid_argument("inner iterate list does not match order length");
  const int n = problem.dimension();
  Matrix h_hat = Matrix::Zero(n, n);
  Vector mu_hat = Vector::Zero(n);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Matrix h = problem.component_hessian(order[i], inner_iterates[i]);
    h_hat += h;
    mu_hat += h * problem.component_gradient(order[i], inner_iterates[i]);
  }
  Eigen::LDLT<Matrix> ldlt(h_hat);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("accumulated Hessian is singular");
  return -alpha_bar_suffix * kBiasEstimateScale * ldlt.solve(mu_hat);
}

// Y_{q,k}: suffix sum of the cycle gradient errors over the suffix sum of
// the stepsizes. Converges to the drift mu* (theta*).
inline Vector Y_qk(const std::vector<Vector>& cycle_errors, const std::vector<double>& alphas,
                   double q, std::int64_t k) {
  if (k < 1 || static_cast<std::size_t>(k) > cycle_errors.size() ||
      cycle_errors.size() != alphas.size())
    throw std::invalid_argument("dense cycle-error log does not cover k");
  const std::int64_t l = suffix_window_start(q, k);
  Vector e_sum = Vector::Zero(cycle_errors.front().size());
  KahanSum a_sum;
  for (std::int64_t j = l; j < k; ++j) {
    e_sum += cycle_errors[j];
    a_sum.add(alphas[j]);
  }
  return e_sum / a_sum.value();
}

// I_{q,k}: suffix average of the stepsize-normalized iterate moves
// (x_0^j - x_0^{j+1}) / alpha_j. Decays O(log k / k) for q=1, O(1/k) else.
inline Vector I_qk(const std::vector<Vector>& outer_iterates, const std::vector<double>& alphas,
                   double q, std::int64_t k) {
  if (k < 1 || static_cast<std::size_t>(k) + 1 > outer_iterates.size() ||
      static_cast<std::size_t>(k) > alphas.size())
    throw std::invalid_argument("dense iterate log does not cover k");
  const std::int64_t l = suffix_window_start(q, k);
  Vector sum = Vector::Zero(outer_iterates.front().size());
  for (std::int64_t j = l; j < k; ++j)
    sum += (outer_iterates[j] - outer_iterates[j + 1]) / alphas[j];
  return sum / static_cast<double>(k - l);
}

// Partial sum of squared stepsizes; converges to R^2 zeta(2s) for s > 1/2.
inline double zeta_stepsize_sum(const StepsizeSchedule& schedule, std::int64_t K) {
  if (schedule.s <= 0.5)
    throw std::invalid_argument("squared stepsizes diverge for s <= 1/2");
  KahanSum sum;
  for (std::int64_t j = 0; j < K; ++j) {
    const double a = schedule.alpha(j);
    sum.add(a * a);
  }
  return sum.value();
}

inline std::string sigma_key(const std::vector<int>& sigma) {
  // 1-based tuple form, e.g. "(1,2)" for the identity on m=2
  std::string key = "(";
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i > 0) key += ',';
    key += std::to_string(sigma[i] + 1);
  }
  return key + ")";
}

// Oracle report for small problems (m <= 5).
inline nlohmann::json report(const FiniteSumProblem& problem) {
  if (problem.count() > 5)
    throw std::invalid_argument("oracle report limited to m <= 5");
  nlohmann::json doc;
  const Vector mu = drift(problem);
  doc["mu_star"] = std::vector<double>(mu.begin(), mu.end());
  doc["M_gamma"] = M_gamma(problem).value;
  auto& per_sigma = doc["per_sigma"] = nlohmann::json::object();
  for (const auto& sigma : enumerate_permutations(problem.count()))
    per_sigma[sigma_key(sigma)] = M_sigma(problem, sigma);
  return doc;
}

}  // namespace rropt::oracle
