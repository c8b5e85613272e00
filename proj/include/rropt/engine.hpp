#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rropt/averaging.hpp"
#include "rropt/problem.hpp"
#include "rropt/sampling.hpp"
#include "rropt/schedule.hpp"

namespace rropt {

enum class Method { IG, SGD, RR, BIRR };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::IG: return "ig";
    case Method::SGD: return "sgd";
    case Method::RR: return "rr";
    case Method::BIRR: return "birr";
  }
  return "?";
}

inline Method method_from_name(const std::string& name) {
  if (name == "ig") return Method::IG;
  if (name == "sgd") return Method::SGD;
  if (name == "rr") return Method::RR;
  if (name == "birr") return Method::BIRR;
  throw std::invalid_argument("unknown method: " + name);
}

struct RunConfig {
  Method method = Method::RR;
  StepsizeSchedule schedule;
  double q = 1.0;           // suffix averaging parameter in (0,1]
  std::int64_t cycles = 0;  // K
  std::uint64_t seed = 0;
  Vector x0;
  std::int64_t log_stride = 1;
  bool dense_log = false;                       // keep all outer iterates and E_k
  std::optional<std::vector<int>> fixed_order;  // IG only; identity if absent

  void validate() const {
    if (cycles < 0) throw std::invalid_argument("cycle count must be >= 0");
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("q must be in (0,1]");
    if (log_stride < 1) throw std::invalid_argument("log_stride must be >= 1");
    // The averaging rate claims need square-summable steps.
    if ((method == Method::RR || method == Method::BIRR) && schedule.s <= 0.5)
      throw std::invalid_argument("RR/BIRR averaging requires s in (1/2,1)");
  }
};

struct RunDivergence : std::runtime_error {
  std::int64_t cycle;
  explicit RunDivergence(std::int64_t k)
      : std::runtime_error("run diverged at cycle " + std::to_string(k)), cycle(k) {}
};

struct Trajectory {
  // Logged every log_stride cycles plus the final cycle.
  std::vector<std::int64_t> cycles;
  std::vector<double> dist;       // ||x_0^k - x*||
  std::vector<double> f_gap;      // f(x_0^k) - f(x*)
  std::vector<double> xbar_dist;  // ||xbar_{1,k} - x*|| (0 until k >= 1)
  std::vector<double> alpha_bar;  // simple average of stepsizes

  // Final-state summary at k = K.
  Vector x_final;
  Vector xbar_full;       // simple average over all K outer iterates
  double alpha_bar_full = 0.0;
  Vector xbar_suffix;     // q-suffix average, reconstructed from snapshots
  double alpha_bar_suffix = 0.0;
  std::int64_t snapshot_cycle = 0;  // floor((1-q)K)

  // Last cycle, kept for the bias estimator.
  std::vector<Vector> last_cycle_inner;  // length m+1, starts at x_0^{K-1}
  std::vector<int> last_cycle_order;
  double last_cycle_alpha = 0.0;

  // Dense logs (dense_log mode only).
  std::vector<Vector> outer_iterates;  // x_0^0 .. x_0^K
  std::vector<Vector> cycle_errors;    // E_0 .. E_{K-1}
  std::vector<double> alphas;          // alpha_0 .. alpha_{K-1}

  // Optional BIRR diagnostics, filled by the BIRR driver.
  std::optional<double> bhat_norm;
  std::optional<double> output_dist;

  void write_csv(std::ostream& out) const {
    const bool birr_cols = bhat_norm.has_value();
    out << "k,dist,f_gap,xbar_dist,alpha_bar";
    if (birr_cols) out << ",bhat_norm,output_dist";
    out << '\n';
    char buf[32];
    auto fmt = [&buf](double v) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      out << cycles[i] << ',' << fmt(dist[i]) << ',' << fmt(f_gap[i]) << ','
          << fmt(xbar_dist[i]) << ',' << fmt(alpha_bar[i]);
      if (birr_cols) {
        // Diagnostics exist only for the completed run; repeat on each row.
        out << ',' << fmt(*bhat_norm) << ',' << fmt(*output_dist);
      }
      out << '\n';
    }
  }
};

// One cycle of inner updates x_i = x_{i-1} - alpha * grad f_{order[i]}(x_{i-1}).
// Returns x_m; fills inner_iterates (length m+1, starting at x_in) if given.
inline Vector run_cycle(const FiniteSumProblem& problem, const Vector& x_in,
                        const std::vector<int>& order, double alpha,
                        std::vector<Vector>* inner_iterates = nullptr) {
  if (alpha < 0.0) throw std::invalid_argument("stepsize must be >= 0");
  if (inner_iterates) {
    inner_iterates->clear();
    inner_iterates->reserve(order.size() + 1);
    inner_iterates->push_back(x_in);
  }
  Vector x = x_in;
  for (int idx : order) {
    x -= alpha * problem.component_gradient(idx, x);
    if (!x.allFinite())
      throw std::runtime_error("non-finite inner iterate (overflow)");
    if (inner_iterates) inner_iterates->push_back(x);
  }
  return x;
}

// Cycle gradient error: E_k = sum_i (grad f_{sigma(i)}(x_{i-1}) - grad f_{sigma(i)}(x_0)).
inline Vector cycle_gradient_error(const FiniteSumProblem& problem,
                                   const Vector& x_cycle_start,
                                   const std::vector<Vector>& inner_iterates,
                                   const std::vector<int>& order) {
  if (inner_iterates.size() != order.size() + 1)
    throw std::invalid_argument("inner iterate list does not match order length");
  Vector e = Vector::Zero(problem.dimension());
  for (std::size_t i = 0; i < order.size(); ++i)
    e += problem.component_gradient(order[i], inner_iterates[i]) -
         problem.component_gradient(order[i], x_cycle_start);
  return e;
}

inline OrderSpec order_spec_for(const RunConfig& config, int m) {
  switch (config.method) {
    case Method::IG: {
      if (config.fixed_order) return OrderSpec::fixed(*config.fixed_order);
      std::vector<int> identity(m);
      std::iota(identity.begin(), identity.end(), 0);
      return OrderSpec::fixed(std::move(identity));
    }
    case Method::SGD:
      return OrderSpec::with_replacement(m, config.seed);
    case Method::RR:
    case Method::BIRR:
      return OrderSpec::reshuffle(m, config.seed);
  }
  throw std::logic_error("unreachable");
}

inline Trajectory run(const FiniteSumProblem& problem, const RunConfig& config) {
  config.validate();
  const int n = problem.dimension();
  const int m = problem.count();
  const Vector x0 = config.x0.size() == n ? config.x0 : Vector::Zero(n);
  const Vector& x_star = problem.optimum();
  const double f_star = problem.optimal_value();
  const OrderSpec spec = order_spec_for(config, m);
  const std::int64_t K = config.cycles;

  Trajectory traj;
  StreamingVectorAverage xbar(n);
  StreamingAverage abar;
  const std::int64_t snapshot_at = suffix_window_start(config.q, std::max<std::int64_t>(K, 1));
  Vector xbar_snapshot = Vector::Zero(n);
  double abar_snapshot = 0.0;

  const double dist0 = (x0 - x_star).norm();
  const double divergence_cap = 1e12 * std::max(1.0, dist0);

  Vector x = x0;
  std::vector<Vector> inner;
  auto log_point = [&](std::int64_t k) {
    traj.cycles.push_back(k);
    traj.dist.push_back((x - x_star).norm());
    traj.f_gap.push_back(problem.value(x) - f_star);
    traj.xbar_dist.push_back(xbar.count() == 0 ? 0.0 : (xbar.mean() - x_star).norm());
    traj.alpha_bar.push_back(abar.mean());
  };

  for (std::int64_t k = 0; k < K; ++k) {
    if (xbar.count() == snapshot_at) {
      xbar_snapshot = xbar.mean();
      abar_snapshot = abar.mean();
    }
    if (k % config.log_stride == 0) log_point(k);
    if (config.dense_log) traj.outer_iterates.push_back(x);

    xbar.update(x);
    const double alpha = config.schedule.alpha(k);
    abar.update(alpha);

    const std::vector<int> order = next_cycle_order(spec, k);
    const bool want_inner = config.dense_log || k == K - 1;
    const Vector x_next = run_cycle(problem, x, order, alpha, want_inner ? &inner : nullptr);

    if (config.dense_log) {
      traj.cycle_errors.push_back(cycle_gradient_error(problem, x, inner, order));
      traj.alphas.push_back(alpha);
    }
    if (k == K - 1) {
      traj.last_cycle_inner = inner;
      traj.last_cycle_order = order;
      traj.last_cycle_alpha = alpha;
    }
    x = x_next;
    if ((x - x_star).norm() > divergence_cap) throw RunDivergence(k);
  }
  if (config.dense_log) traj.outer_iterates.push_back(x);
  log_point(K);

  traj.x_final = x;
  traj.xbar_full = xbar.mean();
  traj.alpha_bar_full = abar.mean();
  traj.snapshot_cycle = snapshot_at;
  if (K >= 1) {
    if (snapshot_at == 0) {
      traj.xbar_suffix = traj.xbar_full;
      traj.alpha_bar_suffix = traj.alpha_bar_full;
    } else {
      traj.xbar_suffix = suffix_from_snapshots(traj.xbar_full, K, xbar_snapshot, snapshot_at);
      traj.alpha_bar_suffix =
          suffix_from_snapshots(traj.alpha_bar_full, K, abar_snapshot, snapshot_at);
    }
  } else {
    traj.xbar_suffix = x0;
    traj.alpha_bar_suffix = 0.0;
  }
  return traj;
}

}  // namespace rropt
