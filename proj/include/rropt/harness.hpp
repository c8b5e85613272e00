#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rropt/birr.hpp"
#include "rropt/engine.hpp"
#include "rropt/problem.hpp"

namespace rropt {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  int n_points = 0;
  bool window_shrunk = false;  // non-positive values were dropped

  nlohmann::json to_json() const {
    return {{"slope", slope},         {"intercept", intercept},
            {"r_squared", r_squared}, {"k_min", k_min},
            {"k_max", k_max},         {"n_points", n_points},
            {"window_shrunk", window_shrunk}};
  }
};

// Ordinary least squares of log(y) on log(k) over [k_min, k_max].
// Non-positive values are dropped (window shrunk, flagged); needs at
// least 5 surviving points spanning 1.5 decades.
inline RateFit fit_rate(const std::vector<double>& ks, const std::vector<double>& ys,
                        double k_min, double k_max, int min_points = 5,
                        double min_decades = 1.5) {
  if (ks.size() != ys.size()) throw std::invalid_argument("k/y size mismatch");
  std::vector<double> lx, ly;
  bool shrunk = false;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < k_min || ks[i] > k_max) continue;
    if (!(ys[i] > 0.0)) {
      shrunk = true;
      continue;
    }
    lx.push_back(std::log(ks[i]));
    ly.push_back(std::log(ys[i]));
  }
  const int n = static_cast<int>(lx.size());
  if (n < min_points) throw std::invalid_argument("rate fit needs >= 5 positive points");
  const auto [it_min, it_max] = std::minmax_element(lx.begin(), lx.end());
  if (*it_max - *it_min < min_decades * std::log(10.0))
    throw std::invalid_argument("rate-fit window spans less than 1.5 decades");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;

  RateFit fit;
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  fit.k_min = k_min;
  fit.k_max = k_max;
  fit.n_points = n;
  fit.window_shrunk = shrunk;
  return fit;
}

inline double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - lo;
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

inline double median(std::vector<double> values) { return percentile(std::move(values), 0.5); }

// Log-spaced integer grid over [k_min, k_max], deduplicated.
inline std::vector<std::int64_t> log_grid(std::int64_t k_min, std::int64_t k_max, int points) {
  std::vector<std::int64_t> grid;
  const double l0 = std::log(static_cast<double>(k_min));
  const double l1 = std::log(static_cast<double>(k_max));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const auto k = static_cast<std::int64_t>(std::llround(std::exp(l0 + t * (l1 - l0))));
    if (grid.empty() || k > grid.back()) grid.push_back(k);
  }
  return grid;
}

// Prefix sums of a densely logged run; yields the q-suffix average of the
// outer iterates at any cycle in O(1).
class SuffixAverager {
 public:
  explicit SuffixAverager(const std::vector<Vector>& outer_iterates) {
    prefix_.reserve(outer_iterates.size() + 1);
    Vector sum = Vector::Zero(outer_iterates.front().size());
    prefix_.push_back(sum);
    for (const auto& x : outer_iterates) {
      sum += x;
      prefix_.push_back(sum);
    }
  }

  Vector at(double q, std::int64_t k) const {
    const std::int64_t l = suffix_window_start(q, k);
    return (prefix_[k] - prefix_[l]) / static_cast<double>(k - l);
  }

 private:
  std::vector<Vector> prefix_;
};

// Fan a per-seed job out over std::async; jobs share no mutable state.
template <typename Result, typename Job>
std::vector<Result> run_over_seeds(const std::vector<std::uint64_t>& seeds, Job job) {
  std::vector<std::future<Result>> futures;
  futures.reserve(seeds.size());
  for (auto seed : seeds)
    futures.push_back(std::async(std::launch::async, job, seed));
  std::vector<Result> results;
  results.reserve(seeds.size());
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

inline std::vector<std::uint64_t> seed_range(int count, std::uint64_t first = 1) {
  std::vector<std::uint64_t> seeds(count);
  for (int i = 0; i < count; ++i) seeds[i] = first + i;
  return seeds;
}

struct MethodCurve {
  Method method = Method::RR;
  std::vector<double> k_grid;
  std::vector<double> median_gap, p10_gap, p90_gap;
  RateFit fit;
  int n_diverged = 0;
  double final_median_gap = 0.0;

  nlohmann::json to_json() const {
    return {{"method", method_name(method)}, {"k", k_grid},
            {"median", median_gap},          {"p10", p10_gap},
            {"p90", p90_gap},                {"fit", fit.to_json()},
            {"n_diverged", n_diverged},      {"final_median_gap", final_median_gap}};
  }
};

// Multi-seed method comparison on one problem. For each method the f-gap
// of the q-suffix averaged iterates is summarized across seeds by median
// (the error distribution is asymmetric, so medians are the robust
// choice) and fitted on a log-log grid. IG is deterministic and is run
// once. Diverged runs are excluded from the medians and counted.
inline std::vector<MethodCurve> compare_methods(const FiniteSumProblem& problem,
                                                const RunConfig& base,
                                                const std::vector<Method>& methods,
                                                const std::vector<std::uint64_t>& seeds,
                                                double fit_k_min = 1e3) {
  const double f_star = problem.optimal_value();
  const auto grid = log_grid(std::max<std::int64_t>(10, base.cycles / 10000), base.cycles, 40);

  std::vector<MethodCurve> curves;
  for (Method method : methods) {
    RunConfig config = base;
    config.method = method == Method::BIRR ? Method::RR : method;
    config.dense_log = true;
    config.log_stride = std::max<std::int64_t>(1, base.cycles / 100);

    const auto used_seeds =
        method == Method::IG ? std::vector<std::uint64_t>{seeds.front()} : seeds;

    struct SeedCurve {
      bool diverged = false;
      std::vector<double> gaps;
      double birr_final_gap = 0.0;
    };
    auto job = [&](std::uint64_t seed) -> SeedCurve {
      SeedCurve out;
      RunConfig c = config;
      c.seed = seed;
      try {
        Trajectory traj = run(problem, c);
        SuffixAverager avg(traj.outer_iterates);
        for (auto k : grid)
          out.gaps.push_back(problem.value(avg.at(c.q, k)) - f_star);
        if (method == Method::BIRR) {
          const Vector bhat = oracle::bias_estimate(problem, traj.last_cycle_inner,
                                                    traj.last_cycle_order,
                                                    traj.alpha_bar_suffix);
          out.birr_final_gap = problem.value(traj.xbar_suffix - bhat) - f_star;
        }
      } catch (const RunDivergence&) {
        out.diverged = true;
      }
      return out;
    };
    const auto results = run_over_seeds<SeedCurve>(used_seeds, job);

    MethodCurve curve;
    curve.method = method;
    for (auto k : grid) curve.k_grid.push_back(static_cast<double>(k));
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      std::vector<double> column;
      for (const auto& res : results)
        if (!res.diverged) column.push_back(res.gaps[gi]);
      if (column.empty()) throw std::runtime_error("all seeds diverged");
      curve.median_gap.push_back(median(column));
      curve.p10_gap.push_back(percentile(column, 0.10));
      curve.p90_gap.push_back(percentile(column, 0.90));
    }
    for (const auto& res : results) curve.n_diverged += res.diverged ? 1 : 0;
    // BIRR's deliverable is the bias-removed output at the final cycle;
    // its curve above is the underlying RR suffix average.
    if (method == Method::BIRR) {
      std::vector<double> finals;
      for (const auto& res : results)
        if (!res.diverged) finals.push_back(res.birr_final_gap);
      curve.final_median_gap = median(finals);
    } else {
      curve.final_median_gap = curve.median_gap.back();
    }
    curve.fit = fit_rate(curve.k_grid, curve.median_gap, fit_k_min,
                         static_cast<double>(base.cycles));
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace rropt
