#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "rropt/engine.hpp"
#include "rropt/oracles.hpp"

namespace rropt {

struct BirrResult {
  Vector output;        // suffix average minus estimated bias
  Vector suffix_avg;    // plain RR q-suffix average (comparison value)
  Vector bias_hat;      // bhat_{q,K}
  double alpha_bar_suffix = 0.0;
  Trajectory trajectory;
};

// Bias-removed random reshuffling: one RR run with streaming averages and
// a prefix snapshot at floor((1-q)K); the bias is estimated once from the
// last cycle's inner iterates and subtracted from the suffix average.
inline BirrResult birr_run(const FiniteSumProblem& problem, const RunConfig& config) {
  if (config.method != Method::BIRR)
    throw std::invalid_argument("birr_run requires method = BIRR");
  if (config.cycles < 2) throw std::invalid_argument("BIRR needs K >= 2");

  Trajectory traj = run(problem, config);

  BirrResult result;
  result.suffix_avg = traj.xbar_suffix;
  result.alpha_bar_suffix = traj.alpha_bar_suffix;
  result.bias_hat = oracle::bias_estimate(problem, traj.last_cycle_inner,
                                          traj.last_cycle_order, traj.alpha_bar_suffix);
  result.output = result.suffix_avg - result.bias_hat;

  traj.bhat_norm = result.bias_hat.norm();
  traj.output_dist = (result.output - problem.optimum()).norm();
  result.trajectory = std::move(traj);
  return result;
}

}  // namespace rropt
