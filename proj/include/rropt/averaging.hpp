#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "rropt/schedule.hpp"

namespace rropt {

// Kahan-compensated scalar accumulator; keeps streaming means within
// 1e-12 relative of direct summation out to 1e6 updates.
class KahanSum {
 public:
  void add(double value) {
    const double y = value - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Streaming simple average of a scalar sequence.
class StreamingAverage {
 public:
  void update(double value) {
    sum_.add(value);
    ++count_;
  }
  std::int64_t count() const { return count_; }
  double mean() const { return count_ == 0 ? 0.0 : sum_.value() / count_; }

 private:
  KahanSum sum_;
  std::int64_t count_ = 0;
};

// Streaming simple average of a vector sequence.
class StreamingVectorAverage {
 public:
  explicit StreamingVectorAverage(int n)
      : sum_(Eigen::VectorXd::Zero(n)), compensation_(Eigen::VectorXd::Zero(n)) {}

  void update(const Eigen::VectorXd& value) {
    const Eigen::VectorXd y = value - compensation_;
    const Eigen::VectorXd t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
    ++count_;
  }
  std::int64_t count() const { return count_; }
  Eigen::VectorXd mean() const {
    if (count_ == 0) return Eigen::VectorXd::Zero(sum_.size());
    return sum_ / static_cast<double>(count_);
  }

 private:
  Eigen::VectorXd sum_;
  Eigen::VectorXd compensation_;
  std::int64_t count_ = 0;
};

// Suffix window convention: at cycle k with parameter q in (0,1], the
// window is j in [floor((1-q)k), k-1] and the divisor is the window
// length k - floor((1-q)k) (non-empty for every k >= 1).
inline std::int64_t suffix_window_start(double q, std::int64_t k) {
  if (q <= 0.0 || q > 1.0) throw std::invalid_argument("q must be in (0,1]");
  return static_cast<std::int64_t>(std::floor((1.0 - q) * static_cast<double>(k)));
}

// Exact reconstruction of the suffix mean from two simple-average
// snapshots: mean over [l, k-1] = (k*full - l*prefix) / (k - l).
// Verified against direct summation by a property test.
template <typename Value>
Value suffix_from_snapshots(const Value& mean_full, std::int64_t k,
                            const Value& mean_prefix, std::int64_t l) {
  if (l < 0 || l >= k) throw std::invalid_argument("need 0 <= l < k");
  return (static_cast<double>(k) * mean_full - static_cast<double>(l) * mean_prefix) /
         static_cast<double>(k - l);
}

// Exact q-suffix average of the stepsizes at cycle k.
inline double suffix_stepsize_average(const StepsizeSchedule& schedule, double q,
                                      std::int64_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::int64_t l = suffix_window_start(q, k);
  KahanSum sum;
  for (std::int64_t j = l; j < k; ++j) sum.add(schedule.alpha(j));
  return sum.value() / static_cast<double>(k - l);
}

}  // namespace rropt
