#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rropt {

// Diminishing stepsize alpha_k = R / (k+1)^s. Strictly decreasing and
// non-summable for s in (0,1); square-summable when s > 1/2.
struct StepsizeSchedule {
  double R = 1.0;
  double s = 0.75;

  StepsizeSchedule() = default;
  StepsizeSchedule(double R_in, double s_in) : R(R_in), s(s_in) {
    if (R <= 0.0) throw std::invalid_argument("stepsize scale R must be > 0");
    if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("stepsize exponent s must be in (0,1)");
  }

  double alpha(std::int64_t k) const {
    return R * std::pow(static_cast<double>(k + 1), -s);
  }
};

}  // namespace rropt
