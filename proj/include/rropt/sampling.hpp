#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rropt/rng.hpp"

namespace rropt {

enum class OrderMode { Fixed, Reshuffle, WithReplacement };

// Index-order source for one run: fixed permutation (IG), fresh uniform
// permutation per cycle (RR), or i.i.d. uniform draws (SGD).
struct OrderSpec {
  OrderMode mode = OrderMode::Reshuffle;
  int m = 0;
  std::uint64_t seed = 0;
  std::vector<int> sigma;  // Fixed mode only; 0-based bijection on {0..m-1}

  static OrderSpec fixed(std::vector<int> sigma_in) {
    OrderSpec spec;
    spec.mode = OrderMode::Fixed;
    spec.m = static_cast<int>(sigma_in.size());
    spec.sigma = std::move(sigma_in);
    if (!is_permutation_of_range(spec.sigma))
      throw std::invalid_argument("fixed order is not a permutation");
    return spec;
  }
  static OrderSpec reshuffle(int m, std::uint64_t seed) {
    return OrderSpec{OrderMode::Reshuffle, m, seed, {}};
  }
  static OrderSpec with_replacement(int m, std::uint64_t seed) {
    return OrderSpec{OrderMode::WithReplacement, m, seed, {}};
  }

  static bool is_permutation_of_range(const std::vector<int>& sigma) {
    std::vector<bool> seen(sigma.size(), false);
    for (int v : sigma) {
      if (v < 0 || v >= static_cast<int>(sigma.size()) || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }
};

// The order processed at cycle k. Stateless in k: regenerating any cycle
// does not require replaying previous ones.
inline std::vector<int> next_cycle_order(const OrderSpec& spec, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("cycle index must be >= 0");
  switch (spec.mode) {
    case OrderMode::Fixed:
      return spec.sigma;
    case OrderMode::Reshuffle: {
      // Inside-out Fisher-Yates: unbiased uniform permutation.
      KeyedStream stream(spec.seed, static_cast<std::uint64_t>(k));
      std::vector<int> order(spec.m);
      for (int i = 0; i < spec.m; ++i) {
        const auto j = static_cast<int>(stream.next_below(i + 1));
        order[i] = order[j];
        order[j] = i;
      }
      return order;
    }
    case OrderMode::WithReplacement: {
      KeyedStream stream(spec.seed, static_cast<std::uint64_t>(k));
      std::vector<int> order(spec.m);
      for (int i = 0; i < spec.m; ++i)
        order[i] = static_cast<int>(stream.next_below(spec.m));
      return order;
    }
  }
  throw std::logic_error("unreachable");
}

// All m! permutations of {0..m-1} in lexicographic order. Guarded at
// m <= 8 (40320 permutations) to keep exact oracles cheap.
inline std::vector<std::vector<int>> enumerate_permutations(int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (m > 8) throw std::invalid_argument("permutation enumeration capped at m = 8");
  std::vector<int> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return all;
}

}  // namespace rropt
