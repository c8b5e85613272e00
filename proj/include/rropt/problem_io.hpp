#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rropt/problem.hpp"

namespace rropt {

// JSON document schema:
//   {"type":"quadratic"|"smooth", "n":..., "m":..., "seed":...,
//    "components":[{"P":[[...]],"q":[...],"r":...,"eps":...,"a":[...]}]}
// Round-trips are value-exact (nlohmann emits shortest round-trip decimals).

inline nlohmann::json problem_to_json(const FiniteSumProblem& problem) {
  nlohmann::json doc;
  doc["type"] = problem.is_quadratic() ? "quadratic" : "smooth";
  doc["n"] = problem.dimension();
  doc["m"] = problem.count();
  doc["seed"] = problem.seed();
  auto& comps = doc["components"] = nlohmann::json::array();
  for (const auto& comp : problem.components()) {
    nlohmann::json jc;
    auto& p = jc["P"] = nlohmann::json::array();
    for (int row = 0; row < comp.P.rows(); ++row) {
      nlohmann::json jrow = nlohmann::json::array();
      for (int col = 0; col < comp.P.cols(); ++col) jrow.push_back(comp.P(row, col));
      p.push_back(std::move(jrow));
    }
    jc["q"] = std::vector<double>(comp.q.begin(), comp.q.end());
    jc["r"] = comp.r;
    if (comp.eps != 0.0) {
      jc["eps"] = comp.eps;
      jc["a"] = std::vector<double>(comp.a.begin(), comp.a.end());
    }
    comps.push_back(std::move(jc));
  }
  return doc;
}

inline FiniteSumProblem problem_from_json(const nlohmann::json& doc) {
  const int n = doc.at("n").get<int>();
  const int m = doc.at("m").get<int>();
  std::vector<Component> comps;
  comps.reserve(m);
  for (const auto& jc : doc.at("components")) {
    Component comp;
    comp.P = Matrix(n, n);
    const auto& p = jc.at("P");
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < n; ++col)
        comp.P(row, col) = p.at(row).at(col).get<double>();
    comp.q = Vector(n);
    const auto& q = jc.at("q");
    for (int row = 0; row < n; ++row) comp.q(row) = q.at(row).get<double>();
    comp.r = jc.value("r", 0.0);
    if (jc.contains("eps")) {
      comp.eps = jc.at("eps").get<double>();
      comp.a = Vector(n);
      const auto& a = jc.at("a");
      for (int row = 0; row < n; ++row) comp.a(row) = a.at(row).get<double>();
    }
    comps.push_back(std::move(comp));
  }
  if (static_cast<int>(comps.size()) != m)
    throw std::invalid_argument("component count does not match m");
  return FiniteSumProblem(std::move(comps), doc.value("seed", std::uint64_t{0}));
}

}  // namespace rropt
