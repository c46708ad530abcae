#pragma once

// Exact cost semantics: subdistributions over (cost, value) outcomes.

#include "cert/interpreter.hpp"

namespace cert {

struct CostMonad {
  using R = CostDist;

  static R unit(const RunValue& v) { return R::point(Outcome{0, v}); }
  static R bottom() { return R{}; }
  static R charge(std::uint64_t c) { return R::point(Outcome{c, mk::unit()}); }
  static R uniform_nat(std::uint64_t n);
  static R mix(const Rational& p, const R& left, const R& right);

  template <typename K>
  static R bind(const R& m, K&& k) {
    R out;
    std::vector<std::pair<RunValue, R>> seen;
    for (const auto& [o, w] : m.entries()) {
      std::size_t i = 0;
      while (i < seen.size() && !RunValueEq{}(seen[i].first, o.value)) ++i;
      if (i == seen.size()) seen.emplace_back(o.value, k(o.value));
      for (const auto& [o2, w2] : seen[i].second.entries()) {
        out.add(Outcome{checked_add(o.cost, o2.cost), o2.value}, w * w2);
      }
    }
    return out;
  }
};

using CostSemResult = Denotation<CostDist>;

/// The depth-th approximant of a closed, well-typed, discrete program.
CostSemResult eval_cost(const CompPtr& t, std::uint64_t depth);

/// Same, for a program of arrow type applied to `args` (application order),
/// or of returner type when `args` is empty.
CostDist eval_cost_dist(const CompPtr& t, std::uint64_t depth, const std::vector<RunValue>& args = {});

/// Σ cost · weight.
Rational expected_of_marginal(const CostDist& d);
Rational mass(const CostDist& d);

}  // namespace cert
