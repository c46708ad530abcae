#pragma once

// Expected-cost semantics: an exact expected cost paired with the output
// subdistribution. Also the continuation-style pre-expectation evaluator and
// the checks relating the two.

#include "cert/interpreter.hpp"

#include <functional>
#include <string>

namespace cert {

struct ECOutcome {
  Rational ec = 0;
  ValueDist dist;

  bool operator==(const ECOutcome& o) const { return ec == o.ec && dist == o.dist; }
  bool operator!=(const ECOutcome& o) const { return !(*this == o); }
};

struct ECMonad {
  using R = ECOutcome;

  static R unit(const RunValue& v) { return R{0, ValueDist::point(v)}; }
  static R bottom() { return R{}; }
  static R charge(std::uint64_t c);
  static R uniform_nat(std::uint64_t n);
  static R mix(const Rational& p, const R& left, const R& right);
  /// Rounds ec and every weight down to multiples of 2^-bits.
  static R round_down(const R& r, std::size_t bits);

  template <typename K>
  static R bind(const R& m, K&& k) {
    R out{m.ec, {}};
    for (const auto& [a, w] : m.dist.entries()) {
      R next = k(a);
      out.ec += w * next.ec;
      out.dist.add_scaled(next.dist, w);
    }
    return out;
  }
};

using ECResult = Denotation<ECOutcome>;

ECResult eval_ec(const CompPtr& t, std::uint64_t depth);
ECOutcome eval_ec_outcome(const CompPtr& t, std::uint64_t depth, const std::vector<RunValue>& args = {});

struct AnalysisStep {
  std::uint64_t depth = 0;
  Rational ec;
  Rational mass;
};

struct AnalysisReport {
  Rational ec;
  Rational mass;
  std::uint64_t depth = 0;
  bool converged = false;
  std::vector<AnalysisStep> history;
};

/// Doubles the depth from 1 until ec and mass both move by less than `tol`,
/// or the next depth would exceed `max_depth`. An approximant of mass 0 never
/// counts as converged.
///
/// With `precision_bits` > 0 each fix result is rounded down to the grid
/// 2^-precision_bits, so the reported ec and mass remain lower bounds of the
/// exact approximants while numerator and denominator sizes stay bounded.
/// 0 keeps every approximant exact.
inline constexpr std::size_t kDefaultPrecisionBits = 128;

AnalysisReport analyze(const CompPtr& t, double tol, std::uint64_t max_depth,
                       const std::vector<RunValue>& args = {},
                       std::size_t memo_entries = kDefaultMemoEntries,
                       std::size_t precision_bits = kDefaultPrecisionBits);

using Reward = std::function<Rational(const RunValue&)>;

Rational eval_pre(const CompPtr& t, const Reward& reward, std::uint64_t depth,
                  const std::vector<RunValue>& args = {});

struct FactorizationReport {
  bool equal = false;
  Rational pre;
  Rational factored;
  Rational discrepancy;
};

/// Compares eval_pre with ec + Σ reward · dist at the same depth.
FactorizationReport check_factorization(const CompPtr& t, const Reward& reward, std::uint64_t depth,
                                        const std::vector<RunValue>& args = {});

struct LawResult {
  std::string name;
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  bool expect_equal = true;
};

struct MonadLawReport {
  std::vector<LawResult> laws;
  /// Both sides of the subprobability counterexample.
  ECOutcome counterexample_lhs;
  ECOutcome counterexample_rhs;
  bool ok() const;
};

/// Monad laws, linearity of expectation and the monad-morphism behaviour of
/// E : P(ℕ × −) → [0,∞] × P, on `instances` generated finite cases each.
MonadLawReport monad_law_suite(std::uint64_t seed = 1, std::uint64_t instances = 200);

/// E(μ) = (expected cost of the marginal, value marginal).
ECOutcome expectation_morphism(const CostDist& d);

}  // namespace cert
