#pragma once

// Cross-semantics harness: exact comparison of the two discrete semantics,
// sampling against both, and the closed-form oracles.

#include "cert/corpus.hpp"
#include "cert/expected_cost.hpp"
#include "cert/sampler.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cert {

struct CrossCheckOptions {
  std::uint64_t depth = 12;
  std::uint64_t samples = 100000;
  std::uint64_t fuel = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::uint64_t max_depth = 1u << 10;
};

struct EventViolation {
  Outcome event;
  Rational exact;
  double observed = 0;
};

struct CrossCheckReport {
  std::string name;
  bool discrete = true;
  std::uint64_t depth = 0;

  Rational ec_component;
  Rational cost_dist_expectation;
  Rational mass_cost;
  Rational mass_ec;
  bool inequality_holds = true;
  /// Present for fix-free programs only.
  std::optional<bool> recursion_free_equality_holds;

  Rational analyze_limit;
  bool analyze_converged = false;

  CostEstimate sample;
  double ci_low = 0, ci_high = 0;
  /// The 99% interval meets [cost_dist_expectation, limit] (limit = ∞ when
  /// analyze did not converge).
  bool ci_consistent = true;
  /// No sampled (cost, value) frequency exceeds its exact probability plus
  /// the mass deficit by more than 4σ.
  bool adequacy_consistent = true;
  std::vector<EventViolation> violations;

  bool ok() const;
};

CrossCheckReport crosscheck(const CorpusEntry& entry, const CrossCheckOptions& opts = {});

/// T(0) = T(1) = 0, T(n) = n − 1 + (2/n) Σ_{i<n} T(i).
std::vector<Rational> quicksort_recurrence(unsigned up_to);
/// 2(2^n − 1).
Rational coin_toss_closed_form(unsigned n);
/// The instrumented geometric program stopping with probability p.
CompPtr geometric_program(const Rational& p);

struct OracleCase {
  std::string family;
  std::string argument;
  double expected = 0;
  Rational got;
  bool converged = false;
  double tolerance = 0;
  double seconds = 0;
  bool ok = false;
};

struct OracleSuiteOptions {
  double tol = 1e-6;
  std::uint64_t max_depth = 1u << 20;
  unsigned coin_toss_max = 6;
  unsigned quicksort_max = 10;
  unsigned bound_max = 64;
  /// 0 skips the random walk.
  std::uint64_t random_walk_max_depth = 1u << 12;
  double random_walk_threshold = 100;
};

struct OracleSuiteReport {
  std::vector<OracleCase> cases;
  /// T(n) ≤ 2 n ln n on 2 ≤ n ≤ bound_max, from the recurrence.
  bool quicksort_bound_holds = true;
  unsigned quicksort_bound_first_failure = 0;
  bool ok() const;
};

/// Needs the entries named geometric_cost, coin_tosses, qck_nat and (when
/// enabled) random_walk.
OracleSuiteReport oracle_suite(const std::vector<CorpusEntry>& corpus, const OracleSuiteOptions& opts = {});

}  // namespace cert
