#pragma once

// Directed rewriting for the equational theory, plus semantic-preservation
// checks against both discrete semantics.

#include "cert/expected_cost.hpp"
#include "cert/typecheck.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cert {

enum class Rule {
  Beta,
  EtaArrow,
  LetBeta,
  ThunkForce,
  ForceThunkValue,
  SeqReturn,
  SeqEta,
  IfZ,
  IfS,
  IfSame,
  CaseNil,
  CaseCons,
  UnpairBeta,
  ChargeZero,
  ChargeMerge,
  ChargeSwap,
  ChooseUnit,
  ChooseSym,
  ChooseIdem,
  ChooseAssoc,
  FixUnfold,
};

const std::vector<Rule>& all_rules();
/// Every rule except FixUnfold, EtaArrow, ForceThunkValue and ChooseSym.
const std::vector<Rule>& default_rules();
std::string_view rule_name(Rule r);
std::optional<Rule> parse_rule(std::string_view name);

/// Child indices as returned by `children`, from the root.
using Path = std::vector<std::size_t>;

std::string path_to_string(const Path& p);

enum class RewriteErrorKind { NoMatch, TypeRegression, BadPath };

class RewriteError : public CertError {
 public:
  RewriteErrorKind kind() const { return kind_; }
  RewriteError(RewriteErrorKind kind, const std::string& message);

 private:
  RewriteErrorKind kind_;
};

/// Rewrites the subterm at `path` by `rule`, then re-typechecks the whole term
/// in `ctx` and demands the original type.
CompPtr apply_rule(const CompPtr& t, Rule rule, const Path& path = {}, const Context& ctx = {});

/// Contracts a single redex with no type check; nullopt when `rule` does not
/// match at the root of `s`.
std::optional<Subterm> contract(Rule rule, const Subterm& s);

Subterm subterm_at(const CompPtr& t, const Path& path);
CompPtr replace_at(const CompPtr& t, const Path& path, const Subterm& s);

struct RewriteStep {
  Rule rule;
  Path path;
  Subterm before;
  Subterm after;
};

struct NormalizeResult {
  CompPtr term;
  std::vector<RewriteStep> steps;
  /// True when fuel ran out with a redex still present.
  bool fuel_exhausted = false;
};

/// Leftmost-outermost: each step rewrites the first position, in pre-order,
/// at which some rule matches; rules are tried in the order given.
NormalizeResult normalize(const CompPtr& t, const std::vector<Rule>& rules, std::uint64_t fuel,
                          const Context& ctx = {});

/// Applies the logged steps to `t`; throws RewriteError when a step does not
/// reproduce its recorded before/after pair.
CompPtr replay(const CompPtr& t, const std::vector<RewriteStep>& steps, const Context& ctx = {});

struct PreservationOptions {
  /// Compare analyze limits instead of demanding exact equality.
  bool fix_unfold = false;
  double tol = 1e-6;
  std::uint64_t max_depth = 1u << 16;
  std::vector<RunValue> args;
};

struct PreservationReport {
  bool equal = false;
  bool cost_equal = false;
  bool ec_equal = false;
  Rational ec_left, ec_right;
  Rational mass_left, mass_right;
  std::string detail;
};

/// Exact comparison of eval_cost and eval_ec at `depth`. With `fix_unfold`,
/// where one term is a one-step unfolding of the other, ec and mass of the
/// analyze limits must agree within tol, and the unfolded term's cost
/// distribution at `depth` must lie between the other's at `depth` and
/// `depth + 1`.
PreservationReport check_preservation(const CompPtr& t, const CompPtr& u, std::uint64_t depth,
                                      const PreservationOptions& opts = {});

}  // namespace cert
