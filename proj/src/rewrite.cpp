#include "cert/rewrite.hpp"

#include "cert/cost_dist.hpp"
#include "cert/parse.hpp"

#include <array>

namespace cert {

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 21> kNames{{
    {Rule::Beta, "Beta"},
    {Rule::EtaArrow, "EtaArrow"},
    {Rule::LetBeta, "LetBeta"},
    {Rule::ThunkForce, "ThunkForce"},
    {Rule::ForceThunkValue, "ForceThunkValue"},
    {Rule::SeqReturn, "SeqReturn"},
    {Rule::SeqEta, "SeqEta"},
    {Rule::IfZ, "IfZ"},
    {Rule::IfS, "IfS"},
    {Rule::IfSame, "IfSame"},
    {Rule::CaseNil, "CaseNil"},
    {Rule::CaseCons, "CaseCons"},
    {Rule::UnpairBeta, "UnpairBeta"},
    {Rule::ChargeZero, "ChargeZero"},
    {Rule::ChargeMerge, "ChargeMerge"},
    {Rule::ChargeSwap, "ChargeSwap"},
    {Rule::ChooseUnit, "ChooseUnit"},
    {Rule::ChooseSym, "ChooseSym"},
    {Rule::ChooseIdem, "ChooseIdem"},
    {Rule::ChooseAssoc, "ChooseAssoc"},
    {Rule::FixUnfold, "FixUnfold"},
}};

const CompPtr* comp_of(const Subterm& s) { return std::get_if<CompPtr>(&s); }

/// Value of a closed cost or nat expression.
std::optional<std::uint64_t> const_cost(const ValuePtr& v) {
  if (!is_closed(v)) return std::nullopt;
  try {
    return as_cost(eval_value(v));
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

std::optional<std::uint64_t> charge_amount(const CompPtr& t) {
  if (t->kind != CompKind::Charge) return std::nullopt;
  return const_cost(t->v);
}

/// `k` with the unit-typed binder `x` eliminated.
CompPtr drop_unit_binder(const CompPtr& k, const std::string& x) { return substitute(k, x, mk::unit()); }

std::optional<CompPtr> contract_comp(Rule rule, const CompPtr& t) {
  switch (rule) {
    case Rule::Beta:
      if (t->kind == CompKind::App && t->t->kind == CompKind::Lam) return substitute(t->t->t, t->t->x, t->v);
      return std::nullopt;
    case Rule::EtaArrow: {
      if (t->kind != CompKind::Lam) return std::nullopt;
      const auto& body = t->t;
      if (body->kind == CompKind::App && body->v->kind == ValueKind::Var && body->v->name == t->x &&
          !is_free(body->t->fv, t->x)) {
        return body->t;
      }
      return std::nullopt;
    }
    case Rule::LetBeta:
      if (t->kind == CompKind::LetVal) return substitute(t->t, t->x, t->v);
      return std::nullopt;
    case Rule::ThunkForce:
      if (t->kind == CompKind::Force && t->v->kind == ValueKind::Thunk) return t->v->body;
      return std::nullopt;
    case Rule::SeqReturn:
      if (t->kind == CompKind::Bind && t->t->kind == CompKind::Produce) return substitute(t->u, t->x, t->t->v);
      return std::nullopt;
    case Rule::SeqEta:
      if (t->kind == CompKind::Bind && t->u->kind == CompKind::Produce && t->u->v->kind == ValueKind::Var &&
          t->u->v->name == t->x) {
        return t->t;
      }
      return std::nullopt;
    case Rule::IfZ:
    case Rule::IfS: {
      if (t->kind != CompKind::IfZero || t->v->kind != ValueKind::Nat) return std::nullopt;
      bool zero = t->v->num == 0;
      if (zero != (rule == Rule::IfZ)) return std::nullopt;
      return zero ? t->t : t->u;
    }
    case Rule::IfSame:
      if (t->kind == CompKind::IfZero && alpha_equal(t->t, t->u)) return t->t;
      return std::nullopt;
    case Rule::CaseNil:
      if (t->kind == CompKind::CaseList && t->v->kind == ValueKind::Nil) return t->t;
      return std::nullopt;
    case Rule::CaseCons:
      if (t->kind == CompKind::CaseList && t->v->kind == ValueKind::Cons) {
        return substitute(t->u, Bindings{{t->x, t->v->a}, {t->y, t->v->b}});
      }
      return std::nullopt;
    case Rule::UnpairBeta:
      if (t->kind == CompKind::Unpair && t->v->kind == ValueKind::Pair) {
        return substitute(t->t, Bindings{{t->x, t->v->a}, {t->y, t->v->b}});
      }
      return std::nullopt;
    case Rule::ChargeZero: {
      if (t->kind != CompKind::Bind) return std::nullopt;
      auto c = charge_amount(t->t);
      if (!c || *c != 0) return std::nullopt;
      return drop_unit_binder(t->u, t->x);
    }
    case Rule::ChargeMerge:
    case Rule::ChargeSwap: {
      if (t->kind != CompKind::Bind) return std::nullopt;
      auto c = charge_amount(t->t);
      if (!c) return std::nullopt;
      const CompPtr& rest = t->u;
      std::optional<std::uint64_t> d;
      CompPtr k;
      if (rest->kind == CompKind::Charge) {
        d = charge_amount(rest);
      } else if (rest->kind == CompKind::Bind) {
        d = charge_amount(rest->t);
        k = rest->u;
      }
      if (!d) return std::nullopt;
      if (rule == Rule::ChargeMerge) {
        auto merged = mk::charge(mk::cost(checked_add(*c, *d)));
        if (!k) return merged;
        return mk::bind(rest->x, merged, rest->x == t->x ? k : drop_unit_binder(k, t->x));
      }
      if (*c <= *d) return std::nullopt;
      if (!k) return mk::bind(t->x, rest, t->t);
      return mk::bind(t->x, rest->t, mk::bind(rest->x, t->t, k));
    }
    case Rule::ChooseUnit:
      if (t->kind == CompKind::Choose && t->p == 1) return t->t;
      return std::nullopt;
    case Rule::ChooseSym:
      if (t->kind == CompKind::Choose) return mk::choose(Rational(1 - t->p), t->u, t->t);
      return std::nullopt;
    case Rule::ChooseIdem:
      if (t->kind == CompKind::Choose && alpha_equal(t->t, t->u)) return t->t;
      return std::nullopt;
    case Rule::ChooseAssoc: {
      if (t->kind != CompKind::Choose || t->t->kind != CompKind::Choose) return std::nullopt;
      const Rational& p = t->p;
      const Rational& q = t->t->p;
      Rational pq = p * q;
      if (pq == 1) return std::nullopt;
      Rational r = p * (1 - q) / (1 - pq);
      return mk::choose(pq, t->t->t, mk::choose(r, t->t->u, t->u));
    }
    case Rule::FixUnfold:
      if (t->kind == CompKind::Fix) return substitute(t->t, t->x, mk::thunk(t));
      return std::nullopt;
    case Rule::ForceThunkValue: return std::nullopt;
  }
  return std::nullopt;
}

Subterm child_at(const Subterm& s, std::size_t i) {
  auto kids = std::visit([](const auto& p) { return children(p); }, s);
  if (i >= kids.size()) throw RewriteError(RewriteErrorKind::BadPath, "path index out of range");
  return kids[i];
}

Subterm replace_in(const Subterm& s, const Path& path, std::size_t at, const Subterm& repl) {
  if (at == path.size()) return repl;
  Subterm next = replace_in(child_at(s, path[at]), path, at + 1, repl);
  return std::visit([&](const auto& p) -> Subterm { return with_child(p, path[at], next); }, s);
}

std::string render(const Subterm& s) {
  return std::visit([](const auto& p) { return pretty_print(p); }, s);
}

bool same_subterm(const Subterm& a, const Subterm& b) {
  if (a.index() != b.index()) return false;
  if (auto c = comp_of(a)) return structurally_equal(*c, std::get<CompPtr>(b));
  return structurally_equal(std::get<ValuePtr>(a), std::get<ValuePtr>(b));
}

/// First pre-order position where some rule matches.
bool find_redex(const Subterm& s, const std::vector<Rule>& rules, Path& path, Rule& rule, Subterm& after) {
  for (Rule r : rules) {
    if (auto out = contract(r, s)) {
      rule = r;
      after = *out;
      return true;
    }
  }
  auto kids = std::visit([](const auto& p) { return children(p); }, s);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    if (find_redex(kids[i], rules, path, rule, after)) return true;
    path.pop_back();
  }
  return false;
}

CompPtr checked_replace(const CompPtr& t, const Path& path, const Subterm& after, const CType& want, Rule rule,
                        const Context& ctx) {
  auto out = replace_at(t, path, after);
  CType got;
  try {
    got = check_comp(ctx, out);
  } catch (const TypeError& e) {
    throw RewriteError(RewriteErrorKind::TypeRegression,
                       std::string(rule_name(rule)) + " at " + path_to_string(path) + ": " + e.what());
  }
  if (!type_equal(got, want)) {
    throw RewriteError(RewriteErrorKind::TypeRegression, std::string(rule_name(rule)) + " at " +
                                                             path_to_string(path) + " changed the type from " +
                                                             to_string(want) + " to " + to_string(got));
  }
  return out;
}

}  // namespace

RewriteError::RewriteError(RewriteErrorKind kind, const std::string& message) : CertError(message), kind_(kind) {}

const std::vector<Rule>& all_rules() {
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> out;
    for (const auto& [r, _] : kNames) out.push_back(r);
    return out;
  }();
  return rules;
}

const std::vector<Rule>& default_rules() {
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> out;
    for (Rule r : all_rules()) {
      if (r != Rule::FixUnfold && r != Rule::EtaArrow && r != Rule::ForceThunkValue && r != Rule::ChooseSym) {
        out.push_back(r);
      }
    }
    return out;
  }();
  return rules;
}

std::string_view rule_name(Rule r) {
  for (const auto& [rule, name] : kNames) {
    if (rule == r) return name;
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view name) {
  for (const auto& [rule, n] : kNames) {
    if (n == name) return rule;
  }
  return std::nullopt;
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "." : "") + std::to_string(p[i]);
  return s;
}

std::optional<Subterm> contract(Rule rule, const Subterm& s) {
  if (auto c = comp_of(s)) {
    if (auto out = contract_comp(rule, *c)) return Subterm(*out);
    return std::nullopt;
  }
  const auto& v = std::get<ValuePtr>(s);
  if (rule == Rule::ForceThunkValue && v->kind == ValueKind::Thunk && v->body->kind == CompKind::Force) {
    return Subterm(v->body->v);
  }
  return std::nullopt;
}

Subterm subterm_at(const CompPtr& t, const Path& path) {
  Subterm s = t;
  for (std::size_t i : path) s = child_at(s, i);
  return s;
}

CompPtr replace_at(const CompPtr& t, const Path& path, const Subterm& s) {
  auto out = replace_in(t, path, 0, s);
  if (auto c = comp_of(out)) return *c;
  throw RewriteError(RewriteErrorKind::BadPath, "the root must stay a computation");
}

CompPtr apply_rule(const CompPtr& t, Rule rule, const Path& path, const Context& ctx) {
  CType want = check_comp(ctx, t);
  Subterm target = subterm_at(t, path);
  auto out = contract(rule, target);
  if (!out) {
    throw RewriteError(RewriteErrorKind::NoMatch,
                       std::string(rule_name(rule)) + " does not match at " + path_to_string(path));
  }
  return checked_replace(t, path, *out, want, rule, ctx);
}

NormalizeResult normalize(const CompPtr& t, const std::vector<Rule>& rules, std::uint64_t fuel, const Context& ctx) {
  CType want = check_comp(ctx, t);
  NormalizeResult res{t, {}, false};
  for (;;) {
    Path path;
    Rule rule{};
    Subterm after;
    if (!find_redex(res.term, rules, path, rule, after)) return res;
    if (res.steps.size() >= fuel) {
      res.fuel_exhausted = true;
      return res;
    }
    Subterm before = subterm_at(res.term, path);
    res.term = checked_replace(res.term, path, after, want, rule, ctx);
    res.steps.push_back(RewriteStep{rule, std::move(path), std::move(before), std::move(after)});
  }
}

CompPtr replay(const CompPtr& t, const std::vector<RewriteStep>& steps, const Context& ctx) {
  CompPtr cur = t;
  for (const auto& step : steps) {
    if (!same_subterm(subterm_at(cur, step.path), step.before)) {
      throw RewriteError(RewriteErrorKind::NoMatch, "replay: subterm at " + path_to_string(step.path) +
                                                        " is " + render(subterm_at(cur, step.path)));
    }
    cur = apply_rule(cur, step.rule, step.path, ctx);
    if (!same_subterm(subterm_at(cur, step.path), step.after)) {
      throw RewriteError(RewriteErrorKind::NoMatch,
                         "replay: " + std::string(rule_name(step.rule)) + " produced a different contractum");
    }
  }
  return cur;
}

PreservationReport check_preservation(const CompPtr& t, const CompPtr& u, std::uint64_t depth,
                                      const PreservationOptions& opts) {
  PreservationReport rep;
  if (!opts.fix_unfold) {
    auto ct = eval_cost_dist(t, depth, opts.args);
    auto cu = eval_cost_dist(u, depth, opts.args);
    auto et = eval_ec_outcome(t, depth, opts.args);
    auto eu = eval_ec_outcome(u, depth, opts.args);
    rep.cost_equal = ct == cu;
    rep.ec_equal = et == eu;
    rep.ec_left = et.ec;
    rep.ec_right = eu.ec;
    rep.mass_left = et.dist.mass();
    rep.mass_right = eu.dist.mass();
    if (!rep.cost_equal) rep.detail += "cost distributions differ at depth " + std::to_string(depth) + "; ";
    if (!rep.ec_equal) rep.detail += "expected-cost results differ at depth " + std::to_string(depth) + "; ";
  } else {
    auto at = analyze(t, opts.tol, opts.max_depth, opts.args);
    auto au = analyze(u, opts.tol, opts.max_depth, opts.args);
    const Rational eps(opts.tol);
    rep.ec_left = at.ec;
    rep.ec_right = au.ec;
    rep.mass_left = at.mass;
    rep.mass_right = au.mass;
    rep.ec_equal = abs(at.ec - au.ec) < eps && abs(at.mass - au.mass) < eps;
    auto sandwiched = [&](const CompPtr& outer, const CompPtr& inner) {
      auto lo = eval_cost_dist(outer, depth, opts.args);
      auto mid = eval_cost_dist(inner, depth, opts.args);
      return lo.dominated_by(mid) && mid.dominated_by(eval_cost_dist(outer, depth + 1, opts.args));
    };
    rep.cost_equal = sandwiched(t, u) || sandwiched(u, t);
    if (!rep.ec_equal) {
      rep.detail += "analyze limits differ: " + to_string(at.ec) + " vs " + to_string(au.ec) + "; ";
    }
    if (!rep.cost_equal) {
      rep.detail += "cost distribution at depth " + std::to_string(depth) +
                    " is not between the other term's approximants at depths " + std::to_string(depth) + " and " +
                    std::to_string(depth + 1) + "; ";
    }
  }
  rep.equal = rep.cost_equal && rep.ec_equal;
  return rep;
}

}  // namespace cert
