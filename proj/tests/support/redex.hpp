#pragma once

// Closed, fix-free programs of type F nat containing a redex for a chosen
// rewrite rule at a known path.

#include "cert/rewrite.hpp"
#include "support/gen.hpp"

namespace certtest {

struct Planted {
  CompPtr program;
  cert::Path path;
};

class RedexGen {
 public:
  explicit RedexGen(std::uint64_t seed) : gen_(seed, options()) {}

  Planted plant(cert::Rule rule) {
    auto redex = make(rule);
    switch (gen_.pick(3)) {
      case 0: return {redex, {}};
      case 1: {
        auto k = gen_.open_program({{"r_v", ty::nat()}}, ty::f(ty::nat()), 2);
        return {mk::bind("r_v", redex, k), {0}};
      }
      default: {
        auto other = gen_.program(ty::f(ty::nat()), 2);
        if (gen_.pick(2) == 0) return {mk::choose(cert::rational(1, 3), redex, other), {0}};
        return {mk::choose(cert::rational(2, 5), other, redex), {1}};
      }
    }
  }

 private:
  TermGen gen_;

  static GenOptions options() {
    GenOptions o;
    o.fix = false;
    return o;
  }

  CompPtr comp(int depth = 2) { return gen_.program(ty::f(ty::nat()), depth); }
  CompPtr open(const std::vector<std::pair<std::string, VType>>& ctx, int depth = 2) {
    return gen_.open_program(ctx, ty::f(ty::nat()), depth);
  }
  ValuePtr closed_value(const VType& t) { return gen_.value(t, 2); }
  ValuePtr cost_lit() { return mk::cost(gen_.pick(4)); }

  CompPtr make(cert::Rule rule) {
    using cert::Rule;
    const auto nat = ty::nat();
    switch (rule) {
      case Rule::Beta: return mk::app(mk::lam("b_x", open({{"b_x", nat}}), nat), closed_value(nat));
      case Rule::EtaArrow: {
        auto fn = mk::lam("e_y", open({{"e_y", nat}}), nat);
        auto eta = mk::lam("e_x", mk::app(fn, mk::var("e_x")), nat);
        return mk::app(eta, closed_value(nat));
      }
      case Rule::LetBeta: {
        auto s = gen_.pick(2) ? nat : ty::prod(nat, nat);
        return mk::let("l_x", closed_value(s), open({{"l_x", s}}));
      }
      case Rule::ThunkForce: return mk::force(mk::thunk(comp()));
      case Rule::ForceThunkValue: {
        auto inner = closed_value(ty::u(ty::f(nat)));
        return mk::force(mk::thunk(mk::force(inner)));
      }
      case Rule::SeqReturn: return mk::bind("s_x", mk::produce(closed_value(nat)), open({{"s_x", nat}}));
      case Rule::SeqEta: return mk::bind("q_x", comp(), mk::produce(mk::var("q_x")));
      case Rule::IfZ: return mk::if0(mk::nat(0), comp(), comp());
      case Rule::IfS: return mk::if0(mk::nat(1 + gen_.pick(3)), comp(), comp());
      case Rule::IfSame: {
        auto branch = comp();
        return mk::if0(closed_value(nat), branch, branch);
      }
      case Rule::CaseNil:
        return mk::case_list(mk::nil(ty::list(nat)), comp(), "c_h", "c_t",
                             open({{"c_h", nat}, {"c_t", ty::list(nat)}}));
      case Rule::CaseCons: {
        auto lst = mk::cons(closed_value(nat), closed_value(ty::list(nat)));
        return mk::case_list(lst, comp(), "c_h", "c_t", open({{"c_h", nat}, {"c_t", ty::list(nat)}}));
      }
      case Rule::UnpairBeta:
        return mk::unpair("u_a", "u_b", closed_value(ty::prod(nat, nat)), open({{"u_a", nat}, {"u_b", nat}}));
      case Rule::ChargeZero: return mk::seq(mk::charge(gen_.pick(2) ? mk::cost(0) : mk::nat(0)), comp());
      case Rule::ChargeMerge:
        if (gen_.pick(2)) return mk::seq(mk::charge(cost_lit()), mk::seq(mk::charge(cost_lit()), comp()));
        return mk::seq(mk::seq(mk::charge(cost_lit()), mk::charge(cost_lit())), comp());
      case Rule::ChargeSwap: {
        auto d = gen_.pick(3);
        auto c = d + 1 + gen_.pick(3);
        return mk::seq(mk::charge(mk::cost(c)), mk::seq(mk::charge(mk::cost(d)), comp()));
      }
      case Rule::ChooseUnit: return mk::choose(1, comp(), comp());
      case Rule::ChooseSym: return mk::choose(probability(), comp(), comp());
      case Rule::ChooseIdem: {
        auto branch = comp();
        return mk::choose(probability(), branch, branch);
      }
      case Rule::ChooseAssoc: {
        Rational p = probability(), q = probability();
        if (p * q == 1) q = cert::rational(1, 2);
        return mk::choose(p, mk::choose(q, comp(), comp()), comp());
      }
      case Rule::FixUnfold: break;
    }
    throw std::invalid_argument("no fix-free redex for this rule");
  }

  Rational probability() {
    static const long dens[] = {2, 3, 4, 5, 7};
    long d = dens[gen_.pick(5)];
    return cert::rational(static_cast<long>(gen_.pick(d + 1)), d);
  }
};

/// Path of the redex for rules whose redex sits below the planted node.
inline cert::Path redex_path(cert::Rule rule, cert::Path planted, const CompPtr& program) {
  using cert::Rule;
  if (rule == Rule::EtaArrow) planted.push_back(0);
  if (rule == Rule::ForceThunkValue) planted.push_back(0);
  if (rule == Rule::ChargeMerge || rule == Rule::ChargeSwap) {
    auto s = cert::subterm_at(program, planted);
    const auto& c = std::get<CompPtr>(s);
    if (c->t->kind == cert::CompKind::Bind) planted.push_back(0);
  }
  return planted;
}

}  // namespace certtest
