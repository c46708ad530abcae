#pragma once

// Random generator of closed, well-typed cert programs for property tests.

#include "cert/syntax.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace certtest {

using namespace cert;

struct GenOptions {
  int max_depth = 4;
  bool charge = true;
  bool choose = true;
  bool rand = true;
  bool fix = false;        // small bounded recursive subprograms
  bool continuous = false;  // uniform and real arithmetic
  bool shadowing = true;
};

class TermGen {
 public:
  TermGen(std::uint64_t seed, GenOptions opts = {}) : rng_(seed), opts_(opts) {}

  CompPtr program(const CType& ty, int depth = -1) {
    ctx_.clear();
    counter_ = 0;
    return comp(ty, depth < 0 ? opts_.max_depth : depth);
  }

  /// A computation well-typed in `ctx` (names must not look like "x<digits>").
  CompPtr open_program(const std::vector<std::pair<std::string, VType>>& ctx, const CType& ty, int depth) {
    ctx_ = ctx;
    counter_ = 0;
    auto t = comp(ty, depth);
    ctx_.clear();
    return t;
  }

  CompPtr comp(const CType& target, int depth) {
    if (target->kind == CKind::Arrow) {
      std::string x = fresh();
      push(x, target->arg);
      auto body = comp(target->out, depth - 1);
      pop();
      return mk::lam(x, body, target->arg);
    }
    const VType& tau = target->arg;
    if (depth <= 0) return mk::produce(value(tau, 0));
    for (;;) {
      switch (pick(14)) {
        case 0:
        case 1: return mk::produce(value(tau, depth - 1));
        case 2: {
          VType s = small_type();
          auto bound = comp(ty::f(s), depth - 1);
          std::string x = fresh();
          push(x, s);
          auto cont = comp(target, depth - 1);
          pop();
          return mk::bind(x, bound, cont);
        }
        case 3:
          if (!opts_.charge) break;
          return mk::seq(mk::charge(charge_amount()), comp(target, depth - 1));
        case 4:
          if (!opts_.choose) break;
          return mk::choose(probability(), comp(target, depth - 1), comp(target, depth - 1));
        case 5:
          if (!opts_.rand || tau->kind != VKind::Nat) break;
          return mk::rand(mk::nat(1 + pick(3)));
        case 6:
          return mk::if0(value(ty::nat(), depth - 1), comp(target, depth - 1), comp(target, depth - 1));
        case 7: {
          VType s = small_type();
          auto v = value(s, depth - 1);
          std::string x = fresh();
          push(x, s);
          auto body = comp(target, depth - 1);
          pop();
          return mk::let(x, v, body);
        }
        case 8:
          if (tau->kind == VKind::Nat) return nat_op(depth);
          if (tau->kind == VKind::Real && opts_.continuous) return real_op(depth);
          break;
        case 9: return mk::force(value(ty::u(target), depth - 1));
        case 10: {
          VType s = small_type();
          std::string x = fresh();
          push(x, s);
          auto body = comp(target, depth - 1);
          pop();
          return mk::app(mk::lam(x, body, s), value(s, depth - 1));
        }
        case 11: {
          VType l = small_type(), r = small_type();
          auto v = value(ty::prod(l, r), depth - 1);
          std::string x = fresh(), y = fresh_other(x);
          push(x, l);
          push(y, r);
          auto body = comp(target, depth - 1);
          pop();
          pop();
          return mk::unpair(x, y, v, body);
        }
        case 12: {
          auto lt = ty::list(ty::nat());
          auto v = value(lt, depth - 1);
          auto nb = comp(target, depth - 1);
          std::string h = fresh(), t = fresh_other(h);
          push(h, ty::nat());
          push(t, lt);
          auto cb = comp(target, depth - 1);
          pop();
          pop();
          return mk::case_list(v, nb, h, t, cb);
        }
        case 13:
          if (opts_.fix && tau->kind == VKind::Nat) return bounded_fix(depth);
          if (opts_.continuous && tau->kind == VKind::Real) return mk::uniform();
          break;
      }
    }
  }

  ValuePtr value(const VType& tau, int depth) {
    if (pick(3) == 0) {
      std::vector<std::string> names, seen;
      for (auto it = ctx_.rbegin(); it != ctx_.rend(); ++it) {
        if (std::find(seen.begin(), seen.end(), it->first) != seen.end()) continue;
        seen.push_back(it->first);
        if (type_equal(it->second, tau)) names.push_back(it->first);
      }
      if (!names.empty()) return mk::var(names[pick(names.size())]);
    }
    switch (tau->kind) {
      case VKind::Unit: return mk::unit();
      case VKind::Nat: return mk::nat(pick(4));
      case VKind::Real: return mk::real(Rational(static_cast<long>(pick(5)), 4));
      case VKind::Cost:
        if (depth > 0 && pick(3) == 0) return mk::cost_add(value(tau, depth - 1), value(tau, depth - 1));
        return mk::cost(pick(3));
      case VKind::Prod: return mk::pair(value(tau->left, depth - 1), value(tau->right, depth - 1));
      case VKind::List:
        if (depth <= 0 || pick(2) == 0) return mk::nil(tau);
        return mk::cons(value(tau->left, depth - 1), value(tau, depth - 1));
      case VKind::U: return mk::thunk(comp(tau->body, std::max(depth - 1, 0)));
    }
    return mk::unit();
  }

  std::uint64_t pick(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }

 private:
  std::mt19937_64 rng_;
  GenOptions opts_;
  std::vector<std::pair<std::string, VType>> ctx_;
  int counter_ = 0;

  void push(const std::string& x, const VType& t) { ctx_.emplace_back(x, t); }
  void pop() { ctx_.pop_back(); }

  // Reuses an in-scope name now and then so shadowing is exercised.
  std::string fresh() {
    if (opts_.shadowing && !ctx_.empty() && pick(6) == 0) return ctx_[pick(ctx_.size())].first;
    return "x" + std::to_string(counter_++);
  }

  std::string fresh_other(const std::string& x) {
    std::string y = fresh();
    return y == x ? "x" + std::to_string(counter_++) : y;
  }

  VType small_type() {
    switch (pick(6)) {
      case 0: return ty::unit();
      case 1: return ty::prod(ty::nat(), ty::nat());
      case 2: return ty::list(ty::nat());
      case 3: return ty::u(ty::f(ty::nat()));
      default: return ty::nat();
    }
  }

  Rational probability() {
    static const long dens[] = {2, 3, 4, 5};
    long d = dens[pick(4)];
    return Rational(static_cast<long>(pick(d + 1)), d);
  }

  ValuePtr charge_amount() {
    switch (pick(4)) {
      case 0: return mk::cost(0);
      case 1: return mk::cost_add(mk::cost(pick(3)), mk::cost(pick(3)));
      case 2: return value(ty::nat(), 0);
      default: return mk::cost(1 + pick(3));
    }
  }

  CompPtr nat_op(int depth) {
    static const OpName ops[] = {OpName::AddNat, OpName::Monus, OpName::MulNat, OpName::LeqNat, OpName::Succ,
                                 OpName::Pred};
    OpName op = ops[pick(6)];
    std::vector<ValuePtr> args;
    for (std::size_t i = 0; i < op_signature(op).args.size(); ++i) args.push_back(value(ty::nat(), depth - 1));
    return mk::prim(op, std::move(args));
  }

  CompPtr real_op(int depth) {
    static const OpName ops[] = {OpName::AddReal, OpName::MulReal, OpName::SubReal};
    return mk::prim(ops[pick(3)], {value(ty::real(), depth - 1), value(ty::real(), depth - 1)});
  }

  // fix f : nat -> F nat. \n. if0 n then produce k else (charge; f (n-1)),
  // applied to a small literal so every unfolding chain is finite.
  CompPtr bounded_fix(int depth) {
    std::string f = "f" + std::to_string(counter_++);
    std::string n = "n" + std::to_string(counter_++);
    std::string m = "m" + std::to_string(counter_++);
    auto ct = ty::arrow(ty::nat(), ty::f(ty::nat()));
    CompPtr step = mk::app(mk::force(mk::var(f)), mk::var(m));
    if (opts_.charge) step = mk::seq(mk::charge(mk::cost(1)), step);
    if (opts_.choose && pick(2) == 0) step = mk::choose(Rational(1, 2), step, mk::produce(mk::nat(pick(3))));
    auto body = mk::lam(
        n,
        mk::if0(mk::var(n), mk::produce(value(ty::nat(), std::max(depth - 2, 0))),
                mk::bind(m, mk::prim(OpName::Pred, {mk::var(n)}), step)),
        ty::nat());
    return mk::app(mk::fix(f, body, ct), mk::nat(pick(4)));
  }
};

}  // namespace certtest
