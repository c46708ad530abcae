#pragma once

// Depth-indexed denotational evaluator, generic over the result monad.
//
// `Interpreter<M>::eval(t, depth, stack)` computes the depth-th Kleene
// approximant of a closed computation applied to the values on `stack`
// (the top of the stack is the first argument consumed). Every fix unfolding
// decrements the depth; a fix met at depth 0 denotes M::bottom().
//
// M supplies:
//   using R;                                    result at a returner type
//   static R unit(const RunValue&);
//   static R bottom();
//   static R charge(std::uint64_t);
//   static R uniform_nat(std::uint64_t n);      n > 0
//   static R mix(const Rational& p, const R& left, const R& right);
//   template <class K> static R bind(const R&, K&& k);   k : RunValue -> R

#include "cert/value.hpp"

#include <cstdint>
#include <functional>
#include <list>
#include <stdexcept>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cert {

using ArgStack = std::vector<RunValue>;

inline constexpr std::size_t kDefaultMemoEntries = std::size_t(1) << 21;

/// Memo key for a fix node met with a given argument stack and depth.
struct FixKey {
  CompPtr fix;
  std::uint64_t depth = 0;
  ArgStack args;
  const void* extra = nullptr;

  bool operator==(const FixKey& o) const {
    if (fix != o.fix || depth != o.depth || extra != o.extra || args.size() != o.args.size()) return false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!RunValueEq{}(args[i], o.args[i])) return false;
    }
    return true;
  }
};

struct FixKeyHash {
  std::size_t operator()(const FixKey& k) const {
    std::size_t h = std::hash<const void*>{}(k.fix.get()) ^ (k.depth * 0x9e3779b97f4a7c15ULL);
    h ^= std::hash<const void*>{}(k.extra) + 0x7f4a7c15 + (h << 6) + (h >> 2);
    for (const auto& a : k.args) h ^= a->hash + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

/// Least-recently-used map with a fixed entry budget.
template <typename K, typename V, typename H>
class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

  const V* get(const K& k) {
    auto it = index_.find(k);
    if (it == index_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second);
    return &it->second->second;
  }

  void put(K k, V v) {
    if (capacity_ == 0) return;
    auto it = index_.find(k);
    if (it != index_.end()) {
      it->second->second = std::move(v);
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    order_.emplace_front(std::move(k), std::move(v));
    index_.emplace(order_.front().first, order_.begin());
    if (index_.size() > capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
  }

  std::size_t size() const { return index_.size(); }
  void clear() {
    index_.clear();
    order_.clear();
  }

 private:
  std::size_t capacity_;
  std::list<std::pair<K, V>> order_;
  std::unordered_map<K, typename std::list<std::pair<K, V>>::iterator, H> index_;
};

/// `fix x. t` with `thunk (fix x. t)` substituted for x, cached per node.
class Unfolder {
 public:
  const CompPtr& operator()(const CompPtr& fix) {
    auto it = cache_.find(fix.get());
    if (it == cache_.end()) {
      auto body = substitute(fix->t, fix->x, mk::thunk(fix));
      it = cache_.emplace(fix.get(), std::make_pair(fix, body)).first;
    }
    return it->second.second;
  }

 private:
  std::unordered_map<const Comp*, std::pair<CompPtr, CompPtr>> cache_;
};

[[noreturn]] inline void stuck_term(const std::string& msg) { throw EvalError(EvalErrorKind::StuckTerm, msg); }

/// Reduces the administrative forms (application, lambda, let, force,
/// conditionals, pattern matching) in place. Returns false once `t` is a
/// form that needs the monad.
inline bool administrative_step(CompPtr& t, ArgStack& stack) {
  switch (t->kind) {
    case CompKind::App:
      stack.push_back(eval_value(t->v));
      t = t->t;
      return true;
    case CompKind::Lam: {
      if (stack.empty()) stuck_term("lambda reached with no argument");
      Bindings b{{t->x, stack.back()}};
      stack.pop_back();
      CompPtr body = t->t;
      while (body->kind == CompKind::Lam && !stack.empty()) {
        for (auto& [name, _] : b) {
          if (name == body->x) name = std::string(kWildcard);
        }
        b.emplace_back(body->x, stack.back());
        stack.pop_back();
        body = body->t;
      }
      t = substitute(body, b);
      return true;
    }
    case CompKind::IfZero: t = as_nat(eval_value(t->v)) == 0 ? t->t : t->u; return true;
    case CompKind::Force: {
      auto v = eval_value(t->v);
      if (v->kind != ValueKind::Thunk) stuck_term("force of a non-thunk");
      t = v->body;
      return true;
    }
    case CompKind::LetVal: t = substitute(t->t, t->x, eval_value(t->v)); return true;
    case CompKind::Unpair: {
      auto v = eval_value(t->v);
      if (v->kind != ValueKind::Pair) stuck_term("unpair of a non-pair");
      t = substitute(t->t, Bindings{{t->x, v->a}, {t->y, v->b}});
      return true;
    }
    case CompKind::CaseList: {
      auto v = eval_value(t->v);
      if (v->kind == ValueKind::Nil) {
        t = t->t;
      } else if (v->kind == ValueKind::Cons) {
        t = substitute(t->u, Bindings{{t->x, v->a}, {t->y, v->b}});
      } else {
        stuck_term("case of a non-list");
      }
      return true;
    }
    default: return false;
  }
}

inline RunValue eval_prim(const CompPtr& t) {
  std::vector<RunValue> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(eval_value(a));
  return apply_op(t->op, args);
}

inline std::uint64_t rand_bound(const CompPtr& t) {
  auto n = as_nat(eval_value(t->v));
  if (n == 0) throw EvalError(EvalErrorKind::ArithmeticError, "rand 0 has empty support");
  return n;
}

template <typename M>
class Interpreter {
 public:
  using R = typename M::R;

  /// With `precision_bits` > 0, every fix result is rounded down onto the
  /// grid 2^-precision_bits (monads providing `round_down` only).
  explicit Interpreter(std::size_t memo_entries = kDefaultMemoEntries, std::size_t precision_bits = 0)
      : memo_(memo_entries), precision_(precision_bits) {}

  R eval(CompPtr t, std::uint64_t depth, ArgStack stack) {
    for (;;) {
      if (administrative_step(t, stack)) continue;
      switch (t->kind) {
        case CompKind::Produce:
          require_empty(stack);
          return M::unit(eval_value(t->v));
        case CompKind::Charge:
          require_empty(stack);
          return M::charge(as_cost(eval_value(t->v)));
        case CompKind::PrimOp:
          require_empty(stack);
          return M::unit(eval_prim(t));
        case CompKind::RandNat:
          require_empty(stack);
          return M::uniform_nat(rand_bound(t));
        case CompKind::Uniform:
          throw EvalError(EvalErrorKind::ContinuousUnsupported, "uniform has no discrete denotation");
        case CompKind::Choose: {
          if (t->p == 1) {
            t = t->t;
            continue;
          }
          if (sgn(t->p) == 0) {
            t = t->u;
            continue;
          }
          R left = eval(t->t, depth, stack);
          R right = eval(t->u, depth, stack);
          return M::mix(t->p, left, right);
        }
        case CompKind::Bind: {
          R bound = eval(t->t, depth, {});
          const CompPtr& cont = t->u;
          const std::string& x = t->x;
          return M::bind(bound, [&](const RunValue& a) { return eval(substitute(cont, x, a), depth, stack); });
        }
        case CompKind::Fix: {
          if (depth == 0) return M::bottom();
          FixKey key{t, depth, stack, nullptr};
          if (const R* hit = memo_.get(key)) return *hit;
          R r = eval(unfold_(t), depth - 1, std::move(stack));
          if constexpr (requires { M::round_down(r, precision_); }) {
            if (precision_ > 0) r = M::round_down(r, precision_);
          }
          memo_.put(std::move(key), r);
          return r;
        }
        default: stuck_term("unexpected computation form");
      }
    }
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  LruCache<FixKey, R, FixKeyHash> memo_;
  Unfolder unfold_;
  std::size_t precision_ = 0;

  static void require_empty(const ArgStack& stack) {
    if (!stack.empty()) stuck_term("value-producing computation applied to an argument");
  }
};

/// Converts application-order arguments to an evaluation stack.
inline ArgStack to_stack(const std::vector<RunValue>& args) {
  ArgStack s;
  for (auto it = args.rbegin(); it != args.rend(); ++it) s.push_back(eval_value(*it));
  return s;
}

/// Semantic object at a computation type: a result at F τ, or a function
/// awaiting further arguments at an arrow type.
template <typename R>
class Denotation {
 public:
  using Runner = std::function<R(const std::vector<RunValue>& applied)>;

  Denotation(CType type, std::vector<RunValue> applied, std::shared_ptr<const Runner> run)
      : type_(std::move(type)), applied_(std::move(applied)), run_(std::move(run)) {
    if (type_->kind == CKind::F) value_ = std::make_shared<const R>((*run_)(applied_));
  }

  bool is_function() const { return type_->kind == CKind::Arrow; }
  const CType& type() const { return type_; }

  const R& value() const {
    if (!value_) throw std::logic_error("denotation at an arrow type has no result until applied");
    return *value_;
  }

  Denotation apply(const RunValue& arg) const {
    if (!is_function()) throw std::logic_error("denotation at a returner type cannot be applied");
    auto next = applied_;
    next.push_back(arg);
    return Denotation(type_->out, std::move(next), run_);
  }

 private:
  CType type_;
  std::vector<RunValue> applied_;
  std::shared_ptr<const Runner> run_;
  std::shared_ptr<const R> value_;
};

}  // namespace cert
