#pragma once

// Closed runtime values and the finitely supported subprobability
// distributions the discrete engines compute with.

#include "cert/syntax.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cert {

/// A closed, normalized value term: no variables, cost sums folded to
/// literals, nil annotations dropped. Lists are cons chains; thunks keep their
/// (closed) bodies and compare up to alpha-equivalence.
using RunValue = ValuePtr;

/// Normalizes a closed value. Throws EvalError(StuckTerm) on a free variable.
RunValue eval_value(const ValuePtr& v);

/// Applies a primitive operator to normalized arguments.
/// Throws EvalError(ArithmeticError) outside the operator's domain.
RunValue apply_op(OpName op, const std::vector<RunValue>& args);

std::uint64_t as_nat(const RunValue& v);
/// Accepts both naturals and cost literals.
std::uint64_t as_cost(const RunValue& v);
std::vector<RunValue> list_elements(const RunValue& v);
RunValue make_list(const std::vector<RunValue>& elems);

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

struct RunValueHash {
  std::size_t operator()(const RunValue& v) const { return v->hash; }
};
struct RunValueEq {
  bool operator()(const RunValue& a, const RunValue& b) const { return a == b || alpha_equal(a, b); }
};
struct RunValueLess {
  bool operator()(const RunValue& a, const RunValue& b) const { return compare_alpha(a, b) < 0; }
};

/// (cost, value) pair: the outcome type of the cost semantics at F τ.
struct Outcome {
  std::uint64_t cost = 0;
  RunValue value;
};
struct OutcomeHash {
  std::size_t operator()(const Outcome& o) const { return o.value->hash * 1000003u ^ std::hash<std::uint64_t>{}(o.cost); }
};
struct OutcomeEq {
  bool operator()(const Outcome& a, const Outcome& b) const { return a.cost == b.cost && RunValueEq{}(a.value, b.value); }
};
struct OutcomeLess {
  bool operator()(const Outcome& a, const Outcome& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    return RunValueLess{}(a.value, b.value);
  }
};

/// Finitely supported subprobability distribution with exact weights.
/// Zero weights are never stored.
template <typename K, typename Hash, typename Eq, typename Less>
class SubDist {
 public:
  using Entry = std::pair<K, Rational>;

  SubDist() = default;
  static SubDist point(K k) {
    SubDist d;
    d.add(std::move(k), Rational(1));
    return d;
  }

  void add(const K& k, const Rational& w) {
    if (sgn(w) == 0) return;
    if (auto* slot = find(k)) {
      *slot += w;
      return;
    }
    entries_.emplace_back(k, w);
    if (!index_.empty() || entries_.size() > kIndexThreshold) reindex_last();
  }

  /// Adds every entry of `other`, scaled by `scale`.
  void add_scaled(const SubDist& other, const Rational& scale) {
    if (sgn(scale) == 0) return;
    for (const auto& [k, w] : other.entries_) add(k, w * scale);
  }

  Rational weight(const K& k) const {
    if (const auto* slot = const_cast<SubDist*>(this)->find(k)) return *slot;
    return 0;
  }

  Rational mass() const {
    Rational m = 0;
    for (const auto& e : entries_) m += e.second;
    return m;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  std::vector<Entry> sorted() const {
    auto out = entries_;
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return Less{}(a.first, b.first); });
    return out;
  }

  /// Exact equality of weight functions.
  bool operator==(const SubDist& other) const {
    if (size() != other.size()) return false;
    for (const auto& [k, w] : entries_) {
      if (other.weight(k) != w) return false;
    }
    return true;
  }

  /// Pointwise `this <= other`.
  bool dominated_by(const SubDist& other) const {
    for (const auto& [k, w] : entries_) {
      if (w > other.weight(k)) return false;
    }
    return true;
  }

  template <typename F>
  auto map_keys(F f) const {
    using K2 = decltype(f(std::declval<const K&>()));
    std::vector<std::pair<K2, Rational>> out;
    for (const auto& [k, w] : entries_) out.emplace_back(f(k), w);
    return out;
  }

 private:
  static constexpr std::size_t kIndexThreshold = 16;
  std::vector<Entry> entries_;
  std::unordered_map<K, std::size_t, Hash, Eq> index_;

  Rational* find(const K& k) {
    if (!index_.empty()) {
      auto it = index_.find(k);
      return it == index_.end() ? nullptr : &entries_[it->second].second;
    }
    for (auto& e : entries_) {
      if (Eq{}(e.first, k)) return &e.second;
    }
    return nullptr;
  }

  void reindex_last() {
    if (index_.empty()) {
      for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].first, i);
    } else {
      index_.emplace(entries_.back().first, entries_.size() - 1);
    }
  }
};

using ValueDist = SubDist<RunValue, RunValueHash, RunValueEq, RunValueLess>;
using CostDist = SubDist<Outcome, OutcomeHash, OutcomeEq, OutcomeLess>;

}  // namespace cert
