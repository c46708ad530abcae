#include "cert/cost_dist.hpp"
#include "cert/expected_cost.hpp"

#include <map>
#include <random>

namespace cert {

namespace {

class FiniteGen {
 public:
  explicit FiniteGen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t pick(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }

  Rational small_rational() {
    Rational q(long(pick(9)), long(1 + pick(4)));
    q.canonicalize();
    return q;
  }

  /// Weights over `k` slots with total mass exactly 1 or at most 1.
  std::vector<Rational> weights(std::size_t k, bool full) {
    const long den = 12;
    std::vector<long> parts(k, 0);
    long budget = full ? den : long(pick(den + 1));
    for (long i = 0; i < budget; ++i) ++parts[pick(k)];
    std::vector<Rational> out;
    for (long p : parts) {
      Rational q(p, den);
      q.canonicalize();
      out.push_back(q);
    }
    return out;
  }

  ValueDist value_dist(bool full) {
    ValueDist d;
    auto w = weights(1 + pick(3), full);
    for (const auto& q : w) d.add(mk::nat(pick(4)), q);
    return d;
  }

  ECOutcome ec_outcome(bool full) { return ECOutcome{small_rational(), value_dist(full)}; }

  CostDist cost_dist(bool full) {
    CostDist d;
    auto w = weights(1 + pick(3), full);
    for (const auto& q : w) d.add(Outcome{pick(3), mk::nat(pick(4))}, q);
    return d;
  }

 private:
  std::mt19937_64 rng_;
};

template <typename R>
class Kernel {
 public:
  template <typename Make>
  Kernel(Make make) {
    for (std::uint64_t i = 0; i < 4; ++i) table_.push_back(make());
  }
  const R& operator()(const RunValue& v) const { return table_.at(as_nat(v)); }

 private:
  std::vector<R> table_;
};

Rational mean_of_reals(const ValueDist& d) {
  Rational e = 0;
  for (const auto& [v, w] : d.entries()) e += w * v->real;
  return e;
}

}  // namespace

bool MonadLawReport::ok() const {
  for (const auto& l : laws) {
    if (l.expect_equal ? l.failures != 0 : l.failures == 0) return false;
  }
  return counterexample_lhs != counterexample_rhs;
}

MonadLawReport monad_law_suite(std::uint64_t seed, std::uint64_t instances) {
  MonadLawReport rep;
  FiniteGen gen(seed);
  LawResult left_unit{"ec-left-unit"}, right_unit{"ec-right-unit"}, assoc{"ec-associativity"};
  LawResult linear{"expectation-linearity"}, morph_unit{"morphism-unit"};
  LawResult morph_bind{"morphism-bind-total"}, morph_sub{"morphism-bind-subprobability", 0, 0, false};

  for (std::uint64_t i = 0; i < instances; ++i) {
    Kernel<ECOutcome> f([&] { return gen.ec_outcome(false); });
    Kernel<ECOutcome> g([&] { return gen.ec_outcome(false); });
    auto m = gen.ec_outcome(false);
    auto a = mk::nat(gen.pick(4));

    ++left_unit.instances;
    if (ECMonad::bind(ECMonad::unit(a), f) != f(a)) ++left_unit.failures;

    ++right_unit.instances;
    if (ECMonad::bind(m, [](const RunValue& v) { return ECMonad::unit(v); }) != m) ++right_unit.failures;

    ++assoc.instances;
    auto lhs = ECMonad::bind(ECMonad::bind(m, f), g);
    auto rhs = ECMonad::bind(m, [&](const RunValue& v) { return ECMonad::bind(f(v), g); });
    if (lhs != rhs) ++assoc.failures;

    ++linear.instances;
    {
      auto mu = gen.value_dist(false);
      Kernel<ValueDist> k([&] {
        ValueDist d;
        auto w = gen.weights(1 + gen.pick(3), false);
        for (const auto& q : w) d.add(mk::real(gen.small_rational()), q);
        return d;
      });
      ValueDist pushed;
      Rational pointwise = 0;
      for (const auto& [v, w] : mu.entries()) {
        pushed.add_scaled(k(v), w);
        pointwise += w * mean_of_reals(k(v));
      }
      if (mean_of_reals(pushed) != pointwise) ++linear.failures;
    }

    ++morph_unit.instances;
    if (expectation_morphism(CostMonad::unit(a)) != ECMonad::unit(a)) ++morph_unit.failures;

    for (bool full : {true, false}) {
      auto mu = gen.cost_dist(full);
      Kernel<CostDist> h([&] { return gen.cost_dist(full); });
      auto via_ec = ECMonad::bind(expectation_morphism(mu), [&](const RunValue& v) { return expectation_morphism(h(v)); });
      auto via_cost = expectation_morphism(CostMonad::bind(mu, h));
      auto& law = full ? morph_bind : morph_sub;
      ++law.instances;
      if (via_ec != via_cost) ++law.failures;
    }
  }
  rep.laws = {left_unit, right_unit, assoc, linear, morph_unit, morph_bind, morph_sub};

  CostDist mu;
  mu.add(Outcome{0, mk::nat(1)}, rational(1, 2));
  mu.add(Outcome{1, mk::nat(2)}, rational(1, 2));
  auto f = [](const RunValue& v) {
    CostDist d;
    if (as_nat(v) == 0) d.add(Outcome{0, mk::nat(0)}, rational(1, 2));
    return d;
  };
  rep.counterexample_lhs =
      ECMonad::bind(expectation_morphism(mu), [&](const RunValue& v) { return expectation_morphism(f(v)); });
  rep.counterexample_rhs = expectation_morphism(CostMonad::bind(mu, f));
  return rep;
}

}  // namespace cert
