#include "cert/corpus.hpp"
#include "cert/cost_dist.hpp"
#include "cert/parse.hpp"
#include "cert/typecheck.hpp"
#include "support/files.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

#include <doctest.h>

using namespace cert;
using certtest::read_corpus;

namespace {

CompPtr corpus(const std::string& file) { return parse(read_corpus(file)); }

Rational q(long n, long d = 1) { return rational(n, d); }

std::string render(const RunValue& v) {
  switch (v->kind) {
    case ValueKind::Unit: return "()";
    case ValueKind::Nat:
    case ValueKind::CostLit: return std::to_string(v->num);
    case ValueKind::Real: return to_string(v->real) + "r";
    case ValueKind::Pair: return "(" + render(v->a) + ", " + render(v->b) + ")";
    case ValueKind::Nil: return "[]";
    case ValueKind::Cons: return render(v->a) + "::" + render(v->b);
    default: return "<thunk>";
  }
}

std::map<std::pair<std::uint64_t, std::string>, Rational> table(const CostDist& d) {
  std::map<std::pair<std::uint64_t, std::string>, Rational> out;
  for (const auto& [o, w] : d.entries()) out[{o.cost, render(o.value)}] += w;
  return out;
}

CostDist shift(const CostDist& d, std::uint64_t c) {
  CostDist out;
  for (const auto& [o, w] : d.entries()) out.add(Outcome{o.cost + c, o.value}, w);
  return out;
}

std::vector<CorpusEntry> discrete_corpus() {
  std::vector<CorpusEntry> out;
  for (auto& e : load_corpus(CERT_CORPUS_DIR)) {
    if (e.discrete) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TEST_CASE("recursion-free example distribution") {
  auto d = eval_cost_dist(corpus("choice_example.cert"), 0);
  CHECK(d.size() == 2);
  CHECK(d.weight(Outcome{1, mk::nat(0)}) == q(1, 2));
  CHECK(d.weight(Outcome{0, mk::nat(2)}) == q(1, 2));
  CHECK(expected_of_marginal(d) == q(1, 2));
  CHECK(mass(d) == 1);
  CHECK(expected_of_marginal(CostDist{}) == 0);
  CHECK(mass(CostDist{}) == 0);
  CHECK(mass(CostMonad::unit(mk::unit())) == 1);
}

TEST_CASE("divergence denotes the empty distribution") {
  for (std::uint64_t depth : {0, 1, 5, 64}) {
    auto d = eval_cost_dist(corpus("diverge.cert"), depth);
    CHECK(d.empty());
    CHECK(mass(d) == 0);
  }
}

TEST_CASE("geometric approximants") {
  auto d = eval_cost_dist(corpus("geometric.cert"), 4);
  CHECK(d.size() == 4);
  for (unsigned i = 0; i < 4; ++i) CHECK(d.weight(Outcome{0, mk::nat(i)}) == q(1, 2L << i));
  CHECK(mass(d) == q(15, 16));

  for (unsigned depth = 0; depth <= 12; ++depth) {
    auto dc = eval_cost_dist(corpus("geometric_cost.cert"), depth);
    Rational want_e = 0, want_m = 0;
    for (unsigned k = 1; k <= depth; ++k) {
      want_e += q(k, 1) / Rational(mpz_class(1) << k);
      want_m += Rational(1) / Rational(mpz_class(1) << k);
      CHECK(dc.weight(Outcome{k, mk::nat(k - 1)}) == Rational(1) / Rational(mpz_class(1) << k));
    }
    CHECK(expected_of_marginal(dc) == want_e);
    CHECK(mass(dc) == want_m);
  }
  CHECK(expected_of_marginal(eval_cost_dist(corpus("geometric_cost.cert"), 10)) == q(509, 256));
}

TEST_CASE("arrow-typed programs denote functions") {
  auto fact = eval_cost(corpus("factorial.cert"), 10);
  REQUIRE(fact.is_function());
  CHECK_THROWS(fact.value());
  auto at5 = fact.apply(mk::nat(5));
  REQUIRE_FALSE(at5.is_function());
  CHECK(at5.value().size() == 1);
  CHECK(at5.value().weight(Outcome{5, mk::nat(120)}) == 1);
  CHECK(fact.apply(mk::nat(5)).value() == eval_cost_dist(corpus("factorial.cert"), 10, {mk::nat(5)}));
  CHECK(eval_cost_dist(corpus("factorial.cert"), 5, {mk::nat(5)}).empty());
  CHECK(mass(eval_cost_dist(corpus("factorial.cert"), 6, {mk::nat(5)})) == 1);

  auto rw = eval_cost(corpus("random_walk.cert"), 3);
  auto d = rw.apply(mk::nat(2)).apply(mk::nat(1)).value();
  CHECK(d.weight(Outcome{1, mk::unit()}) == q(1, 2));
  CHECK(mass(d) == q(1, 2));

  auto bi = eval_cost_dist(corpus("bifilter.cert"), 8,
                           {parse_value("cons 4 (cons 1 (cons 3 nil))"),
                            parse_value("thunk (\\x : nat. charge(1); leq x 2)")});
  CHECK(bi.size() == 1);
  CHECK(bi.weight(Outcome{3, eval_value(parse_value("(cons 1 nil, cons 4 (cons 3 nil))"))}) == 1);
}

TEST_CASE("unsupported and failing programs") {
  try {
    eval_cost_dist(corpus("uniform_mean.cert"), 3);
    FAIL("expected ContinuousUnsupported");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::ContinuousUnsupported);
  }
  try {
    eval_cost_dist(parse("rand 0"), 3);
    FAIL("expected ArithmeticError");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::ArithmeticError);
  }
  CHECK_THROWS_AS(eval_cost(parse("(produce 0) 1"), 3), TypeError);
}

TEST_CASE("thunks merge up to alpha-equivalence") {
  auto d = eval_cost_dist(parse("choose 1/3 {produce thunk (\\a : nat. produce a)} {produce thunk (\\b : nat. produce b)}"), 0);
  CHECK(d.size() == 1);
  CHECK(mass(d) == 1);
}

TEST_CASE("corpus: monotone in depth, mass at most one, charge shifts costs") {
  for (const auto& e : discrete_corpus()) {
    CAPTURE(e.name);
    CostDist prev;
    for (std::uint64_t depth = 0; depth <= 10; ++depth) {
      auto d = eval_cost_dist(e.program, depth, e.args);
      CHECK(prev.dominated_by(d));
      CHECK(mass(d) <= 1);
      for (const auto& [o, w] : d.entries()) CHECK(w > 0);
      auto charged = eval_cost_dist(mk::seq(mk::charge(mk::nat(3)), e.applied()), depth);
      CHECK(charged == shift(d, 3));
      prev = d;
    }
  }
}

TEST_CASE("corpus: independent binds commute at equal depth") {
  auto corpus_list = discrete_corpus();
  std::vector<CompPtr> nat_programs;
  for (const auto& e : corpus_list) nat_programs.push_back(e.applied());
  for (std::size_t i = 0; i < nat_programs.size(); ++i) {
    for (std::size_t j = 0; j < nat_programs.size(); ++j) {
      const auto& t = nat_programs[i];
      const auto& u = nat_programs[j];
      auto k = mk::produce(mk::pair(mk::var("a"), mk::var("b")));
      auto ab = mk::bind("a", t, mk::bind("b", u, k));
      auto ba = mk::bind("b", u, mk::bind("a", t, k));
      for (std::uint64_t depth : {3, 6}) {
        CHECK(eval_cost_dist(ab, depth) == eval_cost_dist(ba, depth));
      }
    }
  }
}

TEST_CASE("generated programs agree with the path-enumeration oracle") {
  certtest::GenOptions opts;
  opts.fix = true;
  certtest::TermGen gen(99, opts);
  certtest::PathOracle oracle;
  int spread = 0, recursive = 0;
  for (int i = 0; i < 300; ++i) {
    auto t = gen.program(ty::f(ty::nat()), 4);
    CAPTURE(pretty_print(t));
    auto d = eval_cost_dist(t, 64);
    CHECK(table(d) == oracle.table(t));
    CHECK(mass(d) == 1);
    if (d.size() > 1) ++spread;
    if (!is_fix_free(t)) ++recursive;
  }
  CHECK(spread > 60);
  CHECK(recursive > 20);
}

TEST_CASE("generated programs: independent binds commute") {
  certtest::GenOptions opts;
  opts.fix = true;
  certtest::TermGen gen(5, opts);
  for (int i = 0; i < 200; ++i) {
    auto t = gen.program(ty::f(ty::nat()), 3);
    auto u = gen.program(ty::f(ty::nat()), 3);
    auto k = gen.open_program({{"left_v", ty::nat()}, {"right_v", ty::nat()}}, ty::f(ty::nat()), 3);
    auto ab = mk::bind("left_v", t, mk::bind("right_v", u, k));
    auto ba = mk::bind("right_v", u, mk::bind("left_v", t, k));
    for (std::uint64_t depth : {1, 2, 8}) CHECK(eval_cost_dist(ab, depth) == eval_cost_dist(ba, depth));
  }
}
