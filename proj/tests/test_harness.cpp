#include "cert/corpus.hpp"
#include "cert/harness.hpp"
#include "cert/parse.hpp"
#include "cert/report_json.hpp"
#include "support/oracle.hpp"

#include <doctest.h>

using namespace cert;

namespace {

const std::vector<CorpusEntry>& corpus() {
  static const auto c = load_corpus(CERT_CORPUS_DIR);
  return c;
}

}  // namespace

TEST_CASE("closed forms agree with the independent oracles") {
  auto t = quicksort_recurrence(20);
  auto o = certtest::qck_recurrence(20);
  for (unsigned n = 0; n <= 20; ++n) CHECK(t[n] == o[n]);
  for (unsigned n = 0; n <= 12; ++n) CHECK(coin_toss_closed_form(n) == certtest::coin_toss_oracle(n));
  CHECK(t[3] == rational(8, 3));
}

TEST_CASE("crosscheck on the geometric program") {
  CrossCheckOptions opts;
  opts.depth = 16;
  auto rep = crosscheck(find_entry(corpus(), "geometric_cost"), opts);
  CHECK(rep.ok());
  CHECK(rep.inequality_holds);
  CHECK_FALSE(rep.recursion_free_equality_holds.has_value());
  CHECK(rep.analyze_converged);
  CHECK(std::abs(to_double(rep.analyze_limit) - 2.0) < 1e-5);
  CHECK(rep.ci_low <= 2.0);
  CHECK(rep.ci_high >= 2.0);
  CHECK(rep.sample.exhausted == 0);
  CHECK(rep.violations.empty());
}

TEST_CASE("crosscheck on a recursion-free program") {
  auto rep = crosscheck(find_entry(corpus(), "choice_example"), {});
  REQUIRE(rep.recursion_free_equality_holds.has_value());
  CHECK(*rep.recursion_free_equality_holds);
  CHECK(rep.ec_component == rep.cost_dist_expectation);
  CHECK(rep.mass_cost == 1);
  CHECK(rep.ok());
}

TEST_CASE("crosscheck on a divergent program") {
  CrossCheckOptions opts;
  opts.samples = 200;
  opts.fuel = 100;
  opts.max_depth = 64;
  auto rep = crosscheck(find_entry(corpus(), "diverge"), opts);
  CHECK(rep.sample.terminated == 0);
  CHECK(rep.sample.exhausted == 200);
  CHECK(rep.mass_cost == 0);
  CHECK(rep.ec_component == 0);
  CHECK_FALSE(rep.analyze_converged);
  CHECK(rep.ok());
}

TEST_CASE("crosscheck over the corpus") {
  CrossCheckOptions opts;
  opts.samples = 4000;
  opts.depth = 8;
  opts.max_depth = 64;
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    auto rep = crosscheck(e, opts);
    CHECK(rep.ok());
    if (e.discrete) {
      CHECK(rep.cost_dist_expectation <= rep.ec_component);
      CHECK(rep.mass_cost == rep.mass_ec);
    }
  }
}

TEST_CASE("event frequencies separate nearby programs") {
  CrossCheckOptions opts;
  opts.samples = 20000;
  CorpusEntry variant = find_entry(corpus(), "geometric_cost");
  variant.program = geometric_program(rational(3, 4));
  CHECK(crosscheck(variant, opts).ok());

  auto fair = estimate(geometric_program(rational(1, 2)), opts.samples, opts.fuel, opts.seed);
  auto cd = eval_cost_dist(geometric_program(rational(3, 4)), 16);
  // Cost 2 has probability 3/16 under p = 3/4 and 1/4 under p = 1/2.
  Outcome two{2, mk::nat(1)};
  CHECK(cd.weight(two) == rational(3, 16));
  double observed = double(fair.stats.table.at(two)) / double(opts.samples);
  CHECK(observed > 0.23);
}

TEST_CASE("oracle suite without the random walk") {
  OracleSuiteOptions opts;
  opts.random_walk_max_depth = 0;
  opts.coin_toss_max = 4;
  opts.quicksort_max = 8;
  auto rep = oracle_suite(corpus(), opts);
  CHECK(rep.quicksort_bound_holds);
  for (const auto& c : rep.cases) {
    CAPTURE(c.family);
    CAPTURE(c.argument);
    CHECK(c.ok);
  }
  CHECK(rep.ok());
  CHECK(rep.cases.size() == 5 + 5 + 9);
}

TEST_CASE("oracle suite requires its entries") {
  std::vector<CorpusEntry> partial;
  for (const auto& e : corpus()) {
    if (e.name != "qck_nat") partial.push_back(e);
  }
  OracleSuiteOptions opts;
  opts.random_walk_max_depth = 0;
  opts.coin_toss_max = 1;
  CHECK_THROWS_AS(oracle_suite(partial, opts), CertError);
}

TEST_CASE("json encodings") {
  auto j = to_json(rational(-7, 3));
  CHECK(j["num"] == "-7");
  CHECK(j["den"] == "3");
  CHECK(rational_from_json(j) == rational(-7, 3));
  CHECK(rational_from_json(Json("2/6")) == rational(1, 3));
  CHECK(rational_from_json(Json(5)) == 5);
  CHECK_THROWS_AS(rational_from_json(Json(0.5)), CertError);

  mpz_class big = mpz_class(1) << 200;
  Rational huge(big, 3);
  CHECK(rational_from_json(to_json(huge)) == huge);

  auto cd = to_json(eval_cost_dist(parse("charge(2); choose 1/4 {produce 0} {produce 1}"), 4));
  REQUIRE(cd["support"].size() == 2);
  CHECK(cd["support"][0]["cost"] == 2);
  CHECK(cd["support"][0]["p"]["num"] == "1");
  CHECK(cd["expected_cost"]["num"] == "2");

  auto rep = to_json(crosscheck(find_entry(corpus(), "choice_example"), {}));
  CHECK(rep["ok"] == true);
  CHECK(rep.contains("recursion_free_equality_holds"));
}
