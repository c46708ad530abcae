#include "cert/harness.hpp"

#include "cert/cost_dist.hpp"
#include "cert/parse.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace cert {

namespace {

constexpr double kZ99 = 2.5758293035489004;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_events(CrossCheckReport& rep, const CostDist& exact) {
  const auto& s = rep.sample.stats;
  const double n = double(s.terminated + s.exhausted);
  if (n == 0) return;
  const double deficit = to_double(Rational(1 - mass(exact)));
  for (const auto& [event, count] : s.table) {
    Rational p = exact.weight(event);
    double pd = to_double(p);
    double observed = double(count) / n;
    double sigma = std::sqrt(std::max(pd, 1.0 / n) * std::max(1.0 - pd, 1.0 / n) / n);
    if (observed - (pd + deficit) > 4 * sigma) {
      rep.adequacy_consistent = false;
      rep.violations.push_back(EventViolation{event, p, observed});
    }
  }
}

const CorpusEntry* lookup(const std::vector<CorpusEntry>& corpus, const std::string& name) {
  for (const auto& e : corpus) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

OracleCase run_case(const std::string& family, const std::string& argument, const CompPtr& t,
                    const std::vector<RunValue>& args, double expected, double tolerance,
                    const OracleSuiteOptions& opts) {
  OracleCase c;
  c.family = family;
  c.argument = argument;
  c.expected = expected;
  c.tolerance = tolerance;
  auto t0 = std::chrono::steady_clock::now();
  auto rep = analyze(t, opts.tol, opts.max_depth, args);
  c.seconds = seconds_since(t0);
  c.got = rep.ec;
  c.converged = rep.converged;
  c.ok = rep.converged && std::abs(to_double(rep.ec) - expected) <= tolerance;
  return c;
}

}  // namespace

bool CrossCheckReport::ok() const {
  return inequality_holds && recursion_free_equality_holds.value_or(true) && ci_consistent && adequacy_consistent;
}

CrossCheckReport crosscheck(const CorpusEntry& entry, const CrossCheckOptions& opts) {
  CrossCheckReport rep;
  rep.name = entry.name;
  rep.discrete = entry.discrete;
  rep.depth = opts.depth;
  const CompPtr applied = entry.applied();

  rep.sample = estimate(applied, opts.samples, opts.fuel, opts.seed);
  const double se = rep.sample.std_error();
  rep.ci_low = rep.sample.mean - kZ99 * se;
  rep.ci_high = rep.sample.mean + kZ99 * se;
  if (!entry.discrete) return rep;

  auto cd = eval_cost_dist(entry.program, opts.depth, entry.args);
  auto ec = eval_ec_outcome(entry.program, opts.depth, entry.args);
  rep.ec_component = ec.ec;
  rep.cost_dist_expectation = expected_of_marginal(cd);
  rep.mass_cost = mass(cd);
  rep.mass_ec = ec.dist.mass();
  rep.inequality_holds = rep.cost_dist_expectation <= rep.ec_component;
  if (is_fix_free(applied)) rep.recursion_free_equality_holds = rep.cost_dist_expectation == rep.ec_component;

  auto lim = analyze(entry.program, opts.tol, opts.max_depth, entry.args);
  rep.analyze_limit = lim.ec;
  rep.analyze_converged = lim.converged;

  if (rep.sample.terminated > 0) {
    const double lo = to_double(rep.cost_dist_expectation);
    const double hi = lim.converged ? to_double(lim.ec) + opts.tol : std::numeric_limits<double>::infinity();
    rep.ci_consistent = rep.ci_high >= lo - 1e-12 && rep.ci_low <= hi;
  }
  check_events(rep, cd);
  return rep;
}

std::vector<Rational> quicksort_recurrence(unsigned up_to) {
  std::vector<Rational> t(up_to + 1, Rational(0));
  Rational prefix = 0;
  for (unsigned n = 1; n <= up_to; ++n) {
    prefix += t[n - 1];
    t[n] = Rational(n - 1) + rational(2, n) * prefix;
  }
  return t;
}

Rational coin_toss_closed_form(unsigned n) { return Rational(2 * ((mpz_class(1) << n) - 1)); }

CompPtr geometric_program(const Rational& p) {
  return parse("fix f : F nat. charge(1); choose " + to_string(p) + " {produce 0} {y <- force f; succ y}");
}

bool OracleSuiteReport::ok() const {
  if (!quicksort_bound_holds) return false;
  for (const auto& c : cases) {
    if (!c.ok) return false;
  }
  return true;
}

OracleSuiteReport oracle_suite(const std::vector<CorpusEntry>& corpus, const OracleSuiteOptions& opts) {
  OracleSuiteReport rep;
  auto need = [&](const std::string& name) -> const CorpusEntry& {
    if (auto e = lookup(corpus, name)) return *e;
    throw CertError("oracle suite: corpus has no entry named " + name);
  };

  rep.cases.push_back(run_case("geometric", "1/2", need("geometric_cost").program, {}, 2.0, 1e-4, opts));
  for (long d : {4L, 3L, 2L}) {
    Rational p = rational(1, d);
    rep.cases.push_back(run_case("geometric_p", to_string(p), geometric_program(p), {}, double(d), 1e-4, opts));
  }
  rep.cases.push_back(
      run_case("geometric_p", "3/4", geometric_program(rational(3, 4)), {}, 4.0 / 3.0, 1e-4, opts));

  const auto& coin = need("coin_tosses").program;
  for (unsigned n = 0; n <= opts.coin_toss_max; ++n) {
    rep.cases.push_back(run_case("coin_tosses", std::to_string(n), coin, {mk::nat(n)},
                                 to_double(coin_toss_closed_form(n)), 1e-4, opts));
  }

  const auto& qck = need("qck_nat").program;
  auto t = quicksort_recurrence(std::max(opts.quicksort_max, opts.bound_max));
  for (unsigned n = 0; n <= opts.quicksort_max; ++n) {
    rep.cases.push_back(run_case("qck_nat", std::to_string(n), qck, {mk::nat(n)}, to_double(t[n]), 1e-6, opts));
  }
  for (unsigned n = 2; n <= opts.bound_max; ++n) {
    if (to_double(t[n]) > 2.0 * n * std::log(double(n))) {
      rep.quicksort_bound_holds = false;
      rep.quicksort_bound_first_failure = n;
      break;
    }
  }

  if (opts.random_walk_max_depth > 0) {
    const auto& rw = need("random_walk");
    OracleCase c;
    c.family = "random_walk";
    c.argument = "2 1";
    c.expected = opts.random_walk_threshold;
    auto t0 = std::chrono::steady_clock::now();
    auto r = analyze(rw.program, opts.tol, opts.random_walk_max_depth, {mk::nat(2), mk::nat(1)});
    c.seconds = seconds_since(t0);
    c.got = r.ec;
    c.converged = r.converged;
    bool increasing = true;
    for (std::size_t i = 1; i < r.history.size(); ++i) increasing = increasing && r.history[i].ec > r.history[i - 1].ec;
    c.ok = !r.converged && increasing && to_double(r.ec) > opts.random_walk_threshold;
    rep.cases.push_back(c);
  }
  return rep;
}

}  // namespace cert
