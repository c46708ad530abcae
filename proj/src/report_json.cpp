#include "cert/report_json.hpp"

#include "cert/parse.hpp"

namespace cert {

Json to_json(const Rational& q) {
  return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}, {"float", to_double(q)}};
}

Json to_json(const RunValue& v) { return pretty_print(v); }

Json to_json(const CostDist& d) {
  Json support = Json::array();
  for (const auto& [o, w] : d.sorted()) support.push_back({{"cost", o.cost}, {"value", to_json(o.value)}, {"p", to_json(w)}});
  return {{"support", support}, {"mass", to_json(mass(d))}, {"expected_cost", to_json(expected_of_marginal(d))}};
}

Json to_json(const ECOutcome& r) {
  Json dist = Json::array();
  for (const auto& [v, w] : r.dist.sorted()) dist.push_back({{"value", to_json(v)}, {"p", to_json(w)}});
  return {{"ec", to_json(r.ec)}, {"mass", to_json(r.dist.mass())}, {"dist", dist}};
}

Json to_json(const AnalysisReport& r) {
  Json history = Json::array();
  for (const auto& s : r.history) history.push_back({{"depth", s.depth}, {"ec", to_json(s.ec)}, {"mass", to_json(s.mass)}});
  return {{"ec", to_json(r.ec)},
          {"mass", to_json(r.mass)},
          {"depth", r.depth},
          {"converged", r.converged},
          {"history", history}};
}

Json to_json(const CostEstimate& e) {
  Json j{{"mean", e.mean},
         {"stddev", e.stddev},
         {"std_error", e.std_error()},
         {"terminated", e.terminated},
         {"exhausted", e.exhausted},
         {"exhaustion_rate", e.exhaustion_rate()},
         {"seed", e.seed},
         {"fuel", e.fuel}};
  j["value_mean"] = e.value_mean ? Json(*e.value_mean) : Json(nullptr);
  return j;
}

Json to_json(const RunOutcome& r) {
  Json j{{"status", r.status == RunStatus::Terminated ? "terminated" : "fuel_exhausted"},
         {"cost", r.cost},
         {"steps", r.steps}};
  j["terminal"] = r.terminal ? Json(pretty_print(r.terminal)) : Json(nullptr);
  return j;
}

Json to_json(const MonadLawReport& r) {
  Json laws = Json::array();
  for (const auto& l : r.laws) {
    laws.push_back({{"name", l.name},
                    {"instances", l.instances},
                    {"failures", l.failures},
                    {"expect_equal", l.expect_equal}});
  }
  return {{"laws", laws},
          {"counterexample", {{"lhs", to_json(r.counterexample_lhs)}, {"rhs", to_json(r.counterexample_rhs)}}},
          {"ok", r.ok()}};
}

Json to_json(const NormalizeResult& r) {
  Json steps = Json::array();
  auto text = [](const Subterm& s) { return std::visit([](const auto& p) { return pretty_print(p); }, s); };
  for (const auto& s : r.steps) {
    steps.push_back({{"rule", std::string(rule_name(s.rule))},
                     {"path", s.path},
                     {"before", text(s.before)},
                     {"after", text(s.after)}});
  }
  return {{"term", pretty_print(r.term)}, {"steps", steps}, {"fuel_exhausted", r.fuel_exhausted}};
}

Json to_json(const PreservationReport& r) {
  return {{"equal", r.equal},
          {"cost_equal", r.cost_equal},
          {"ec_equal", r.ec_equal},
          {"ec_left", to_json(r.ec_left)},
          {"ec_right", to_json(r.ec_right)},
          {"mass_left", to_json(r.mass_left)},
          {"mass_right", to_json(r.mass_right)},
          {"detail", r.detail}};
}

Json to_json(const CrossCheckReport& r) {
  Json j{{"name", r.name}, {"discrete", r.discrete}, {"ok", r.ok()}, {"sample", to_json(r.sample)},
         {"sample_ci", {r.ci_low, r.ci_high}}, {"ci_consistent", r.ci_consistent}};
  if (r.discrete) {
    j["depth"] = r.depth;
    j["ec_component"] = to_json(r.ec_component);
    j["cost_dist_expectation"] = to_json(r.cost_dist_expectation);
    j["mass_cost"] = to_json(r.mass_cost);
    j["mass_ec"] = to_json(r.mass_ec);
    j["inequality_holds"] = r.inequality_holds;
    j["recursion_free_equality_holds"] =
        r.recursion_free_equality_holds ? Json(*r.recursion_free_equality_holds) : Json(nullptr);
    j["analyze_limit"] = to_json(r.analyze_limit);
    j["analyze_converged"] = r.analyze_converged;
    j["adequacy_consistent"] = r.adequacy_consistent;
    Json v = Json::array();
    for (const auto& e : r.violations) {
      v.push_back({{"cost", e.event.cost},
                   {"value", to_json(e.event.value)},
                   {"exact", to_json(e.exact)},
                   {"observed", e.observed}});
    }
    j["violations"] = v;
  }
  return j;
}

Json to_json(const OracleSuiteReport& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    cases.push_back({{"family", c.family},
                     {"argument", c.argument},
                     {"expected", c.expected},
                     {"got", to_json(c.got)},
                     {"converged", c.converged},
                     {"tolerance", c.tolerance},
                     {"seconds", c.seconds},
                     {"ok", c.ok}});
  }
  return {{"cases", cases},
          {"quicksort_bound_holds", r.quicksort_bound_holds},
          {"quicksort_bound_first_failure", r.quicksort_bound_first_failure},
          {"ok", r.ok()}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_object()) {
    Rational q(mpz_class(j.at("num").get<std::string>(), 10), mpz_class(j.at("den").get<std::string>(), 10));
    q.canonicalize();
    return q;
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>()), 10));
  throw CertError("expected a rational, got " + j.dump());
}

}  // namespace cert
