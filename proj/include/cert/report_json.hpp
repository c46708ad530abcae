#pragma once

// JSON renderings of results. Rationals are {"num", "den", "float"} with num
// and den as decimal strings.

#include "cert/cost_dist.hpp"
#include "cert/expected_cost.hpp"
#include "cert/harness.hpp"
#include "cert/rewrite.hpp"
#include "cert/sampler.hpp"

#include <json.hpp>

namespace cert {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Json to_json(const RunValue& v);
Json to_json(const CostDist& d);
Json to_json(const ECOutcome& r);
Json to_json(const AnalysisReport& r);
Json to_json(const CostEstimate& e);
Json to_json(const RunOutcome& r);
Json to_json(const MonadLawReport& r);
Json to_json(const NormalizeResult& r);
Json to_json(const PreservationReport& r);
Json to_json(const CrossCheckReport& r);
Json to_json(const OracleSuiteReport& r);

/// Inverse of the rational encoding; also accepts a bare "a/b" string or an
/// integer.
Rational rational_from_json(const Json& j);

}  // namespace cert
