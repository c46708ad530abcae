#pragma once

// Seeded sampler for the fuel-indexed big-step semantics.

#include "cert/value.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace cert {

enum class RunStatus { Terminated, FuelExhausted };

struct RunOutcome {
  RunStatus status = RunStatus::FuelExhausted;
  std::uint64_t cost = 0;
  CompPtr terminal;  // produce V or a lambda when Terminated
  std::uint64_t steps = 0;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}
  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }
  /// 53-bit dyadic rational in [0, 1).
  Rational uniform();
  /// Uniform on {0, ..., n-1}; n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

/// One sample path with the given fuel. Terminal computations return even at
/// fuel 0; application, bind continuation, fix, unpair and case steps each
/// consume one unit and exhaust the run when none is left.
RunOutcome run_once(const CompPtr& t, std::uint64_t fuel, Rng& rng);

/// Sufficient statistics over a batch of runs; merging is exact.
struct SampleStats {
  std::uint64_t terminated = 0;
  std::uint64_t exhausted = 0;
  mpz_class cost_sum = 0;
  mpz_class cost_sq_sum = 0;
  /// Sum of returned values when they are naturals or reals.
  Rational value_sum = 0;
  std::uint64_t numeric_values = 0;
  /// Frequency of each terminated (cost, value) outcome.
  std::map<Outcome, std::uint64_t, OutcomeLess> table;

  void record(const RunOutcome& r);
  void merge(const SampleStats& other);
};

struct CostEstimate {
  double mean = 0;
  double stddev = 0;
  std::uint64_t terminated = 0;
  std::uint64_t exhausted = 0;
  std::uint64_t seed = 0;
  std::uint64_t fuel = 0;
  std::optional<double> value_mean;
  SampleStats stats;

  double exhaustion_rate() const;
  /// Standard error of the mean over terminated runs.
  double std_error() const;
};

CostEstimate summarize(const SampleStats& stats, std::uint64_t seed, std::uint64_t fuel);

/// Requires a closed program of type F τ.
CostEstimate estimate(const CompPtr& t, std::uint64_t samples, std::uint64_t fuel, std::uint64_t seed);

/// Splits `samples` across one independent stream per seed; the first seeds
/// take the remainder. Seeds must be pairwise distinct.
CostEstimate estimate_parallel(const CompPtr& t, std::uint64_t samples, std::uint64_t fuel,
                               const std::vector<std::uint64_t>& seeds);

}  // namespace cert
