#include "cert/sampler.hpp"

#include "cert/stack.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace cert {

Rational Rng::uniform() {
  ++draws_;
  Rational q(mpz_class(std::to_string(engine_() >> 11), 10), mpz_class(1) << 53);
  q.canonicalize();
  return q;
}

std::uint64_t Rng::below(std::uint64_t n) {
  ++draws_;
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

namespace {

constexpr std::size_t kSamplerStack = std::size_t(256) << 20;

struct Exhausted {};

[[noreturn]] void stuck(const std::string& msg) { throw EvalError(EvalErrorKind::StuckTerm, msg); }

class Sampler {
 public:
  explicit Sampler(Rng& rng) : rng_(rng) {}

  RunOutcome run(const CompPtr& t, std::uint64_t fuel) {
    cost_ = 0;
    steps_ = 0;
    RunOutcome out;
    try {
      out.terminal = eval(t, fuel);
      out.status = RunStatus::Terminated;
    } catch (const Exhausted&) {
      out.status = RunStatus::FuelExhausted;
    }
    out.cost = cost_;
    out.steps = steps_;
    return out;
  }

 private:
  Rng& rng_;
  std::uint64_t cost_ = 0;
  std::uint64_t steps_ = 0;
  std::unordered_map<const Comp*, std::pair<CompPtr, CompPtr>> unfolded_;

  const CompPtr& unfold(const CompPtr& fix) {
    auto it = unfolded_.find(fix.get());
    if (it == unfolded_.end()) {
      auto body = substitute(fix->t, fix->x, mk::thunk(fix));
      it = unfolded_.emplace(fix.get(), std::make_pair(fix, body)).first;
    }
    return it->second.second;
  }

  static void spend(std::uint64_t& n) {
    if (n == 0) throw Exhausted{};
    --n;
  }

  CompPtr eval(CompPtr t, std::uint64_t n) {
    for (;;) {
      ++steps_;
      switch (t->kind) {
        case CompKind::Produce: {
          auto v = eval_value(t->v);
          return v == t->v ? t : mk::produce(v);
        }
        case CompKind::Lam: return t;
        case CompKind::App: {
          if (n == 0) throw Exhausted{};
          auto fn = eval(t->t, n);
          if (fn->kind != CompKind::Lam) stuck("application of a non-function");
          t = substitute(fn->t, fn->x, eval_value(t->v));
          --n;
          continue;
        }
        case CompKind::IfZero: t = as_nat(eval_value(t->v)) == 0 ? t->t : t->u; continue;
        case CompKind::Force: {
          auto v = eval_value(t->v);
          if (v->kind != ValueKind::Thunk) stuck("force of a non-thunk");
          t = v->body;
          continue;
        }
        case CompKind::Bind: {
          if (n == 0) throw Exhausted{};
          auto r = eval(t->t, n);
          if (r->kind != CompKind::Produce) stuck("bound computation did not produce a value");
          t = substitute(t->u, t->x, r->v);
          --n;
          continue;
        }
        case CompKind::LetVal: t = substitute(t->t, t->x, eval_value(t->v)); continue;
        case CompKind::Unpair: {
          spend(n);
          auto v = eval_value(t->v);
          if (v->kind != ValueKind::Pair) stuck("unpair of a non-pair");
          t = substitute(t->t, Bindings{{t->x, v->a}, {t->y, v->b}});
          continue;
        }
        case CompKind::CaseList: {
          spend(n);
          auto v = eval_value(t->v);
          if (v->kind == ValueKind::Nil) {
            t = t->t;
          } else if (v->kind == ValueKind::Cons) {
            t = substitute(t->u, Bindings{{t->x, v->a}, {t->y, v->b}});
          } else {
            stuck("case of a non-list");
          }
          continue;
        }
        case CompKind::Charge:
          cost_ = checked_add(cost_, as_cost(eval_value(t->v)));
          return mk::produce(mk::unit());
        case CompKind::Uniform: return mk::produce(mk::real(rng_.uniform()));
        case CompKind::RandNat: {
          auto bound = as_nat(eval_value(t->v));
          if (bound == 0) throw EvalError(EvalErrorKind::ArithmeticError, "rand 0 has empty support");
          return mk::produce(mk::nat(rng_.below(bound)));
        }
        case CompKind::Choose: t = rng_.uniform() < t->p ? t->t : t->u; continue;
        case CompKind::Fix:
          spend(n);
          t = unfold(t);
          continue;
        case CompKind::PrimOp: {
          std::vector<RunValue> args;
          args.reserve(t->args.size());
          for (const auto& a : t->args) args.push_back(eval_value(a));
          return mk::produce(apply_op(t->op, args));
        }
      }
      stuck("unknown computation form");
    }
  }
};

SampleStats sample_batch(const CompPtr& t, std::uint64_t samples, std::uint64_t fuel, std::uint64_t seed) {
  SampleStats stats;
  run_on_large_stack(
      [&] {
        Rng rng(seed);
        Sampler s(rng);
        for (std::uint64_t i = 0; i < samples; ++i) stats.record(s.run(t, fuel));
      },
      kSamplerStack);
  return stats;
}

}  // namespace

RunOutcome run_once(const CompPtr& t, std::uint64_t fuel, Rng& rng) {
  return with_large_stack([&] { return Sampler(rng).run(t, fuel); }, kSamplerStack);
}

void SampleStats::record(const RunOutcome& r) {
  if (r.status == RunStatus::FuelExhausted) {
    ++exhausted;
    return;
  }
  ++terminated;
  mpz_class c(std::to_string(r.cost), 10);
  cost_sum += c;
  cost_sq_sum += c * c;
  if (r.terminal->kind != CompKind::Produce) return;
  const auto& v = r.terminal->v;
  ++table[Outcome{r.cost, v}];
  if (v->kind == ValueKind::Nat) {
    value_sum += Rational(mpz_class(std::to_string(v->num), 10));
    ++numeric_values;
  } else if (v->kind == ValueKind::Real) {
    value_sum += v->real;
    ++numeric_values;
  }
}

void SampleStats::merge(const SampleStats& other) {
  terminated += other.terminated;
  exhausted += other.exhausted;
  cost_sum += other.cost_sum;
  cost_sq_sum += other.cost_sq_sum;
  value_sum += other.value_sum;
  numeric_values += other.numeric_values;
  for (const auto& [k, n] : other.table) table[k] += n;
}

double CostEstimate::exhaustion_rate() const {
  auto total = terminated + exhausted;
  return total == 0 ? 0.0 : double(exhausted) / double(total);
}

double CostEstimate::std_error() const { return terminated == 0 ? 0.0 : stddev / std::sqrt(double(terminated)); }

CostEstimate summarize(const SampleStats& stats, std::uint64_t seed, std::uint64_t fuel) {
  CostEstimate e;
  e.terminated = stats.terminated;
  e.exhausted = stats.exhausted;
  e.seed = seed;
  e.fuel = fuel;
  e.stats = stats;
  if (stats.terminated > 0) {
    mpz_class n(std::to_string(stats.terminated), 10);
    e.mean = to_double(Rational(stats.cost_sum, n));
    if (stats.terminated > 1) {
      Rational var(n * stats.cost_sq_sum - stats.cost_sum * stats.cost_sum, n * (n - 1));
      var.canonicalize();
      e.stddev = std::sqrt(to_double(var));
    }
  }
  if (stats.numeric_values > 0) {
    Rational m(stats.value_sum / Rational(mpz_class(std::to_string(stats.numeric_values), 10)));
    e.value_mean = to_double(m);
  }
  return e;
}

CostEstimate estimate(const CompPtr& t, std::uint64_t samples, std::uint64_t fuel, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("estimate needs at least one sample");
  return summarize(sample_batch(t, samples, fuel, seed), seed, fuel);
}

CostEstimate estimate_parallel(const CompPtr& t, std::uint64_t samples, std::uint64_t fuel,
                               const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("estimate_parallel needs at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("estimate_parallel seeds must be distinct");
  }
  if (samples == 0) throw std::invalid_argument("estimate needs at least one sample");
  std::vector<SampleStats> parts(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::vector<std::thread> workers;
  const std::uint64_t k = seeds.size();
  for (std::uint64_t i = 0; i < k; ++i) {
    std::uint64_t share = samples / k + (i < samples % k ? 1 : 0);
    workers.emplace_back([&, i, share] {
      try {
        if (share > 0) parts[i] = sample_batch(t, share, fuel, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  SampleStats all;
  for (const auto& p : parts) all.merge(p);
  return summarize(all, seeds.front(), fuel);
}

}  // namespace cert
