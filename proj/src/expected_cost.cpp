#include "cert/expected_cost.hpp"

#include "cert/cost_dist.hpp"
#include "cert/stack.hpp"
#include "cert/typecheck.hpp"

#include <memory>

namespace cert {

ECOutcome ECMonad::charge(std::uint64_t c) {
  return ECOutcome{Rational(mpz_class(std::to_string(c), 10)), ValueDist::point(mk::unit())};
}

ECOutcome ECMonad::uniform_nat(std::uint64_t n) {
  ECOutcome out;
  Rational w(1, mpz_class(std::to_string(n), 10));
  w.canonicalize();
  for (std::uint64_t i = 0; i < n; ++i) out.dist.add(mk::nat(i), w);
  return out;
}

ECOutcome ECMonad::mix(const Rational& p, const ECOutcome& left, const ECOutcome& right) {
  ECOutcome out;
  Rational q = 1 - p;
  out.ec = p * left.ec + q * right.ec;
  out.dist.add_scaled(left.dist, p);
  out.dist.add_scaled(right.dist, q);
  return out;
}

ECOutcome eval_ec_outcome(const CompPtr& t, std::uint64_t depth, const std::vector<RunValue>& args) {
  return with_large_stack([&] { return Interpreter<ECMonad>().eval(t, depth, to_stack(args)); });
}

ECResult eval_ec(const CompPtr& t, std::uint64_t depth) {
  auto type = check_program(t);
  auto run = std::make_shared<const ECResult::Runner>(
      [t, depth](const std::vector<RunValue>& args) { return eval_ec_outcome(t, depth, args); });
  return ECResult(type, {}, run);
}

ECOutcome ECMonad::round_down(const ECOutcome& r, std::size_t bits) {
  ECOutcome out{floor_dyadic(r.ec, bits), {}};
  for (const auto& [v, w] : r.dist.entries()) out.dist.add(v, floor_dyadic(w, bits));
  return out;
}

AnalysisReport analyze(const CompPtr& t, double tol, std::uint64_t max_depth, const std::vector<RunValue>& args,
                       std::size_t memo_entries, std::size_t precision_bits) {
  const Rational eps(tol);
  AnalysisReport report;
  run_on_large_stack([&] {
    Interpreter<ECMonad> interp(memo_entries, precision_bits);
    const ArgStack stack = to_stack(args);
    auto step = [&](std::uint64_t depth) {
      auto r = interp.eval(t, depth, stack);
      report.history.push_back(AnalysisStep{depth, r.ec, r.dist.mass()});
    };
    std::uint64_t depth = 1;
    step(depth);
    while (depth <= max_depth / 2) {
      depth *= 2;
      step(depth);
      const auto& prev = report.history[report.history.size() - 2];
      const auto& cur = report.history.back();
      if (cur.mass > 0 && abs(cur.ec - prev.ec) < eps && abs(cur.mass - prev.mass) < eps) {
        report.converged = true;
        break;
      }
    }
  });
  const auto& last = report.history.back();
  report.ec = last.ec;
  report.mass = last.mass;
  report.depth = last.depth;
  return report;
}

namespace {

class PreEvaluator;

class Cont {
 public:
  virtual ~Cont() = default;
  Rational operator()(const RunValue& v) {
    for (const auto& [k, r] : seen_) {
      if (RunValueEq{}(k, v)) return r;
    }
    Rational r = call(v);
    seen_.emplace_back(v, r);
    return r;
  }

 protected:
  virtual Rational call(const RunValue& v) = 0;

 private:
  std::vector<std::pair<RunValue, Rational>> seen_;
};

using ContPtr = std::shared_ptr<Cont>;

class RewardCont : public Cont {
 public:
  explicit RewardCont(const Reward& f) : f_(f) {}

 protected:
  Rational call(const RunValue& v) override { return f_(v); }

 private:
  const Reward& f_;
};

class PreEvaluator {
 public:
  Rational eval(CompPtr t, std::uint64_t depth, ArgStack stack, const ContPtr& k);

 private:
  LruCache<FixKey, std::pair<Rational, ContPtr>, FixKeyHash> memo_{kDefaultMemoEntries};
  Unfolder unfold_;
};

class BindCont : public Cont {
 public:
  BindCont(PreEvaluator& ev, CompPtr body, std::string x, std::uint64_t depth, ArgStack stack, ContPtr next)
      : ev_(ev), body_(std::move(body)), x_(std::move(x)), depth_(depth), stack_(std::move(stack)), next_(std::move(next)) {}

 protected:
  Rational call(const RunValue& v) override { return ev_.eval(substitute(body_, x_, v), depth_, stack_, next_); }

 private:
  PreEvaluator& ev_;
  CompPtr body_;
  std::string x_;
  std::uint64_t depth_;
  ArgStack stack_;
  ContPtr next_;
};

Rational PreEvaluator::eval(CompPtr t, std::uint64_t depth, ArgStack stack, const ContPtr& k) {
  for (;;) {
    if (administrative_step(t, stack)) continue;
    switch (t->kind) {
      case CompKind::Produce: return (*k)(eval_value(t->v));
      case CompKind::Charge:
        return Rational(mpz_class(std::to_string(as_cost(eval_value(t->v))), 10)) + (*k)(mk::unit());
      case CompKind::PrimOp: return (*k)(eval_prim(t));
      case CompKind::RandNat: {
        auto n = rand_bound(t);
        Rational sum = 0;
        for (std::uint64_t i = 0; i < n; ++i) sum += (*k)(mk::nat(i));
        return sum / Rational(mpz_class(std::to_string(n), 10));
      }
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
        Rational l = eval(t->t, depth, stack, k);
        Rational r = eval(t->u, depth, stack, k);
        return t->p * l + (1 - t->p) * r;
      }
      case CompKind::Bind: {
        auto next = std::make_shared<BindCont>(*this, t->u, t->x, depth, std::move(stack), k);
        return eval(t->t, depth, {}, next);
      }
      case CompKind::Fix: {
        if (depth == 0) return 0;
        FixKey key{t, depth, stack, k.get()};
        if (const auto* hit = memo_.get(key)) return hit->first;
        Rational r = eval(unfold_(t), depth - 1, std::move(stack), k);
        memo_.put(std::move(key), {r, k});
        return r;
      }
      default: stuck_term("unexpected computation form");
    }
  }
}

}  // namespace

Rational eval_pre(const CompPtr& t, const Reward& reward, std::uint64_t depth, const std::vector<RunValue>& args) {
  return with_large_stack([&] {
    PreEvaluator ev;
    return ev.eval(t, depth, to_stack(args), std::make_shared<RewardCont>(reward));
  });
}

FactorizationReport check_factorization(const CompPtr& t, const Reward& reward, std::uint64_t depth,
                                        const std::vector<RunValue>& args) {
  FactorizationReport rep;
  rep.pre = eval_pre(t, reward, depth, args);
  auto ec = eval_ec_outcome(t, depth, args);
  rep.factored = ec.ec;
  for (const auto& [v, w] : ec.dist.entries()) rep.factored += w * reward(v);
  rep.discrepancy = rep.pre - rep.factored;
  rep.equal = sgn(rep.discrepancy) == 0;
  return rep;
}

ECOutcome expectation_morphism(const CostDist& d) {
  ECOutcome out;
  out.ec = expected_of_marginal(d);
  for (const auto& [o, w] : d.entries()) out.dist.add(o.value, w);
  return out;
}

}  // namespace cert
