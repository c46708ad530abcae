#include "cert/cost_dist.hpp"

#include "cert/stack.hpp"
#include "cert/typecheck.hpp"

namespace cert {

CostDist CostMonad::uniform_nat(std::uint64_t n) {
  CostDist d;
  Rational w(1, mpz_class(std::to_string(n), 10));
  w.canonicalize();
  for (std::uint64_t i = 0; i < n; ++i) d.add(Outcome{0, mk::nat(i)}, w);
  return d;
}

CostDist CostMonad::mix(const Rational& p, const CostDist& left, const CostDist& right) {
  CostDist d;
  d.add_scaled(left, p);
  d.add_scaled(right, 1 - p);
  return d;
}

CostDist eval_cost_dist(const CompPtr& t, std::uint64_t depth, const std::vector<RunValue>& args) {
  return with_large_stack([&] { return Interpreter<CostMonad>().eval(t, depth, to_stack(args)); });
}

CostSemResult eval_cost(const CompPtr& t, std::uint64_t depth) {
  auto type = check_program(t);
  auto run = std::make_shared<const CostSemResult::Runner>(
      [t, depth](const std::vector<RunValue>& args) { return eval_cost_dist(t, depth, args); });
  return CostSemResult(type, {}, run);
}

Rational expected_of_marginal(const CostDist& d) {
  Rational e = 0;
  for (const auto& [o, w] : d.entries()) e += Rational(mpz_class(std::to_string(o.cost), 10)) * w;
  return e;
}

Rational mass(const CostDist& d) { return d.mass(); }

}  // namespace cert
