#include "cert/value.hpp"

#include <limits>

namespace cert {

namespace {

[[noreturn]] void arith(const std::string& msg) { throw EvalError(EvalErrorKind::ArithmeticError, msg); }
[[noreturn]] void stuck(const std::string& msg) { throw EvalError(EvalErrorKind::StuckTerm, msg); }

const Rational& as_real(const RunValue& v) {
  if (v->kind != ValueKind::Real) stuck("expected a real, found " + std::string(v->kind == ValueKind::Nat ? "nat" : "value"));
  return v->real;
}

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) arith("natural multiplication overflows");
  return a * b;
}

}  // namespace

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) arith("natural addition overflows");
  return a + b;
}

RunValue eval_value(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Var: stuck("free variable '" + v->name + "' at run time");
    case ValueKind::Unit:
    case ValueKind::Nat:
    case ValueKind::Real:
    case ValueKind::CostLit:
    case ValueKind::Thunk: return v;
    case ValueKind::Nil: return v->annot ? mk::nil() : v;
    case ValueKind::CostAdd: return mk::cost(checked_add(as_cost(eval_value(v->a)), as_cost(eval_value(v->b))));
    case ValueKind::Pair:
    case ValueKind::Cons: {
      auto a = eval_value(v->a), b = eval_value(v->b);
      if (a == v->a && b == v->b) return v;
      return v->kind == ValueKind::Pair ? mk::pair(a, b) : mk::cons(a, b);
    }
  }
  stuck("unknown value form");
}

std::uint64_t as_nat(const RunValue& v) {
  if (v->kind != ValueKind::Nat) stuck("expected a natural number");
  return v->num;
}

std::uint64_t as_cost(const RunValue& v) {
  if (v->kind != ValueKind::Nat && v->kind != ValueKind::CostLit) stuck("expected a cost");
  return v->num;
}

std::vector<RunValue> list_elements(const RunValue& v) {
  std::vector<RunValue> out;
  const Value* cur = v.get();
  while (cur->kind == ValueKind::Cons) {
    out.push_back(cur->a);
    cur = cur->b.get();
  }
  if (cur->kind != ValueKind::Nil) stuck("expected a list");
  return out;
}

RunValue make_list(const std::vector<RunValue>& elems) {
  RunValue out = mk::nil();
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) out = mk::cons(*it, out);
  return out;
}

RunValue apply_op(OpName op, const std::vector<RunValue>& args) {
  if (args.size() != op_signature(op).args.size()) stuck("operator arity mismatch");
  switch (op) {
    case OpName::AddNat: return mk::nat(checked_add(as_nat(args[0]), as_nat(args[1])));
    case OpName::Monus: {
      auto a = as_nat(args[0]), b = as_nat(args[1]);
      return mk::nat(a > b ? a - b : 0);
    }
    case OpName::MulNat: return mk::nat(mul_checked(as_nat(args[0]), as_nat(args[1])));
    case OpName::LeqNat: return mk::nat(as_nat(args[0]) <= as_nat(args[1]) ? 0 : 1);
    case OpName::AddReal: return mk::real(as_real(args[0]) + as_real(args[1]));
    case OpName::SubReal: return mk::real(as_real(args[0]) - as_real(args[1]));
    case OpName::MulReal: return mk::real(as_real(args[0]) * as_real(args[1]));
    case OpName::LeqReal: return mk::nat(as_real(args[0]) <= as_real(args[1]) ? 0 : 1);
    case OpName::FloorToNat: {
      const Rational& q = as_real(args[0]);
      if (sgn(q) < 0) arith("floor of a negative real");
      mpz_class f;
      mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
      if (!f.fits_ulong_p()) arith("floor exceeds the natural range");
      return mk::nat(f.get_ui());
    }
    case OpName::Succ: return mk::nat(checked_add(as_nat(args[0]), 1));
    case OpName::Pred: {
      auto a = as_nat(args[0]);
      return mk::nat(a == 0 ? 0 : a - 1);
    }
    case OpName::NatToReal: return mk::real(Rational(mpz_class(std::to_string(as_nat(args[0])), 10)));
  }
  stuck("unknown operator");
}

}  // namespace cert
