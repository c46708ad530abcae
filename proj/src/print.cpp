#include "cert/parse.hpp"

namespace cert {

namespace {

std::string vatom(const ValuePtr& v);
std::string catom(const CompPtr& t);
std::string comp(const CompPtr& t);

std::string real_literal(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str() + "/1";
  return to_string(q);
}

std::string vterm(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Cons: return "cons " + vatom(v->a) + " " + vatom(v->b);
    case ValueKind::Thunk: return "thunk (" + comp(v->body) + ")";
    default: return vatom(v);
  }
}

std::string value(const ValuePtr& v) {
  if (v->kind == ValueKind::CostAdd) {
    std::string r = v->b->kind == ValueKind::CostAdd ? "(" + value(v->b) + ")" : vterm(v->b);
    return value(v->a) + " + " + r;
  }
  return vterm(v);
}

std::string vatom(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Var: return v->name;
    case ValueKind::Unit: return "()";
    case ValueKind::Nat: return std::to_string(v->num);
    case ValueKind::Real: return real_literal(v->real);
    case ValueKind::CostLit: return "#" + std::to_string(v->num);
    case ValueKind::Pair: return "(" + value(v->a) + ", " + value(v->b) + ")";
    case ValueKind::Nil: return v->annot ? "(nil : " + to_string(v->annot) + ")" : "nil";
    case ValueKind::CostAdd:
    case ValueKind::Thunk:
    case ValueKind::Cons: return "(" + value(v) + ")";
  }
  return "?";
}

bool open_ended(const CompPtr& t) {
  switch (t->kind) {
    case CompKind::Lam:
    case CompKind::Fix:
    case CompKind::LetVal:
    case CompKind::Unpair:
    case CompKind::CaseList:
    case CompKind::IfZero:
    case CompKind::Bind: return true;
    default: return false;
  }
}

std::string binder(const std::string& x) { return x; }

std::string expr(const CompPtr& t) {
  switch (t->kind) {
    case CompKind::Lam: {
      std::string annot = t->xtype ? " : " + to_string(t->xtype) : "";
      return "\\" + binder(t->x) + annot + ". " + comp(t->t);
    }
    case CompKind::Fix: {
      std::string annot = t->ctype ? " : " + to_string(t->ctype) : "";
      return "fix " + t->x + annot + ". " + comp(t->t);
    }
    case CompKind::LetVal: return "let " + t->x + " = " + value(t->v) + " in " + comp(t->t);
    case CompKind::Unpair:
      return "unpair " + value(t->v) + " as (" + t->x + ", " + t->y + ") in " + comp(t->t);
    case CompKind::CaseList:
      return "case " + value(t->v) + " of nil => " + comp(t->t) + " | cons " + t->x + " " + t->y +
             " => " + comp(t->u);
    case CompKind::IfZero:
      return "if0 " + value(t->v) + " then " + comp(t->t) + " else " + comp(t->u);
    case CompKind::Bind: return "(" + comp(t) + ")";
    case CompKind::App: {
      const auto& fn = t->t;
      std::string head;
      if (fn->kind == CompKind::App) {
        head = expr(fn);
      } else if (fn->kind == CompKind::Force || fn->kind == CompKind::Uniform ||
                 fn->kind == CompKind::Charge || fn->kind == CompKind::Choose) {
        head = catom(fn);
      } else {
        head = "(" + comp(fn) + ")";
      }
      return head + " " + vatom(t->v);
    }
    default: return catom(t);
  }
}

std::string charge_arg(const ValuePtr& v) {
  if (v->kind == ValueKind::CostLit) return std::to_string(v->num);
  if (v->kind == ValueKind::Nat) return "(" + std::to_string(v->num) + ")";
  return value(v);
}

std::string catom(const CompPtr& t) {
  switch (t->kind) {
    case CompKind::Force: return "force " + vatom(t->v);
    case CompKind::Produce: return "produce " + value(t->v);
    case CompKind::Charge: return "charge(" + charge_arg(t->v) + ")";
    case CompKind::Uniform: return "uniform";
    case CompKind::RandNat: return "rand " + value(t->v);
    case CompKind::Choose:
      return "choose " + to_string(t->p) + " {" + comp(t->t) + "} {" + comp(t->u) + "}";
    case CompKind::PrimOp: {
      std::string out(op_keyword(t->op));
      for (const auto& a : t->args) out += " " + vatom(a);
      return out;
    }
    default: return "(" + comp(t) + ")";
  }
}

std::string comp(const CompPtr& t) {
  if (t->kind == CompKind::Bind) {
    std::string bound = open_ended(t->t) ? "(" + comp(t->t) + ")" : expr(t->t);
    std::string prefix = t->x == kWildcard ? "" : t->x + " <- ";
    return prefix + bound + "; " + comp(t->u);
  }
  return expr(t);
}

}  // namespace

std::string pretty_print(const CompPtr& t) { return comp(t); }
std::string pretty_print(const ValuePtr& v) { return value(v); }

}  // namespace cert
