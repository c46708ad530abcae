#include "cert/typecheck.hpp"

namespace cert {

std::string_view type_error_kind_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::Mismatch: return "Mismatch";
    case TypeErrorKind::NotAFunction: return "NotAFunction";
    case TypeErrorKind::NotAThunk: return "NotAThunk";
    case TypeErrorKind::NotF: return "NotF";
    case TypeErrorKind::NotList: return "NotList";
    case TypeErrorKind::NotProd: return "NotProd";
    case TypeErrorKind::ArityError: return "ArityError";
    case TypeErrorKind::MissingAnnotation: return "MissingAnnotation";
  }
  return "TypeError";
}

namespace {

std::string describe(TypeErrorKind kind, const std::string& detail, const std::optional<AnyType>& expected,
                     const std::optional<AnyType>& found) {
  std::string out(type_error_kind_name(kind));
  out += ": ";
  if (expected && found) {
    out += "expected " + to_string(*expected) + ", found " + to_string(*found);
  } else if (found) {
    out += detail + " (found " + to_string(*found) + ")";
  } else {
    out += detail;
  }
  return out;
}

}  // namespace

TypeError::TypeError(TypeErrorKind kind, Span where, std::string detail, std::optional<AnyType> expected,
                     std::optional<AnyType> found)
    : CertError(describe(kind, detail, expected, found)),
      kind_(kind),
      where_(where),
      detail_(std::move(detail)),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string TypeError::render(std::string_view file) const {
  return std::string(file) + ":" + std::to_string(where_.line) + ":" + std::to_string(where_.col) + ": " + what();
}

namespace {

class Checker {
 public:
  explicit Checker(Context ctx) : ctx_(std::move(ctx)) {}

  VType value(const ValuePtr& v, const VType& expected) {
    VType got = synth_value(v, expected);
    if (expected && !type_equal(expected, got)) {
      throw TypeError(TypeErrorKind::Mismatch, v->span, "value type", AnyType{expected}, AnyType{got});
    }
    return got;
  }

  CType comp(const CompPtr& t, const CType& expected) {
    CType got = synth_comp(t, expected);
    if (expected && !type_equal(expected, got)) {
      throw TypeError(TypeErrorKind::Mismatch, t->span, "computation type", AnyType{expected}, AnyType{got});
    }
    return got;
  }

 private:
  Context ctx_;

  struct Scope {
    Checker& c;
    std::size_t n;
    Scope(Checker& c, std::initializer_list<std::pair<std::string, VType>> binds) : c(c), n(binds.size()) {
      for (const auto& b : binds) c.ctx_.push_back(b);
    }
    ~Scope() { c.ctx_.resize(c.ctx_.size() - n); }
  };

  VType lookup(const ValuePtr& v) const {
    for (auto it = ctx_.rbegin(); it != ctx_.rend(); ++it) {
      if (it->first == v->name) return it->second;
    }
    throw TypeError(TypeErrorKind::UnboundVariable, v->span, "unbound variable '" + v->name + "'");
  }

  VType synth_value(const ValuePtr& v, const VType& expected) {
    switch (v->kind) {
      case ValueKind::Var: return lookup(v);
      case ValueKind::Unit: return ty::unit();
      case ValueKind::Nat: return ty::nat();
      case ValueKind::Real: return ty::real();
      case ValueKind::CostLit: return ty::cost();
      case ValueKind::CostAdd:
        value(v->a, ty::cost());
        value(v->b, ty::cost());
        return ty::cost();
      case ValueKind::Thunk: {
        CType hint = expected && expected->kind == VKind::U ? expected->body : nullptr;
        return ty::u(synth_comp_checked(v->body, hint));
      }
      case ValueKind::Pair: {
        bool split = expected && expected->kind == VKind::Prod;
        auto l = value(v->a, split ? expected->left : nullptr);
        auto r = value(v->b, split ? expected->right : nullptr);
        return ty::prod(l, r);
      }
      case ValueKind::Nil: {
        if (v->annot) {
          if (v->annot->kind != VKind::List) {
            throw TypeError(TypeErrorKind::NotList, v->span, "nil annotation is not a list type", std::nullopt,
                            AnyType{v->annot});
          }
          return v->annot;
        }
        if (expected && expected->kind == VKind::List) return expected;
        throw TypeError(TypeErrorKind::MissingAnnotation, v->span, "cannot infer the element type of nil");
      }
      case ValueKind::Cons: {
        if (expected && expected->kind == VKind::List) {
          value(v->a, expected->left);
          value(v->b, expected);
          return expected;
        }
        auto h = value(v->a, nullptr);
        auto lt = ty::list(h);
        value(v->b, lt);
        return lt;
      }
    }
    throw TypeError(TypeErrorKind::Mismatch, v->span, "unknown value form");
  }

  CType synth_comp_checked(const CompPtr& t, const CType& hint) {
    CType got = synth_comp(t, hint);
    if (hint && !type_equal(hint, got)) {
      throw TypeError(TypeErrorKind::Mismatch, t->span, "computation type", AnyType{hint}, AnyType{got});
    }
    return got;
  }

  VType cost_like(const ValuePtr& c) {
    auto got = value(c, nullptr);
    if (got->kind != VKind::Cost && got->kind != VKind::Nat) {
      throw TypeError(TypeErrorKind::Mismatch, c->span, "charge amount", AnyType{ty::cost()}, AnyType{got});
    }
    return got;
  }

  CType synth_comp(const CompPtr& t, const CType& expected) {
    switch (t->kind) {
      case CompKind::Lam: {
        VType arg = t->xtype;
        CType out_hint;
        if (expected) {
          if (expected->kind != CKind::Arrow) {
            throw TypeError(TypeErrorKind::Mismatch, t->span, "lambda checked against a non-function type",
                            AnyType{expected}, std::nullopt);
          }
          if (!arg) arg = expected->arg;
          out_hint = expected->out;
        }
        if (!arg) {
          throw TypeError(TypeErrorKind::MissingAnnotation, t->span, "lambda parameter '" + t->x + "' needs a type");
        }
        Scope s(*this, {{t->x, arg}});
        return ty::arrow(arg, comp(t->t, out_hint));
      }
      case CompKind::App: {
        if (t->t->kind == CompKind::Lam && !t->t->xtype) {
          auto arg = value(t->v, nullptr);
          Scope s(*this, {{t->t->x, arg}});
          return comp(t->t->t, expected);
        }
        auto fn = comp(t->t, nullptr);
        if (fn->kind != CKind::Arrow) {
          throw TypeError(TypeErrorKind::NotAFunction, t->span, "applied computation is not a function",
                          std::nullopt, AnyType{fn});
        }
        value(t->v, fn->arg);
        return fn->out;
      }
      case CompKind::IfZero: {
        value(t->v, ty::nat());
        auto z = comp(t->t, expected);
        comp(t->u, z);
        return z;
      }
      case CompKind::Force: {
        auto vt = synth_value(t->v, expected ? ty::u(expected) : nullptr);
        if (vt->kind != VKind::U) {
          throw TypeError(TypeErrorKind::NotAThunk, t->v->span, "forced value is not a thunk", std::nullopt,
                          AnyType{vt});
        }
        return vt->body;
      }
      case CompKind::Bind: {
        auto b = comp(t->t, nullptr);
        if (b->kind != CKind::F) {
          throw TypeError(TypeErrorKind::NotF, t->t->span, "bound computation must have type F", std::nullopt,
                          AnyType{b});
        }
        Scope s(*this, {{t->x, b->arg}});
        return comp(t->u, expected);
      }
      case CompKind::Produce: {
        VType hint = expected && expected->kind == CKind::F ? expected->arg : nullptr;
        return ty::f(value(t->v, hint));
      }
      case CompKind::LetVal: {
        auto vt = value(t->v, nullptr);
        Scope s(*this, {{t->x, vt}});
        return comp(t->t, expected);
      }
      case CompKind::Unpair: {
        auto vt = value(t->v, nullptr);
        if (vt->kind != VKind::Prod) {
          throw TypeError(TypeErrorKind::NotProd, t->v->span, "unpaired value is not a product", std::nullopt,
                          AnyType{vt});
        }
        Scope s(*this, {{t->x, vt->left}, {t->y, vt->right}});
        return comp(t->t, expected);
      }
      case CompKind::CaseList: {
        auto vt = value(t->v, nullptr);
        if (vt->kind != VKind::List) {
          throw TypeError(TypeErrorKind::NotList, t->v->span, "scrutinee is not a list", std::nullopt, AnyType{vt});
        }
        auto nb = comp(t->t, expected);
        Scope s(*this, {{t->x, vt->left}, {t->y, vt}});
        comp(t->u, nb);
        return nb;
      }
      case CompKind::Charge:
        cost_like(t->v);
        return ty::f(ty::unit());
      case CompKind::Uniform: return ty::f(ty::real());
      case CompKind::RandNat:
        value(t->v, ty::nat());
        return ty::f(ty::nat());
      case CompKind::Choose: {
        auto l = comp(t->t, expected);
        comp(t->u, l);
        return l;
      }
      case CompKind::Fix: {
        CType c = t->ctype ? t->ctype : expected;
        if (!c) {
          throw TypeError(TypeErrorKind::MissingAnnotation, t->span, "fix '" + t->x + "' needs a type ascription");
        }
        Scope s(*this, {{t->x, ty::u(c)}});
        comp(t->t, c);
        return c;
      }
      case CompKind::PrimOp: {
        const auto& sig = op_signature(t->op);
        if (sig.args.size() != t->args.size()) {
          throw TypeError(TypeErrorKind::ArityError, t->span,
                          "operator '" + std::string(op_keyword(t->op)) + "' expects " +
                              std::to_string(sig.args.size()) + " arguments");
        }
        for (std::size_t i = 0; i < sig.args.size(); ++i) value(t->args[i], sig.args[i]);
        return ty::f(sig.result);
      }
    }
    throw TypeError(TypeErrorKind::Mismatch, t->span, "unknown computation form");
  }
};

}  // namespace

VType check_value(const Context& ctx, const ValuePtr& v, const VType& expected) {
  return Checker(ctx).value(v, expected);
}

CType check_comp(const Context& ctx, const CompPtr& t, const CType& expected) {
  return Checker(ctx).comp(t, expected);
}

CType check_program(const CompPtr& t) {
  auto c = check_comp({}, t);
  if (!is_closed(t)) {
    throw TypeError(TypeErrorKind::UnboundVariable, t->span, "program has free variable '" + t->fv->front() + "'");
  }
  return c;
}

}  // namespace cert
