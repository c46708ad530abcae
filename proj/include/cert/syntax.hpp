#pragma once

// Abstract syntax of the cert language: value/computation types, value and
// computation terms, free variables, capture-avoiding substitution and
// alpha-equivalence.

#include "cert/errors.hpp"
#include "cert/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cert {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct ValueType;
struct CompType;
using VType = std::shared_ptr<const ValueType>;
using CType = std::shared_ptr<const CompType>;

enum class VKind { Unit, Nat, Real, Cost, Prod, List, U };
enum class CKind { F, Arrow };

struct ValueType {
  VKind kind;
  VType left;   // Prod left, List element
  VType right;  // Prod right
  CType body;   // U
};

struct CompType {
  CKind kind;
  VType arg;  // F: produced type; Arrow: domain
  CType out;  // Arrow codomain
};

namespace ty {
VType unit();
VType nat();
VType real();
VType cost();
VType prod(VType l, VType r);
VType list(VType elem);
VType u(CType body);
CType f(VType result);
CType arrow(VType arg, CType out);
}  // namespace ty

bool type_equal(const VType& a, const VType& b);
bool type_equal(const CType& a, const CType& b);
std::string to_string(const VType& t);
std::string to_string(const CType& t);

/// Either kind of type, used where an error may mention both.
using AnyType = std::variant<VType, CType>;
std::string to_string(const AnyType& t);

// ---------------------------------------------------------------------------
// Primitive operations
// ---------------------------------------------------------------------------

enum class OpName {
  AddNat,
  Monus,
  MulNat,
  LeqNat,
  AddReal,
  SubReal,
  MulReal,
  LeqReal,
  FloorToNat,
  Succ,
  Pred,
  NatToReal,
};

struct OpSignature {
  std::vector<VType> args;
  VType result;
};

const OpSignature& op_signature(OpName op);
std::string_view op_keyword(OpName op);
std::optional<OpName> op_from_keyword(std::string_view word);
const std::vector<OpName>& all_ops();

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Value;
struct Comp;
using ValuePtr = std::shared_ptr<const Value>;
using CompPtr = std::shared_ptr<const Comp>;

/// Sorted, duplicate-free free-variable set; null means empty.
using FreeVars = std::shared_ptr<const std::vector<std::string>>;

enum class ValueKind { Var, Unit, Nat, Real, CostLit, CostAdd, Thunk, Pair, Nil, Cons };

enum class CompKind {
  Lam,
  App,
  IfZero,
  Force,
  Bind,
  Produce,
  LetVal,
  Unpair,
  CaseList,
  Charge,
  Uniform,
  RandNat,
  Choose,
  Fix,
  PrimOp,
};

struct Value {
  ValueKind kind;
  std::string name;       // Var
  std::uint64_t num = 0;  // Nat, CostLit
  Rational real;          // Real
  ValuePtr a, b;          // CostAdd, Pair, Cons (head, tail)
  CompPtr body;           // Thunk
  VType annot;            // Nil (optional list type)
  Span span;
  std::size_t hash = 0;  // alpha-invariant
  FreeVars fv;
};

struct Comp {
  CompKind kind;
  // Binders: Lam x; Bind x; LetVal x; Unpair x, y; CaseList head x, tail y; Fix x.
  std::string x, y;
  VType xtype;  // Lam argument annotation (optional)
  CType ctype;  // Fix annotation (optional)
  ValuePtr v;   // App arg, IfZero guard, Force, Produce, LetVal, Unpair, CaseList, Charge, RandNat
  CompPtr t;    // Lam/Fix body, App fn, IfZero zero branch, Bind bound, LetVal/Unpair body,
                // CaseList nil branch, Choose left
  CompPtr u;    // IfZero succ branch, Bind continuation, CaseList cons branch, Choose right
  Rational p;   // Choose: probability of the left branch
  OpName op = OpName::Succ;
  std::vector<ValuePtr> args;  // PrimOp
  Span span;
  std::size_t hash = 0;  // alpha-invariant
  FreeVars fv;
};

/// Binder name used by the `t; u` sugar. Never a valid identifier, so it is
/// never referenced.
inline constexpr std::string_view kWildcard = "_";

namespace mk {
ValuePtr var(std::string name, Span s = {});
ValuePtr unit(Span s = {});
ValuePtr nat(std::uint64_t n, Span s = {});
ValuePtr real(Rational q, Span s = {});
ValuePtr cost(std::uint64_t c, Span s = {});
ValuePtr cost_add(ValuePtr l, ValuePtr r, Span s = {});
ValuePtr thunk(CompPtr body, Span s = {});
ValuePtr pair(ValuePtr l, ValuePtr r, Span s = {});
ValuePtr nil(VType annot = nullptr, Span s = {});
ValuePtr cons(ValuePtr head, ValuePtr tail, Span s = {});

CompPtr lam(std::string x, CompPtr body, VType annot = nullptr, Span s = {});
CompPtr app(CompPtr fn, ValuePtr arg, Span s = {});
CompPtr if0(ValuePtr guard, CompPtr zero, CompPtr succ, Span s = {});
CompPtr force(ValuePtr v, Span s = {});
CompPtr bind(std::string x, CompPtr bound, CompPtr cont, Span s = {});
CompPtr seq(CompPtr first, CompPtr then, Span s = {});
CompPtr produce(ValuePtr v, Span s = {});
CompPtr let(std::string x, ValuePtr v, CompPtr body, Span s = {});
CompPtr unpair(std::string x, std::string y, ValuePtr v, CompPtr body, Span s = {});
CompPtr case_list(ValuePtr v, CompPtr nil_branch, std::string head, std::string tail,
                  CompPtr cons_branch, Span s = {});
CompPtr charge(ValuePtr c, Span s = {});
CompPtr uniform(Span s = {});
CompPtr rand(ValuePtr n, Span s = {});
/// Throws std::invalid_argument unless 0 <= p <= 1.
CompPtr choose(Rational p, CompPtr left, CompPtr right, Span s = {});
CompPtr fix(std::string x, CompPtr body, CType annot = nullptr, Span s = {});
/// Throws std::invalid_argument on arity mismatch.
CompPtr prim(OpName op, std::vector<ValuePtr> args, Span s = {});
}  // namespace mk

// ---------------------------------------------------------------------------
// Structure
// ---------------------------------------------------------------------------

using Subterm = std::variant<CompPtr, ValuePtr>;

/// Immediate subterms in syntax order; paths index into this list.
std::vector<Subterm> children(const CompPtr& t);
std::vector<Subterm> children(const ValuePtr& v);
/// Copy of `t` with child `index` replaced (kinds must agree).
CompPtr with_child(const CompPtr& t, std::size_t index, const Subterm& child);
ValuePtr with_child(const ValuePtr& v, std::size_t index, const Subterm& child);

bool is_free(const FreeVars& fv, std::string_view x);
inline bool is_closed(const CompPtr& t) { return !t->fv || t->fv->empty(); }
inline bool is_closed(const ValuePtr& v) { return !v->fv || v->fv->empty(); }

/// True when no Fix node occurs anywhere (including inside thunks).
bool is_fix_free(const CompPtr& t);
/// True when no Uniform node occurs anywhere.
bool is_discrete(const CompPtr& t);
std::size_t term_size(const CompPtr& t);

// ---------------------------------------------------------------------------
// Substitution and equality
// ---------------------------------------------------------------------------

using Bindings = std::vector<std::pair<std::string, ValuePtr>>;

/// Simultaneous capture-avoiding substitution. Subterms not mentioning any of
/// the substituted variables are returned unchanged (pointer-identical).
CompPtr substitute(const CompPtr& t, const Bindings& sub);
ValuePtr substitute(const ValuePtr& v, const Bindings& sub);
CompPtr substitute(const CompPtr& t, const std::string& x, const ValuePtr& v);

/// Total order modulo renaming of bound variables (annotations included).
int compare_alpha(const CompPtr& a, const CompPtr& b);
int compare_alpha(const ValuePtr& a, const ValuePtr& b);
inline bool alpha_equal(const CompPtr& a, const CompPtr& b) { return compare_alpha(a, b) == 0; }
inline bool alpha_equal(const ValuePtr& a, const ValuePtr& b) { return compare_alpha(a, b) == 0; }

/// Exact structural equality including binder names; spans are ignored.
bool structurally_equal(const CompPtr& a, const CompPtr& b);
bool structurally_equal(const ValuePtr& a, const ValuePtr& b);

/// A name not occurring in `avoid`, derived from `base`.
std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid);

}  // namespace cert
