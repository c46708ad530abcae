#include "cert/syntax.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace cert {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

VType make_vtype(VKind k, VType l = nullptr, VType r = nullptr, CType body = nullptr) {
  return std::make_shared<const ValueType>(ValueType{k, std::move(l), std::move(r), std::move(body)});
}

}  // namespace

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

namespace ty {
VType unit() {
  static const VType t = make_vtype(VKind::Unit);
  return t;
}
VType nat() {
  static const VType t = make_vtype(VKind::Nat);
  return t;
}
VType real() {
  static const VType t = make_vtype(VKind::Real);
  return t;
}
VType cost() {
  static const VType t = make_vtype(VKind::Cost);
  return t;
}
VType prod(VType l, VType r) { return make_vtype(VKind::Prod, std::move(l), std::move(r)); }
VType list(VType elem) { return make_vtype(VKind::List, std::move(elem)); }
VType u(CType body) { return make_vtype(VKind::U, nullptr, nullptr, std::move(body)); }
CType f(VType result) { return std::make_shared<const CompType>(CompType{CKind::F, std::move(result), nullptr}); }
CType arrow(VType arg, CType out) {
  return std::make_shared<const CompType>(CompType{CKind::Arrow, std::move(arg), std::move(out)});
}
}  // namespace ty

namespace {

int type_compare(const CType& a, const CType& b);

int type_compare(const VType& a, const VType& b) {
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case VKind::Prod:
      if (int c = type_compare(a->left, b->left)) return c;
      return type_compare(a->right, b->right);
    case VKind::List: return type_compare(a->left, b->left);
    case VKind::U: return type_compare(a->body, b->body);
    default: return 0;
  }
}

int type_compare(const CType& a, const CType& b) {
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = type_compare(a->arg, b->arg)) return c;
  if (a->kind == CKind::Arrow) return type_compare(a->out, b->out);
  return 0;
}

std::string vatom_string(const VType& t);

std::string ctype_string(const CType& t) {
  if (t->kind == CKind::F) return "F " + vatom_string(t->arg);
  return to_string(t->arg) + " -> " + ctype_string(t->out);
}

std::string vatom_string(const VType& t) {
  if (t->kind == VKind::Prod || t->kind == VKind::List) return "(" + to_string(t) + ")";
  return to_string(t);
}

}  // namespace

bool type_equal(const VType& a, const VType& b) { return type_compare(a, b) == 0; }
bool type_equal(const CType& a, const CType& b) { return type_compare(a, b) == 0; }

std::string to_string(const VType& t) {
  switch (t->kind) {
    case VKind::Unit: return "unit";
    case VKind::Nat: return "nat";
    case VKind::Real: return "real";
    case VKind::Cost: return "cost";
    case VKind::Prod: {
      std::string l = to_string(t->left);
      if (t->left->kind == VKind::Prod) l = "(" + l + ")";
      return l + " * " + to_string(t->right);
    }
    case VKind::List: return "list " + vatom_string(t->left);
    case VKind::U:
      if (t->body->kind == CKind::F) return "U " + ctype_string(t->body);
      return "U (" + ctype_string(t->body) + ")";
  }
  return "?";
}

std::string to_string(const CType& t) { return ctype_string(t); }

std::string to_string(const AnyType& t) {
  return std::visit([](const auto& x) { return to_string(x); }, t);
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

namespace {

struct OpInfo {
  OpName op;
  std::string_view keyword;
  OpSignature sig;
};

const std::vector<OpInfo>& op_table() {
  static const std::vector<OpInfo> table = [] {
    auto n = ty::nat();
    auto r = ty::real();
    return std::vector<OpInfo>{
        {OpName::AddNat, "add", {{n, n}, n}},
        {OpName::Monus, "monus", {{n, n}, n}},
        {OpName::MulNat, "mul", {{n, n}, n}},
        {OpName::LeqNat, "leq", {{n, n}, n}},
        {OpName::AddReal, "addr", {{r, r}, r}},
        {OpName::SubReal, "subr", {{r, r}, r}},
        {OpName::MulReal, "mulr", {{r, r}, r}},
        {OpName::LeqReal, "leqr", {{r, r}, n}},
        {OpName::FloorToNat, "floor", {{r}, n}},
        {OpName::Succ, "succ", {{n}, n}},
        {OpName::Pred, "pred", {{n}, n}},
        {OpName::NatToReal, "toreal", {{n}, r}},
    };
  }();
  return table;
}

const OpInfo& op_info(OpName op) {
  for (const auto& info : op_table()) {
    if (info.op == op) return info;
  }
  throw std::logic_error("unknown operator");
}

}  // namespace

const OpSignature& op_signature(OpName op) { return op_info(op).sig; }
std::string_view op_keyword(OpName op) { return op_info(op).keyword; }

std::optional<OpName> op_from_keyword(std::string_view word) {
  for (const auto& info : op_table()) {
    if (info.keyword == word) return info.op;
  }
  return std::nullopt;
}

const std::vector<OpName>& all_ops() {
  static const std::vector<OpName> ops = [] {
    std::vector<OpName> out;
    for (const auto& info : op_table()) out.push_back(info.op);
    return out;
  }();
  return ops;
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

namespace {

FreeVars fv_single(const std::string& x) {
  return std::make_shared<const std::vector<std::string>>(std::vector<std::string>{x});
}

FreeVars fv_union(const FreeVars& a, const FreeVars& b) {
  if (!a || a->empty()) return b;
  if (!b || b->empty() || a == b) return a;
  std::vector<std::string> out;
  out.reserve(a->size() + b->size());
  std::set_union(a->begin(), a->end(), b->begin(), b->end(), std::back_inserter(out));
  if (out.size() == a->size()) return a;
  if (out.size() == b->size()) return b;
  return std::make_shared<const std::vector<std::string>>(std::move(out));
}

FreeVars fv_remove(const FreeVars& a, const std::string& x, const std::string& y = {}) {
  if (!a) return a;
  bool hx = std::binary_search(a->begin(), a->end(), x);
  bool hy = !y.empty() && std::binary_search(a->begin(), a->end(), y);
  if (!hx && !hy) return a;
  std::vector<std::string> out;
  out.reserve(a->size());
  for (const auto& n : *a) {
    if (n != x && (y.empty() || n != y)) out.push_back(n);
  }
  if (out.empty()) return nullptr;
  return std::make_shared<const std::vector<std::string>>(std::move(out));
}

std::shared_ptr<Value> new_value(ValueKind k, Span s) {
  auto v = std::make_shared<Value>();
  v->kind = k;
  v->span = s;
  v->hash = mix(0x51ed270b27d4cb8fULL, static_cast<std::size_t>(k));
  return v;
}

std::shared_ptr<Comp> new_comp(CompKind k, Span s) {
  auto c = std::make_shared<Comp>();
  c->kind = k;
  c->span = s;
  c->hash = mix(0x2545f4914f6cdd1dULL, static_cast<std::size_t>(k));
  return c;
}

std::size_t type_hash(const VType& t);
std::size_t type_hash(const CType& t) {
  if (!t) return 7;
  std::size_t h = mix(static_cast<std::size_t>(t->kind) + 11, type_hash(t->arg));
  if (t->out) h = mix(h, type_hash(t->out));
  return h;
}
std::size_t type_hash(const VType& t) {
  if (!t) return 5;
  std::size_t h = static_cast<std::size_t>(t->kind) + 3;
  if (t->left) h = mix(h, type_hash(t->left));
  if (t->right) h = mix(h, type_hash(t->right));
  if (t->body) h = mix(h, type_hash(t->body));
  return h;
}

ValuePtr binary_value(ValueKind k, ValuePtr l, ValuePtr r, Span s) {
  auto v = new_value(k, s);
  v->hash = mix(mix(v->hash, l->hash), r->hash);
  v->fv = fv_union(l->fv, r->fv);
  v->a = std::move(l);
  v->b = std::move(r);
  return v;
}

}  // namespace

bool is_free(const FreeVars& fv, std::string_view x) {
  if (!fv) return false;
  return std::binary_search(fv->begin(), fv->end(), x,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace mk {

ValuePtr var(std::string name, Span s) {
  auto v = new_value(ValueKind::Var, s);
  v->fv = fv_single(name);
  v->name = std::move(name);
  return v;
}

ValuePtr unit(Span s) { return new_value(ValueKind::Unit, s); }

ValuePtr nat(std::uint64_t n, Span s) {
  auto v = new_value(ValueKind::Nat, s);
  v->num = n;
  v->hash = mix(v->hash, std::hash<std::uint64_t>{}(n));
  return v;
}

ValuePtr real(Rational q, Span s) {
  auto v = new_value(ValueKind::Real, s);
  q.canonicalize();
  v->hash = mix(v->hash, hash_rational(q));
  v->real = std::move(q);
  return v;
}

ValuePtr cost(std::uint64_t c, Span s) {
  auto v = new_value(ValueKind::CostLit, s);
  v->num = c;
  v->hash = mix(v->hash, std::hash<std::uint64_t>{}(c));
  return v;
}

ValuePtr cost_add(ValuePtr l, ValuePtr r, Span s) {
  return binary_value(ValueKind::CostAdd, std::move(l), std::move(r), s);
}

ValuePtr thunk(CompPtr body, Span s) {
  auto v = new_value(ValueKind::Thunk, s);
  v->hash = mix(v->hash, body->hash);
  v->fv = body->fv;
  v->body = std::move(body);
  return v;
}

ValuePtr pair(ValuePtr l, ValuePtr r, Span s) {
  return binary_value(ValueKind::Pair, std::move(l), std::move(r), s);
}

ValuePtr nil(VType annot, Span s) {
  auto v = new_value(ValueKind::Nil, s);
  v->hash = mix(v->hash, type_hash(annot));
  v->annot = std::move(annot);
  return v;
}

ValuePtr cons(ValuePtr head, ValuePtr tail, Span s) {
  return binary_value(ValueKind::Cons, std::move(head), std::move(tail), s);
}

CompPtr lam(std::string x, CompPtr body, VType annot, Span s) {
  auto c = new_comp(CompKind::Lam, s);
  c->hash = mix(mix(c->hash, body->hash), type_hash(annot));
  c->fv = fv_remove(body->fv, x);
  c->x = std::move(x);
  c->t = std::move(body);
  c->xtype = std::move(annot);
  return c;
}

CompPtr app(CompPtr fn, ValuePtr arg, Span s) {
  auto c = new_comp(CompKind::App, s);
  c->hash = mix(mix(c->hash, fn->hash), arg->hash);
  c->fv = fv_union(fn->fv, arg->fv);
  c->t = std::move(fn);
  c->v = std::move(arg);
  return c;
}

CompPtr if0(ValuePtr guard, CompPtr zero, CompPtr succ, Span s) {
  auto c = new_comp(CompKind::IfZero, s);
  c->hash = mix(mix(mix(c->hash, guard->hash), zero->hash), succ->hash);
  c->fv = fv_union(guard->fv, fv_union(zero->fv, succ->fv));
  c->v = std::move(guard);
  c->t = std::move(zero);
  c->u = std::move(succ);
  return c;
}

CompPtr force(ValuePtr v, Span s) {
  auto c = new_comp(CompKind::Force, s);
  c->hash = mix(c->hash, v->hash);
  c->fv = v->fv;
  c->v = std::move(v);
  return c;
}

CompPtr bind(std::string x, CompPtr bound, CompPtr cont, Span s) {
  auto c = new_comp(CompKind::Bind, s);
  c->hash = mix(mix(c->hash, bound->hash), cont->hash);
  c->fv = fv_union(bound->fv, fv_remove(cont->fv, x));
  c->x = std::move(x);
  c->t = std::move(bound);
  c->u = std::move(cont);
  return c;
}

CompPtr seq(CompPtr first, CompPtr then, Span s) {
  return bind(std::string(kWildcard), std::move(first), std::move(then), s);
}

CompPtr produce(ValuePtr v, Span s) {
  auto c = new_comp(CompKind::Produce, s);
  c->hash = mix(c->hash, v->hash);
  c->fv = v->fv;
  c->v = std::move(v);
  return c;
}

CompPtr let(std::string x, ValuePtr v, CompPtr body, Span s) {
  auto c = new_comp(CompKind::LetVal, s);
  c->hash = mix(mix(c->hash, v->hash), body->hash);
  c->fv = fv_union(v->fv, fv_remove(body->fv, x));
  c->x = std::move(x);
  c->v = std::move(v);
  c->t = std::move(body);
  return c;
}

CompPtr unpair(std::string x, std::string y, ValuePtr v, CompPtr body, Span s) {
  auto c = new_comp(CompKind::Unpair, s);
  c->hash = mix(mix(c->hash, v->hash), body->hash);
  c->fv = fv_union(v->fv, fv_remove(body->fv, x, y));
  c->x = std::move(x);
  c->y = std::move(y);
  c->v = std::move(v);
  c->t = std::move(body);
  return c;
}

CompPtr case_list(ValuePtr v, CompPtr nil_branch, std::string head, std::string tail,
                  CompPtr cons_branch, Span s) {
  auto c = new_comp(CompKind::CaseList, s);
  c->hash = mix(mix(mix(c->hash, v->hash), nil_branch->hash), cons_branch->hash);
  c->fv = fv_union(v->fv, fv_union(nil_branch->fv, fv_remove(cons_branch->fv, head, tail)));
  c->v = std::move(v);
  c->t = std::move(nil_branch);
  c->x = std::move(head);
  c->y = std::move(tail);
  c->u = std::move(cons_branch);
  return c;
}

CompPtr charge(ValuePtr v, Span s) {
  auto c = new_comp(CompKind::Charge, s);
  c->hash = mix(c->hash, v->hash);
  c->fv = v->fv;
  c->v = std::move(v);
  return c;
}

CompPtr uniform(Span s) { return new_comp(CompKind::Uniform, s); }

CompPtr rand(ValuePtr n, Span s) {
  auto c = new_comp(CompKind::RandNat, s);
  c->hash = mix(c->hash, n->hash);
  c->fv = n->fv;
  c->v = std::move(n);
  return c;
}

CompPtr choose(Rational p, CompPtr left, CompPtr right, Span s) {
  p.canonicalize();
  if (p < 0 || p > 1) throw std::invalid_argument("choice probability " + to_string(p) + " outside [0,1]");
  auto c = new_comp(CompKind::Choose, s);
  c->hash = mix(mix(mix(c->hash, hash_rational(p)), left->hash), right->hash);
  c->fv = fv_union(left->fv, right->fv);
  c->p = std::move(p);
  c->t = std::move(left);
  c->u = std::move(right);
  return c;
}

CompPtr fix(std::string x, CompPtr body, CType annot, Span s) {
  auto c = new_comp(CompKind::Fix, s);
  c->hash = mix(mix(c->hash, body->hash), type_hash(annot));
  c->fv = fv_remove(body->fv, x);
  c->x = std::move(x);
  c->t = std::move(body);
  c->ctype = std::move(annot);
  return c;
}

CompPtr prim(OpName op, std::vector<ValuePtr> args, Span s) {
  if (args.size() != op_signature(op).args.size()) {
    throw std::invalid_argument("operator '" + std::string(op_keyword(op)) + "' expects " +
                                std::to_string(op_signature(op).args.size()) + " arguments");
  }
  auto c = new_comp(CompKind::PrimOp, s);
  c->hash = mix(c->hash, static_cast<std::size_t>(op));
  for (const auto& a : args) {
    c->hash = mix(c->hash, a->hash);
    c->fv = fv_union(c->fv, a->fv);
  }
  c->op = op;
  c->args = std::move(args);
  return c;
}

}  // namespace mk

// ---------------------------------------------------------------------------
// Structure
// ---------------------------------------------------------------------------

std::vector<Subterm> children(const CompPtr& t) {
  switch (t->kind) {
    case CompKind::Lam:
    case CompKind::Fix: return {t->t};
    case CompKind::App: return {t->t, t->v};
    case CompKind::IfZero:
    case CompKind::CaseList: return {t->v, t->t, t->u};
    case CompKind::Force:
    case CompKind::Produce:
    case CompKind::Charge:
    case CompKind::RandNat: return {t->v};
    case CompKind::Bind:
    case CompKind::Choose: return {t->t, t->u};
    case CompKind::LetVal:
    case CompKind::Unpair: return {t->v, t->t};
    case CompKind::Uniform: return {};
    case CompKind::PrimOp: return {t->args.begin(), t->args.end()};
  }
  return {};
}

std::vector<Subterm> children(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Thunk: return {v->body};
    case ValueKind::Pair:
    case ValueKind::Cons:
    case ValueKind::CostAdd: return {v->a, v->b};
    default: return {};
  }
}

namespace {

CompPtr as_comp(const Subterm& s) {
  if (auto p = std::get_if<CompPtr>(&s)) return *p;
  throw std::invalid_argument("expected a computation child");
}

ValuePtr as_value(const Subterm& s) {
  if (auto p = std::get_if<ValuePtr>(&s)) return *p;
  throw std::invalid_argument("expected a value child");
}

}  // namespace

CompPtr with_child(const CompPtr& t, std::size_t i, const Subterm& child) {
  auto kids = children(t);
  if (i >= kids.size()) throw std::out_of_range("child index out of range");
  kids[i] = child;
  Span s = t->span;
  switch (t->kind) {
    case CompKind::Lam: return mk::lam(t->x, as_comp(kids[0]), t->xtype, s);
    case CompKind::Fix: return mk::fix(t->x, as_comp(kids[0]), t->ctype, s);
    case CompKind::App: return mk::app(as_comp(kids[0]), as_value(kids[1]), s);
    case CompKind::IfZero: return mk::if0(as_value(kids[0]), as_comp(kids[1]), as_comp(kids[2]), s);
    case CompKind::CaseList:
      return mk::case_list(as_value(kids[0]), as_comp(kids[1]), t->x, t->y, as_comp(kids[2]), s);
    case CompKind::Force: return mk::force(as_value(kids[0]), s);
    case CompKind::Produce: return mk::produce(as_value(kids[0]), s);
    case CompKind::Charge: return mk::charge(as_value(kids[0]), s);
    case CompKind::RandNat: return mk::rand(as_value(kids[0]), s);
    case CompKind::Bind: return mk::bind(t->x, as_comp(kids[0]), as_comp(kids[1]), s);
    case CompKind::Choose: return mk::choose(t->p, as_comp(kids[0]), as_comp(kids[1]), s);
    case CompKind::LetVal: return mk::let(t->x, as_value(kids[0]), as_comp(kids[1]), s);
    case CompKind::Unpair: return mk::unpair(t->x, t->y, as_value(kids[0]), as_comp(kids[1]), s);
    case CompKind::Uniform: return t;
    case CompKind::PrimOp: {
      std::vector<ValuePtr> args;
      for (const auto& k : kids) args.push_back(as_value(k));
      return mk::prim(t->op, std::move(args), s);
    }
  }
  return t;
}

ValuePtr with_child(const ValuePtr& v, std::size_t i, const Subterm& child) {
  auto kids = children(v);
  if (i >= kids.size()) throw std::out_of_range("child index out of range");
  kids[i] = child;
  switch (v->kind) {
    case ValueKind::Thunk: return mk::thunk(as_comp(kids[0]), v->span);
    case ValueKind::Pair: return mk::pair(as_value(kids[0]), as_value(kids[1]), v->span);
    case ValueKind::Cons: return mk::cons(as_value(kids[0]), as_value(kids[1]), v->span);
    case ValueKind::CostAdd: return mk::cost_add(as_value(kids[0]), as_value(kids[1]), v->span);
    default: return v;
  }
}

namespace {

template <typename Pred>
bool any_comp(const CompPtr& t, const Pred& pred);

template <typename Pred>
bool any_comp_value(const ValuePtr& v, const Pred& pred) {
  for (const auto& k : children(v)) {
    if (auto c = std::get_if<CompPtr>(&k)) {
      if (any_comp(*c, pred)) return true;
    } else if (any_comp_value(std::get<ValuePtr>(k), pred)) {
      return true;
    }
  }
  return false;
}

template <typename Pred>
bool any_comp(const CompPtr& t, const Pred& pred) {
  if (pred(*t)) return true;
  for (const auto& k : children(t)) {
    if (auto c = std::get_if<CompPtr>(&k)) {
      if (any_comp(*c, pred)) return true;
    } else if (any_comp_value(std::get<ValuePtr>(k), pred)) {
      return true;
    }
  }
  return false;
}

std::size_t value_size(const ValuePtr& v) {
  std::size_t n = 1;
  for (const auto& k : children(v)) {
    if (auto c = std::get_if<CompPtr>(&k)) {
      n += term_size(*c);
    } else {
      n += value_size(std::get<ValuePtr>(k));
    }
  }
  return n;
}

}  // namespace

bool is_fix_free(const CompPtr& t) {
  return !any_comp(t, [](const Comp& c) { return c.kind == CompKind::Fix; });
}

bool is_discrete(const CompPtr& t) {
  return !any_comp(t, [](const Comp& c) { return c.kind == CompKind::Uniform; });
}

std::size_t term_size(const CompPtr& t) {
  std::size_t n = 1;
  for (const auto& k : children(t)) {
    if (auto c = std::get_if<CompPtr>(&k)) {
      n += term_size(*c);
    } else {
      n += value_size(std::get<ValuePtr>(k));
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid) {
  std::string stem = base;
  if (stem.empty() || stem == kWildcard) stem = "w";
  if (auto us = stem.rfind('_'); us != std::string::npos && us > 0 && us + 1 < stem.size() &&
                                 std::all_of(stem.begin() + us + 1, stem.end(), ::isdigit)) {
    stem.resize(us);
  }
  for (std::size_t k = 1;; ++k) {
    std::string cand = stem + "_" + std::to_string(k);
    if (std::find(avoid.begin(), avoid.end(), cand) == avoid.end()) return cand;
  }
}

namespace {

Bindings relevant(const Bindings& sub, const FreeVars& fv) {
  Bindings out;
  for (const auto& b : sub) {
    if (is_free(fv, b.first)) out.push_back(b);
  }
  return out;
}

bool captures(const Bindings& sub, const std::string& x) {
  for (const auto& b : sub) {
    if (is_free(b.second->fv, x)) return true;
  }
  return false;
}

std::vector<std::string> avoid_set(const Bindings& sub, const FreeVars& body_fv) {
  std::vector<std::string> avoid;
  if (body_fv) avoid.insert(avoid.end(), body_fv->begin(), body_fv->end());
  for (const auto& b : sub) {
    avoid.push_back(b.first);
    if (b.second->fv) avoid.insert(avoid.end(), b.second->fv->begin(), b.second->fv->end());
  }
  return avoid;
}

CompPtr subst(const CompPtr& t, const Bindings& sub);
ValuePtr subst(const ValuePtr& v, const Bindings& sub);

// Substitutes under binders `names` (one or two); renames binders that would
// capture a free variable of a substituted value. Updates `names` in place.
CompPtr subst_under(const CompPtr& body, const Bindings& sub, std::vector<std::string*> names) {
  Bindings inner;
  for (const auto& b : sub) {
    bool shadowed = false;
    for (auto* n : names) shadowed = shadowed || (*n == b.first);
    if (!shadowed && is_free(body->fv, b.first)) inner.push_back(b);
  }
  if (inner.empty()) return body;
  std::vector<std::string> avoid;
  for (auto* n : names) {
    if (*n == kWildcard || !captures(inner, *n)) continue;
    if (avoid.empty()) {
      avoid = avoid_set(inner, body->fv);
      for (auto* m : names) avoid.push_back(*m);
    }
    std::string z = fresh_name(*n, avoid);
    avoid.push_back(z);
    inner.emplace_back(*n, mk::var(z));
    *n = z;
  }
  return subst(body, inner);
}

ValuePtr subst(const ValuePtr& v, const Bindings& sub) {
  if (!v->fv) return v;
  switch (v->kind) {
    case ValueKind::Var:
      for (const auto& b : sub) {
        if (b.first == v->name) return b.second;
      }
      return v;
    case ValueKind::Thunk: {
      auto body = subst(v->body, sub);
      return body == v->body ? v : mk::thunk(body, v->span);
    }
    case ValueKind::Pair:
    case ValueKind::Cons:
    case ValueKind::CostAdd: {
      auto a = subst(v->a, relevant(sub, v->a->fv));
      auto b = subst(v->b, relevant(sub, v->b->fv));
      if (a == v->a && b == v->b) return v;
      if (v->kind == ValueKind::Pair) return mk::pair(a, b, v->span);
      if (v->kind == ValueKind::Cons) return mk::cons(a, b, v->span);
      return mk::cost_add(a, b, v->span);
    }
    default: return v;
  }
}

CompPtr subst(const CompPtr& t, const Bindings& all) {
  Bindings sub = relevant(all, t->fv);
  if (sub.empty()) return t;
  Span s = t->span;
  switch (t->kind) {
    case CompKind::Lam: {
      std::string x = t->x;
      auto body = subst_under(t->t, sub, {&x});
      return mk::lam(x, body, t->xtype, s);
    }
    case CompKind::Fix: {
      std::string x = t->x;
      auto body = subst_under(t->t, sub, {&x});
      return mk::fix(x, body, t->ctype, s);
    }
    case CompKind::App: return mk::app(subst(t->t, sub), subst(t->v, sub), s);
    case CompKind::IfZero: return mk::if0(subst(t->v, sub), subst(t->t, sub), subst(t->u, sub), s);
    case CompKind::Force: return mk::force(subst(t->v, sub), s);
    case CompKind::Produce: return mk::produce(subst(t->v, sub), s);
    case CompKind::Charge: return mk::charge(subst(t->v, sub), s);
    case CompKind::RandNat: return mk::rand(subst(t->v, sub), s);
    case CompKind::Uniform: return t;
    case CompKind::Choose: return mk::choose(t->p, subst(t->t, sub), subst(t->u, sub), s);
    case CompKind::Bind: {
      std::string x = t->x;
      auto bound = subst(t->t, sub);
      auto cont = subst_under(t->u, sub, {&x});
      return mk::bind(x, bound, cont, s);
    }
    case CompKind::LetVal: {
      std::string x = t->x;
      auto v = subst(t->v, sub);
      auto body = subst_under(t->t, sub, {&x});
      return mk::let(x, v, body, s);
    }
    case CompKind::Unpair: {
      std::string x = t->x, y = t->y;
      auto v = subst(t->v, sub);
      auto body = subst_under(t->t, sub, {&x, &y});
      return mk::unpair(x, y, v, body, s);
    }
    case CompKind::CaseList: {
      std::string x = t->x, y = t->y;
      auto v = subst(t->v, sub);
      auto nb = subst(t->t, sub);
      auto cb = subst_under(t->u, sub, {&x, &y});
      return mk::case_list(v, nb, x, y, cb, s);
    }
    case CompKind::PrimOp: {
      std::vector<ValuePtr> args;
      for (const auto& a : t->args) args.push_back(subst(a, sub));
      return mk::prim(t->op, std::move(args), s);
    }
  }
  return t;
}

}  // namespace

CompPtr substitute(const CompPtr& t, const Bindings& sub) { return subst(t, sub); }
ValuePtr substitute(const ValuePtr& v, const Bindings& sub) { return subst(v, relevant(sub, v->fv)); }
CompPtr substitute(const CompPtr& t, const std::string& x, const ValuePtr& v) {
  return subst(t, Bindings{{x, v}});
}

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

namespace {

struct AlphaCmp {
  std::vector<std::string_view> left, right;

  static int index_of(const std::vector<std::string_view>& stack, std::string_view x) {
    for (std::size_t i = stack.size(); i-- > 0;) {
      if (stack[i] == x) return static_cast<int>(stack.size() - 1 - i);
    }
    return -1;
  }

  int var(std::string_view a, std::string_view b) const {
    int ia = index_of(left, a), ib = index_of(right, b);
    if (ia >= 0 || ib >= 0) {
      if (ia < 0) return 1;
      if (ib < 0) return -1;
      return ia < ib ? -1 : (ia > ib ? 1 : 0);
    }
    return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
  }

  int under(std::initializer_list<std::pair<std::string_view, std::string_view>> binders,
            const CompPtr& a, const CompPtr& b) {
    for (const auto& [l, r] : binders) {
      left.push_back(l);
      right.push_back(r);
    }
    int c = comp(a, b);
    for (std::size_t i = 0; i < binders.size(); ++i) {
      left.pop_back();
      right.pop_back();
    }
    return c;
  }

  static int num(std::uint64_t a, std::uint64_t b) { return a < b ? -1 : (a > b ? 1 : 0); }

  int value(const ValuePtr& a, const ValuePtr& b) {
    if (a == b && left.empty() && right.empty()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
      case ValueKind::Var: return var(a->name, b->name);
      case ValueKind::Unit: return 0;
      case ValueKind::Nat:
      case ValueKind::CostLit: return num(a->num, b->num);
      case ValueKind::Real: return cmp(a->real, b->real) < 0 ? -1 : (cmp(a->real, b->real) > 0 ? 1 : 0);
      case ValueKind::Thunk: return comp(a->body, b->body);
      case ValueKind::Nil: return type_compare(a->annot, b->annot);
      case ValueKind::Pair:
      case ValueKind::Cons:
      case ValueKind::CostAdd:
        if (int c = value(a->a, b->a)) return c;
        return value(a->b, b->b);
    }
    return 0;
  }

  int comp(const CompPtr& a, const CompPtr& b) {
    if (a == b && left.empty() && right.empty()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
      case CompKind::Lam:
        if (int c = type_compare(a->xtype, b->xtype)) return c;
        return under({{a->x, b->x}}, a->t, b->t);
      case CompKind::Fix:
        if (int c = type_compare(a->ctype, b->ctype)) return c;
        return under({{a->x, b->x}}, a->t, b->t);
      case CompKind::App:
        if (int c = comp(a->t, b->t)) return c;
        return value(a->v, b->v);
      case CompKind::IfZero:
        if (int c = value(a->v, b->v)) return c;
        if (int c = comp(a->t, b->t)) return c;
        return comp(a->u, b->u);
      case CompKind::Force:
      case CompKind::Produce:
      case CompKind::Charge:
      case CompKind::RandNat: return value(a->v, b->v);
      case CompKind::Uniform: return 0;
      case CompKind::Choose: {
        int pc = cmp(a->p, b->p);
        if (pc) return pc < 0 ? -1 : 1;
        if (int c = comp(a->t, b->t)) return c;
        return comp(a->u, b->u);
      }
      case CompKind::Bind:
        if (int c = comp(a->t, b->t)) return c;
        return under({{a->x, b->x}}, a->u, b->u);
      case CompKind::LetVal:
        if (int c = value(a->v, b->v)) return c;
        return under({{a->x, b->x}}, a->t, b->t);
      case CompKind::Unpair:
        if (int c = value(a->v, b->v)) return c;
        return under({{a->x, b->x}, {a->y, b->y}}, a->t, b->t);
      case CompKind::CaseList:
        if (int c = value(a->v, b->v)) return c;
        if (int c = comp(a->t, b->t)) return c;
        return under({{a->x, b->x}, {a->y, b->y}}, a->u, b->u);
      case CompKind::PrimOp:
        if (a->op != b->op) return a->op < b->op ? -1 : 1;
        for (std::size_t i = 0; i < a->args.size(); ++i) {
          if (int c = value(a->args[i], b->args[i])) return c;
        }
        return 0;
    }
    return 0;
  }
};

bool struct_eq(const CompPtr& a, const CompPtr& b);

bool struct_eq(const ValuePtr& a, const ValuePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ValueKind::Var: return a->name == b->name;
    case ValueKind::Unit: return true;
    case ValueKind::Nat:
    case ValueKind::CostLit: return a->num == b->num;
    case ValueKind::Real: return a->real == b->real;
    case ValueKind::Thunk: return struct_eq(a->body, b->body);
    case ValueKind::Nil: return type_compare(a->annot, b->annot) == 0;
    default: return struct_eq(a->a, b->a) && struct_eq(a->b, b->b);
  }
}

bool opt_eq(const CompPtr& a, const CompPtr& b) {
  if (!a || !b) return !a && !b;
  return struct_eq(a, b);
}

bool opt_eq(const ValuePtr& a, const ValuePtr& b) {
  if (!a || !b) return !a && !b;
  return struct_eq(a, b);
}

bool struct_eq(const CompPtr& a, const CompPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->x != b->x || a->y != b->y) return false;
  if (type_compare(a->xtype, b->xtype) != 0 || type_compare(a->ctype, b->ctype) != 0) return false;
  if (a->kind == CompKind::Choose && a->p != b->p) return false;
  if (a->kind == CompKind::PrimOp) {
    if (a->op != b->op || a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      if (!struct_eq(a->args[i], b->args[i])) return false;
    }
  }
  return opt_eq(a->v, b->v) && opt_eq(a->t, b->t) && opt_eq(a->u, b->u);
}

}  // namespace

int compare_alpha(const CompPtr& a, const CompPtr& b) {
  AlphaCmp cmp;
  return cmp.comp(a, b);
}

int compare_alpha(const ValuePtr& a, const ValuePtr& b) {
  AlphaCmp cmp;
  return cmp.value(a, b);
}

bool structurally_equal(const CompPtr& a, const CompPtr& b) { return struct_eq(a, b); }
bool structurally_equal(const ValuePtr& a, const ValuePtr& b) { return struct_eq(a, b); }

}  // namespace cert
