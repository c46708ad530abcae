#include "cert/parse.hpp"
#include "cert/typecheck.hpp"
#include "support/gen.hpp"

#include <doctest.h>

#include <functional>

using namespace cert;

namespace {

// Nameless rendering: bound variables become {B:k} (de Bruijn index), free
// ones {F:name}. Built independently of the library's alpha machinery.
struct Nameless {
  std::vector<std::string> stack;

  std::string var(const std::string& x) const {
    for (std::size_t i = stack.size(); i-- > 0;) {
      if (stack[i] == x) return "{B:" + std::to_string(stack.size() - 1 - i) + "}";
    }
    return "{F:" + x + "}";
  }

  std::string under(std::vector<std::string> names, const CompPtr& t) {
    for (auto& n : names) stack.push_back(n);
    auto s = comp(t);
    stack.resize(stack.size() - names.size());
    return s;
  }

  std::string value(const ValuePtr& v) {
    switch (v->kind) {
      case ValueKind::Var: return var(v->name);
      case ValueKind::Unit: return "U";
      case ValueKind::Nat: return "N" + std::to_string(v->num);
      case ValueKind::Real: return "R" + to_string(v->real);
      case ValueKind::CostLit: return "C" + std::to_string(v->num);
      case ValueKind::CostAdd: return "(+ " + value(v->a) + " " + value(v->b) + ")";
      case ValueKind::Thunk: return "(thunk " + comp(v->body) + ")";
      case ValueKind::Pair: return "(pair " + value(v->a) + " " + value(v->b) + ")";
      case ValueKind::Nil: return "nil";
      case ValueKind::Cons: return "(cons " + value(v->a) + " " + value(v->b) + ")";
    }
    return "?";
  }

  std::string comp(const CompPtr& t) {
    switch (t->kind) {
      case CompKind::Lam: return "(lam " + under({t->x}, t->t) + ")";
      case CompKind::Fix: return "(fix " + under({t->x}, t->t) + ")";
      case CompKind::App: return "(app " + comp(t->t) + " " + value(t->v) + ")";
      case CompKind::IfZero: return "(if0 " + value(t->v) + " " + comp(t->t) + " " + comp(t->u) + ")";
      case CompKind::Force: return "(force " + value(t->v) + ")";
      case CompKind::Bind: return "(bind " + comp(t->t) + " " + under({t->x}, t->u) + ")";
      case CompKind::Produce: return "(produce " + value(t->v) + ")";
      case CompKind::LetVal: return "(let " + value(t->v) + " " + under({t->x}, t->t) + ")";
      case CompKind::Unpair: return "(unpair " + value(t->v) + " " + under({t->x, t->y}, t->t) + ")";
      case CompKind::CaseList:
        return "(case " + value(t->v) + " " + comp(t->t) + " " + under({t->x, t->y}, t->u) + ")";
      case CompKind::Charge: return "(charge " + value(t->v) + ")";
      case CompKind::Uniform: return "uniform";
      case CompKind::RandNat: return "(rand " + value(t->v) + ")";
      case CompKind::Choose: return "(choose " + to_string(t->p) + " " + comp(t->t) + " " + comp(t->u) + ")";
      case CompKind::PrimOp: {
        std::string s = "(" + std::string(op_keyword(t->op));
        for (const auto& a : t->args) s += " " + value(a);
        return s + ")";
      }
    }
    return "?";
  }
};

std::string nameless(const CompPtr& t) { return Nameless{}.comp(t); }
std::string nameless(const ValuePtr& v) { return Nameless{}.value(v); }

// Naive substitution on the nameless form: free occurrences are literal
// tokens and nothing needs shifting because binders carry no names.
std::string naive_subst(std::string text, const std::string& x, const std::string& replacement) {
  const std::string token = "{F:" + x + "}";
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    auto hit = text.find(token, pos);
    if (hit == std::string::npos) break;
    out += text.substr(pos, hit - pos) + replacement;
    pos = hit + token.size();
  }
  return out + text.substr(pos);
}

// Capture shows up as a {F:..} token of `v` turning into a {B:..} index.
bool subst_agrees(const CompPtr& t, const std::string& x, const ValuePtr& v) {
  return nameless(substitute(t, x, v)) == naive_subst(nameless(t), x, nameless(v));
}

CompPtr geometric() { return parse("fix f : F nat. choose 1/2 { produce 0 } { y <- force f; succ y }"); }

}  // namespace

TEST_CASE("parse basic forms") {
  auto t = parse("produce 0");
  REQUIRE(t->kind == CompKind::Produce);
  CHECK(t->v->kind == ValueKind::Nat);
  CHECK(t->v->num == 0);

  auto s = parse("charge(1); produce ()");
  REQUIRE(s->kind == CompKind::Bind);
  CHECK(s->x == "_");
  CHECK(s->t->kind == CompKind::Charge);
  CHECK(s->t->v->kind == ValueKind::CostLit);
  CHECK(s->t->v->num == 1);
  CHECK(s->u->kind == CompKind::Produce);
  CHECK(s->u->v->kind == ValueKind::Unit);
}

TEST_CASE("geometric program shape") {
  auto g = parse("fix f. choose 1/2 { produce 0 } { y <- force f; succ y }");
  REQUIRE(g->kind == CompKind::Fix);
  CHECK(g->ctype == nullptr);
  const auto& c = g->t;
  REQUIRE(c->kind == CompKind::Choose);
  CHECK(c->p == Rational(1, 2));
  CHECK(c->t->kind == CompKind::Produce);
  REQUIRE(c->u->kind == CompKind::Bind);
  CHECK(c->u->t->kind == CompKind::Force);
  CHECK(c->u->u->kind == CompKind::PrimOp);
  CHECK(c->u->u->op == OpName::Succ);
}

TEST_CASE("pretty print") {
  CHECK(pretty_print(mk::produce(mk::nat(0))) == "produce 0");
  CHECK(pretty_print(mk::charge(mk::cost(2))) == "charge(2)");
  auto g = geometric();
  CHECK(pretty_print(g) == "fix f : F nat. choose 1/2 {produce 0} {y <- force f; succ y}");
  CHECK(structurally_equal(parse(pretty_print(g)), g));
}

TEST_CASE("literals and comments") {
  auto t = parse("-- leading comment\nlet r = 0.25 in let c = #3 + #4 in produce (r, (nil : list nat)) -- tail");
  REQUIRE(t->kind == CompKind::LetVal);
  CHECK(t->v->kind == ValueKind::Real);
  CHECK(t->v->real == Rational(1, 4));
  CHECK(t->t->v->kind == ValueKind::CostAdd);
  auto inner = t->t->t->v;
  REQUIRE(inner->kind == ValueKind::Pair);
  REQUIRE(inner->b->kind == ValueKind::Nil);
  CHECK(type_equal(inner->b->annot, ty::list(ty::nat())));
  CHECK(parse("produce 3/1")->v->kind == ValueKind::Real);
  CHECK(parse("charge((3))")->v->kind == ValueKind::Nat);
}

TEST_CASE("parse errors carry position and expectation") {
  try {
    parse("produce 0;\n  produce");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.where().line == 2);
    CHECK(e.where().col == 10);
    CHECK(e.expected() == "value");
  }
  CHECK_THROWS_AS(parse("choose 3/2 {produce 0} {produce 1}"), ParseError);
  CHECK_THROWS_AS(parse("produce 0 )"), ParseError);
  CHECK_THROWS_AS(parse("let fix = 1 in produce fix"), ParseError);
  CHECK_THROWS_AS(parse("produce 1/0"), ParseError);
}

TEST_CASE("types round-trip") {
  for (const char* src : {"nat", "nat * unit * real", "(nat * nat) * nat", "list (nat * cost)", "U F nat",
                          "U (nat -> F (list nat))", "U (U F nat -> nat * nat -> F unit)"}) {
    auto t = parse_vtype(src);
    CHECK(to_string(t) == src);
    CHECK(type_equal(parse_vtype(to_string(t)), t));
  }
  auto c = parse_ctype("(nat * nat) -> F nat");
  CHECK(c->kind == CKind::Arrow);
  CHECK(c->arg->kind == VKind::Prod);
  CHECK(type_equal(parse_ctype("(F nat)"), ty::f(ty::nat())));
}

TEST_CASE("round trip on generated programs") {
  certtest::GenOptions opts;
  opts.fix = true;
  opts.continuous = true;
  certtest::TermGen gen(17, opts);
  for (int i = 0; i < 400; ++i) {
    CType target = i % 3 == 0 ? ty::f(ty::real()) : (i % 3 == 1 ? ty::f(ty::nat()) : ty::arrow(ty::nat(), ty::f(ty::nat())));
    auto t = gen.program(target, 5);
    auto text = pretty_print(t);
    CompPtr back;
    REQUIRE_NOTHROW(back = parse(text));
    CHECK_MESSAGE(structurally_equal(back, t), text);
    CHECK(pretty_print(back) == text);
  }
}

TEST_CASE("substitution") {
  auto three = mk::nat(3);
  auto t = substitute(parse("produce x"), "x", three);
  CHECK(structurally_equal(t, parse("produce 3")));

  auto shadow = parse("\\x : nat. produce x");
  CHECK(substitute(shadow, "x", three) == shadow);

  auto th = mk::thunk(parse("produce 1"));
  auto app = substitute(parse("force f y"), "f", th);
  REQUIRE(app->kind == CompKind::App);
  CHECK(app->t->kind == CompKind::Force);
  CHECK(app->t->v->kind == ValueKind::Thunk);
  CHECK(app->v->name == "y");
  CHECK(subst_agrees(parse("force f y"), "f", th));
}

TEST_CASE("substitution avoids capture") {
  auto t = parse("\\y : nat. add x y");
  auto r = substitute(t, "x", mk::var("y"));
  REQUIRE(r->kind == CompKind::Lam);
  CHECK(r->x != "y");
  CHECK(subst_agrees(t, "x", mk::var("y")));
  CHECK(alpha_equal(r, parse("\\z : nat. add y z")));
  CHECK_FALSE(alpha_equal(r, parse("\\y : nat. add y y")));

  auto u = parse("case l of nil => produce x | cons x t => produce (x, l)");
  CHECK(subst_agrees(u, "x", mk::var("t")));
  CHECK(subst_agrees(u, "l", mk::cons(mk::var("x"), mk::var("t"))));
}

TEST_CASE("substitution agrees with a nameless oracle on generated terms") {
  certtest::TermGen gen(99);
  int substituted = 0;
  for (int i = 0; i < 300; ++i) {
    auto body = gen.program(ty::f(ty::nat()), 4);
    auto lam = gen.program(ty::arrow(ty::nat(), ty::f(ty::nat())), 4);
    REQUIRE(lam->kind == CompKind::Lam);
    auto v = gen.value(ty::nat(), 2);
    CHECK(subst_agrees(lam->t, lam->x, v));
    CHECK(subst_agrees(lam->t, lam->x, mk::var("x1")));
    CHECK(subst_agrees(body, "x0", mk::var("x0")));
    auto r = substitute(lam->t, lam->x, v);
    CHECK(check_comp({}, r)->kind == CKind::F);
    substituted += r != lam->t;
  }
  CHECK(substituted > 0);
}

TEST_CASE("alpha equivalence and hashing") {
  auto a = parse("\\x : nat. y <- produce x; produce (x, y)");
  auto b = parse("\\u : nat. v <- produce u; produce (u, v)");
  auto c = parse("\\u : nat. v <- produce u; produce (v, u)");
  CHECK(alpha_equal(a, b));
  CHECK(a->hash == b->hash);
  CHECK_FALSE(alpha_equal(a, c));
  CHECK_FALSE(structurally_equal(a, b));
  CHECK(compare_alpha(a, c) == -compare_alpha(c, a));

  certtest::TermGen gen(5);
  std::vector<CompPtr> terms;
  for (int i = 0; i < 60; ++i) terms.push_back(gen.program(ty::f(ty::nat()), 3));
  for (const auto& x : terms) {
    for (const auto& y : terms) {
      int xy = compare_alpha(x, y);
      CHECK(xy == -compare_alpha(y, x));
      if (xy == 0) CHECK(x->hash == y->hash);
    }
  }
}

TEST_CASE("free variables") {
  auto t = parse("x <- force f; unpair p as (a, b) in produce (a, (x, q))");
  REQUIRE(t->fv);
  CHECK(*t->fv == std::vector<std::string>{"f", "p", "q"});
  CHECK(is_closed(geometric()));
  CHECK(is_fix_free(parse("produce 0")));
  CHECK_FALSE(is_fix_free(mk::produce(mk::thunk(geometric()))));
  CHECK_FALSE(is_discrete(parse("x <- uniform; produce x")));
}

TEST_CASE("children and replacement") {
  auto t = parse("if0 n then produce 1 else produce 2");
  auto kids = children(t);
  REQUIRE(kids.size() == 3);
  auto r = with_child(t, 2, Subterm{parse("produce 7")});
  CHECK(structurally_equal(r, parse("if0 n then produce 1 else produce 7")));
  CHECK_THROWS(with_child(t, 0, Subterm{parse("produce 7")}));
}

TEST_CASE("desugar") {
  auto p = parse("produce 5");
  CHECK(desugar(p, {true, true}) == p);
  auto plain = parse("rand 4");
  CHECK(desugar(plain) == plain);

  auto r = desugar(plain, {true, false});
  REQUIRE(r->kind == CompKind::Bind);
  CHECK(r->t->kind == CompKind::Uniform);
  CHECK(type_equal(check_program(r), ty::f(ty::nat())));
  CHECK(pretty_print(r) == "x_1 <- uniform; r_1 <- toreal 4; m_1 <- mulr r_1 x_1; floor m_1");

  auto c = desugar(parse("choose 1/3 {produce 0} {produce 1}"), {false, true});
  CHECK(pretty_print(c) == "x_1 <- uniform; b_1 <- leqr x_1 1/3; if0 b_1 then produce 0 else produce 1");
  CHECK(type_equal(check_program(c), ty::f(ty::nat())));
}
