#include "cert/parse.hpp"

#include <cctype>
#include <set>
#include <stdexcept>
#include <vector>

namespace cert {

namespace {

enum class Tok { Ident, Int, Ratio, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> kw = [] {
    std::set<std::string, std::less<>> s{"fix",  "let",     "in",     "unpair", "as",      "case",
                                         "of",   "nil",     "cons",   "if0",    "then",    "else",
                                         "force", "produce", "charge", "uniform", "rand",   "choose",
                                         "thunk", "unit",   "nat",    "real",   "cost",    "list",
                                         "U",    "F"};
    for (auto op : all_ops()) s.insert(std::string(op_keyword(op)));
    return s;
  }();
  return kw;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto digits_at = [&](std::size_t j) { return j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])); };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Span sp{line, col};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), sp});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && digits_at(i + 1))) {
      std::size_t j = i + 1;
      while (digits_at(j)) ++j;
      Tok kind = c == '-' ? Tok::Ratio : Tok::Int;
      if (j < src.size() && (src[j] == '.' || src[j] == '/') && digits_at(j + 1)) {
        kind = Tok::Ratio;
        ++j;
        while (digits_at(j)) ++j;
      }
      out.push_back({kind, std::string(src.substr(i, j - i)), sp});
      advance(j - i);
      continue;
    }
    static const char* two[] = {"<-", "->", "=>"};
    bool matched = false;
    for (const char* p : two) {
      if (src.substr(i, 2) == p) {
        out.push_back({Tok::Punct, p, sp});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("\\.:;(){},|=*+#_").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), sp});
      advance(1);
      continue;
    }
    throw ParseError(sp, std::string("unexpected character '") + c + "'", "a token");
  }
  out.push_back({Tok::End, "", Span{line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  CompPtr whole_comp() {
    auto t = comp();
    expect_end();
    return t;
  }
  ValuePtr whole_value() {
    auto v = value();
    expect_end();
    return v;
  }
  VType whole_vtype() {
    auto t = vtype();
    expect_end();
    return t;
  }
  CType whole_ctype() {
    auto t = ctype();
    expect_end();
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool is(std::string_view text, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == text;
  }
  bool is_ident(std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.kind == Tok::Ident && !keywords().count(t.text);
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.span, "unexpected " + found + ", expected " + expected, expected);
  }
  Span expect(std::string_view text) {
    if (!is(text)) fail("'" + std::string(text) + "'");
    return toks_[pos_++].span;
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("end of input");
  }
  std::string ident() {
    if (!is_ident()) fail("identifier");
    return toks_[pos_++].text;
  }
  std::string binder() {
    if (is("_")) {
      ++pos_;
      return std::string(kWildcard);
    }
    return ident();
  }
  std::uint64_t natural(const Token& t) const {
    try {
      std::size_t used = 0;
      auto n = std::stoull(t.text, &used);
      if (used != t.text.size()) throw std::out_of_range("");
      return n;
    } catch (const std::exception&) {
      throw ParseError(t.span, "integer literal '" + t.text + "' out of range", "natural literal");
    }
  }

  // ----- types -----

  VType vtype() {
    auto l = vtatom();
    if (is("*")) {
      ++pos_;
      return ty::prod(l, vtype());
    }
    return l;
  }

  VType vtatom() {
    const auto& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "unit") return ++pos_, ty::unit();
      if (t.text == "nat") return ++pos_, ty::nat();
      if (t.text == "real") return ++pos_, ty::real();
      if (t.text == "cost") return ++pos_, ty::cost();
      if (t.text == "list") {
        ++pos_;
        return ty::list(vtatom());
      }
      if (t.text == "U") {
        ++pos_;
        if (is("F")) {
          ++pos_;
          return ty::u(ty::f(vtatom()));
        }
        expect("(");
        auto c = ctype();
        expect(")");
        return ty::u(c);
      }
    }
    if (is("(")) {
      ++pos_;
      auto v = vtype();
      expect(")");
      return v;
    }
    fail("value type");
  }

  CType ctype() {
    if (is("F")) {
      ++pos_;
      return ty::f(vtatom());
    }
    if (is("(")) {
      std::size_t save = pos_;
      try {
        auto dom = vtype();
        if (is("->")) {
          ++pos_;
          return ty::arrow(dom, ctype());
        }
      } catch (const ParseError&) {
      }
      pos_ = save;
      ++pos_;
      auto c = ctype();
      expect(")");
      return c;
    }
    auto dom = vtype();
    expect("->");
    return ty::arrow(dom, ctype());
  }

  // ----- values -----

  bool starts_vatom() const {
    const auto& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Ratio) return true;
    if (is("(") || is("#") || is("nil")) return true;
    return is_ident();
  }

  ValuePtr value() {
    auto l = vterm();
    while (is("+")) {
      Span s = expect("+");
      l = mk::cost_add(l, vterm(), s);
    }
    return l;
  }

  ValuePtr vterm() {
    if (is("cons")) {
      Span s = expect("cons");
      auto h = vatom();
      auto tl = vatom();
      return mk::cons(h, tl, s);
    }
    if (is("thunk")) {
      Span s = expect("thunk");
      return mk::thunk(catom(), s);
    }
    return vatom();
  }

  ValuePtr literal(const Token& t) {
    if (t.kind == Tok::Int) return mk::nat(natural(t), t.span);
    try {
      return mk::real(parse_rational(t.text), t.span);
    } catch (const std::invalid_argument& e) {
      throw ParseError(t.span, e.what(), "rational literal");
    }
  }

  ValuePtr vatom() {
    const auto& t = peek();
    Span s = t.span;
    if (t.kind == Tok::Int || t.kind == Tok::Ratio) {
      ++pos_;
      return literal(t);
    }
    if (is("#")) {
      ++pos_;
      if (peek().kind != Tok::Int) fail("cost literal digits");
      return mk::cost(natural(toks_[pos_++]), s);
    }
    if (is("nil")) {
      ++pos_;
      return mk::nil(nullptr, s);
    }
    if (is("(")) {
      ++pos_;
      if (is(")")) {
        ++pos_;
        return mk::unit(s);
      }
      auto v = value();
      if (is(",")) {
        ++pos_;
        auto w = value();
        expect(")");
        return mk::pair(v, w, s);
      }
      if (is(":")) {
        if (v->kind != ValueKind::Nil || v->annot) fail("')'");
        ++pos_;
        auto annot = vtype();
        expect(")");
        return mk::nil(annot, v->span);
      }
      expect(")");
      return v;
    }
    if (is_ident()) {
      ++pos_;
      return mk::var(t.text, s);
    }
    fail("value");
  }

  // ----- computations -----

  CompPtr comp() {
    if ((is_ident() || is("_")) && is("<-", 1)) {
      Span s = peek().span;
      std::string x = binder();
      expect("<-");
      auto bound = expr();
      expect(";");
      return mk::bind(x, bound, comp(), s);
    }
    Span s = peek().span;
    auto first = expr();
    if (is(";")) {
      ++pos_;
      return mk::seq(first, comp(), s);
    }
    return first;
  }

  CompPtr expr() {
    Span s = peek().span;
    if (is("\\")) {
      ++pos_;
      std::string x = binder();
      VType annot;
      if (is(":")) {
        ++pos_;
        annot = vtype();
      }
      expect(".");
      return mk::lam(x, comp(), annot, s);
    }
    if (is("fix")) {
      ++pos_;
      std::string x = ident();
      CType annot;
      if (is(":")) {
        ++pos_;
        annot = ctype();
      }
      expect(".");
      return mk::fix(x, comp(), annot, s);
    }
    if (is("let")) {
      ++pos_;
      std::string x = binder();
      expect("=");
      auto v = value();
      expect("in");
      return mk::let(x, v, comp(), s);
    }
    if (is("unpair")) {
      ++pos_;
      auto v = value();
      expect("as");
      expect("(");
      std::string x = binder();
      expect(",");
      std::string y = binder();
      expect(")");
      expect("in");
      return mk::unpair(x, y, v, comp(), s);
    }
    if (is("case")) {
      ++pos_;
      auto v = value();
      expect("of");
      expect("nil");
      expect("=>");
      auto nb = comp();
      expect("|");
      expect("cons");
      std::string h = binder();
      std::string tl = binder();
      expect("=>");
      return mk::case_list(v, nb, h, tl, comp(), s);
    }
    if (is("if0")) {
      ++pos_;
      auto v = value();
      expect("then");
      auto z = comp();
      expect("else");
      return mk::if0(v, z, comp(), s);
    }
    auto head = catom();
    while (starts_vatom()) {
      head = mk::app(head, vatom(), s);
    }
    return head;
  }

  CompPtr catom() {
    Span s = peek().span;
    if (is("(")) {
      ++pos_;
      auto t = comp();
      expect(")");
      return t;
    }
    if (is("force")) {
      ++pos_;
      return mk::force(vatom(), s);
    }
    if (is("produce")) {
      ++pos_;
      return mk::produce(value(), s);
    }
    if (is("charge")) {
      ++pos_;
      expect("(");
      ValuePtr c;
      if (peek().kind == Tok::Int && is(")", 1)) {
        c = mk::cost(natural(peek()), peek().span);
        ++pos_;
      } else {
        c = value();
      }
      expect(")");
      return mk::charge(c, s);
    }
    if (is("uniform")) {
      ++pos_;
      return mk::uniform(s);
    }
    if (is("rand")) {
      ++pos_;
      return mk::rand(value(), s);
    }
    if (is("choose")) {
      ++pos_;
      const auto& pt = peek();
      if (pt.kind != Tok::Int && pt.kind != Tok::Ratio) fail("probability literal");
      Rational p;
      try {
        p = parse_rational(pt.text);
      } catch (const std::invalid_argument& e) {
        throw ParseError(pt.span, e.what(), "probability literal");
      }
      if (p < 0 || p > 1) throw ParseError(pt.span, "choice probability outside [0,1]", "probability in [0,1]");
      ++pos_;
      expect("{");
      auto l = comp();
      expect("}");
      expect("{");
      auto r = comp();
      expect("}");
      return mk::choose(p, l, r, s);
    }
    if (peek().kind == Tok::Ident) {
      if (auto op = op_from_keyword(peek().text)) {
        ++pos_;
        std::vector<ValuePtr> args;
        for (std::size_t i = 0; i < op_signature(*op).args.size(); ++i) args.push_back(vatom());
        return mk::prim(*op, std::move(args), s);
      }
    }
    fail("computation");
  }
};

}  // namespace

CompPtr parse(std::string_view source) { return Parser(source).whole_comp(); }
ValuePtr parse_value(std::string_view source) { return Parser(source).whole_value(); }
VType parse_vtype(std::string_view source) { return Parser(source).whole_vtype(); }
CType parse_ctype(std::string_view source) { return Parser(source).whole_ctype(); }

// ---------------------------------------------------------------------------
// Desugaring
// ---------------------------------------------------------------------------

namespace {

struct Lowering {
  DesugarOptions opts;

  static std::string fresh(const std::string& base, std::initializer_list<FreeVars> scopes) {
    std::vector<std::string> avoid;
    for (const auto& fv : scopes) {
      if (fv) avoid.insert(avoid.end(), fv->begin(), fv->end());
    }
    return fresh_name(base, avoid);
  }

  ValuePtr value(const ValuePtr& v) {
    switch (v->kind) {
      case ValueKind::Thunk: {
        auto b = comp(v->body);
        return b == v->body ? v : mk::thunk(b, v->span);
      }
      case ValueKind::Pair:
      case ValueKind::Cons:
      case ValueKind::CostAdd: {
        auto a = value(v->a), b = value(v->b);
        if (a == v->a && b == v->b) return v;
        return with_child(with_child(v, 0, a), 1, b);
      }
      default: return v;
    }
  }

  CompPtr comp(const CompPtr& t) {
    CompPtr cur = t;
    auto kids = children(t);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      Subterm next;
      if (auto c = std::get_if<CompPtr>(&kids[i])) {
        auto n = comp(*c);
        if (n == *c) continue;
        next = n;
      } else {
        auto& vv = std::get<ValuePtr>(kids[i]);
        auto n = value(vv);
        if (n == vv) continue;
        next = n;
      }
      cur = with_child(cur, i, next);
    }
    Span s = cur->span;
    if (cur->kind == CompKind::RandNat && opts.lower_rand) {
      std::string x = fresh("x", {cur->fv});
      std::string r = fresh("r", {cur->fv, std::make_shared<const std::vector<std::string>>(std::vector{x})});
      std::string m = fresh("m", {cur->fv, std::make_shared<const std::vector<std::string>>(std::vector{x, r})});
      return mk::bind(
          x, mk::uniform(s),
          mk::bind(r, mk::prim(OpName::NatToReal, {cur->v}, s),
                   mk::bind(m, mk::prim(OpName::MulReal, {mk::var(r), mk::var(x)}, s),
                            mk::prim(OpName::FloorToNat, {mk::var(m)}, s), s),
                   s),
          s);
    }
    if (cur->kind == CompKind::Choose && opts.lower_choose) {
      std::string x = fresh("x", {cur->fv});
      std::string b = fresh("b", {cur->fv, std::make_shared<const std::vector<std::string>>(std::vector{x})});
      return mk::bind(x, mk::uniform(s),
                      mk::bind(b, mk::prim(OpName::LeqReal, {mk::var(x), mk::real(cur->p)}, s),
                               mk::if0(mk::var(b), cur->t, cur->u, s), s),
                      s);
    }
    return cur;
  }
};

}  // namespace

CompPtr desugar(const CompPtr& t, DesugarOptions opts) {
  if (!opts.lower_rand && !opts.lower_choose) return t;
  return Lowering{opts}.comp(t);
}

}  // namespace cert
