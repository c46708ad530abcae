#pragma once

// Concrete syntax: parser, pretty-printer and the optional desugaring of
// `rand` / `choose` into `uniform`-based code.

#include "cert/syntax.hpp"

#include <string>
#include <string_view>

namespace cert {

/// Parses one top-level computation. Throws ParseError.
CompPtr parse(std::string_view source);
/// Parses a standalone value such as `(1, cons 2 nil)`. Throws ParseError.
ValuePtr parse_value(std::string_view source);
VType parse_vtype(std::string_view source);
CType parse_ctype(std::string_view source);

/// Single-line rendering; `parse(pretty_print(t))` is structurally equal to t.
std::string pretty_print(const CompPtr& t);
std::string pretty_print(const ValuePtr& v);

struct DesugarOptions {
  bool lower_rand = false;
  bool lower_choose = false;
};

/// Identity unless lowering is requested; lowered forms draw from `uniform`.
CompPtr desugar(const CompPtr& t, DesugarOptions opts = {});

}  // namespace cert
