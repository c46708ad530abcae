#pragma once

#include "cert/syntax.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cert {

enum class TypeErrorKind {
  UnboundVariable,
  Mismatch,
  NotAFunction,
  NotAThunk,
  NotF,
  NotList,
  NotProd,
  ArityError,
  MissingAnnotation,
};

std::string_view type_error_kind_name(TypeErrorKind k);

class TypeError : public CertError {
 public:
  TypeError(TypeErrorKind kind, Span where, std::string detail, std::optional<AnyType> expected = {},
            std::optional<AnyType> found = {});

  TypeErrorKind kind() const { return kind_; }
  Span where() const { return where_; }
  const std::string& detail() const { return detail_; }
  const std::optional<AnyType>& expected() const { return expected_; }
  const std::optional<AnyType>& found() const { return found_; }

  /// `file:line:col: Kind: expected τ, found τ'` (or the detail text when no
  /// types are attached).
  std::string render(std::string_view file) const;

 private:
  TypeErrorKind kind_;
  Span where_;
  std::string detail_;
  std::optional<AnyType> expected_, found_;
};

/// Ordered bindings; lookup returns the rightmost.
using Context = std::vector<std::pair<std::string, VType>>;

/// Synthesizes the type of `v`; a non-null `expected` is used as a hint (for
/// `nil` and thunks of unannotated lambdas) and then enforced.
VType check_value(const Context& ctx, const ValuePtr& v, const VType& expected = nullptr);
CType check_comp(const Context& ctx, const CompPtr& t, const CType& expected = nullptr);
/// Empty-context check of a closed program.
CType check_program(const CompPtr& t);

}  // namespace cert
