#pragma once

#include <stdexcept>
#include <string>

namespace cert {

/// Source position; line 0 means "no position" (programmatically built terms).
struct Span {
  int line = 0;
  int col = 0;
};

class CertError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public CertError {
 public:
  ParseError(Span where, std::string message, std::string expected)
      : CertError(std::to_string(where.line) + ":" + std::to_string(where.col) + ": " + message),
        where_(where),
        expected_(std::move(expected)) {}

  Span where() const { return where_; }
  /// Human-readable set of tokens that would have been accepted.
  const std::string& expected() const { return expected_; }

 private:
  Span where_;
  std::string expected_;
};

enum class EvalErrorKind { StuckTerm, ArithmeticError, ContinuousUnsupported };

class EvalError : public CertError {
 public:
  EvalError(EvalErrorKind kind, const std::string& message)
      : CertError(std::string(kind_name(kind)) + ": " + message), kind_(kind) {}

  EvalErrorKind kind() const { return kind_; }

  static const char* kind_name(EvalErrorKind k) {
    switch (k) {
      case EvalErrorKind::StuckTerm: return "StuckTerm";
      case EvalErrorKind::ArithmeticError: return "ArithmeticError";
      case EvalErrorKind::ContinuousUnsupported: return "ContinuousUnsupported";
    }
    return "EvalError";
  }

 private:
  EvalErrorKind kind_;
};

}  // namespace cert
