#include "cert/rational.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

namespace cert {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  Rational q;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    q = Rational(mpz_class(std::string(num), 10), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    mpz_class num(std::string(whole) + std::string(frac), 10);
    q = Rational(num, den);
  } else {
    if (!all_digits(text)) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    q = Rational(mpz_class(std::string(text), 10));
  }
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

std::size_t hash_rational(const Rational& q) {
  // Low limbs are enough to spread values; equality is checked exactly.
  std::size_t h = std::hash<long>{}(mpz_get_si(q.get_num_mpz_t()));
  h ^= std::hash<long>{}(mpz_get_si(q.get_den_mpz_t())) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Rational floor_dyadic(const Rational& q, std::size_t bits) {
  if (mpz_sizeinbase(q.get_den_mpz_t(), 2) <= bits + 1) return q;
  mpz_class scaled = mpz_class(q.get_num()) << bits;
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(scaled, mpz_class(1) << bits);
  r.canonicalize();
  return r;
}

}  // namespace cert
