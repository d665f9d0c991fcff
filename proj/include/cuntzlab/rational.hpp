#ifndef CUNTZLAB_RATIONAL_HPP
#define CUNTZLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <cctype>
#include <ostream>
#include <string>
#include <string_view>

#include "error.hpp"

namespace cuntzlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q" or "p" with optional leading sign. Decimal points and
/// exponents are rejected: every input that feeds a ledger must be exact.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&](const char* why) -> Rational {
    throw ParseError("not an exact rational '" + s + "': " + why);
  };
  if (s.empty()) return fail("empty");
  auto slash = s.find('/');
  auto check_int = [&](std::string_view part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  std::string_view num = std::string_view(s).substr(0, slash);
  std::string_view den =
      slash == std::string::npos ? std::string_view{"1"}
                                 : std::string_view(s).substr(slash + 1);
  if (!check_int(num, true) || !check_int(den, false))
    return fail("expected integer or integer/integer");
  std::string n(num);
  if (!n.empty() && n[0] == '+') n.erase(0, 1);
  Integer zn(n, 10), zd(std::string(den), 10);
  if (zd == 0) return fail("zero denominator");
  Rational q(zn, zd);
  q.canonicalize();
  return q;
}

/// n / d in canonical form.
inline Rational ratio(const Integer& n, const Integer& d) {
  if (sgn(d) == 0) throw DomainError("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// Always "num/den", also for integers, so machine-readable outputs have a
/// single shape.
inline std::string to_fraction(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact complex scalar with rational real and imaginary parts.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT
  GaussianRational(long r) : re(r), im(0) {}                 // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  GaussianRational conj() const { return {re, -im}; }
  Rational norm2() const { return re * re + im * im; }
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  friend GaussianRational operator+(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) {
    return {-a.re, -a.im};
  }
  friend GaussianRational operator*(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a,
                                    const GaussianRational& b) {
    Rational n = b.norm2();
    if (sgn(n) == 0) throw DomainError("division by zero Gaussian rational");
    GaussianRational t = a * b.conj();
    return {t.re / n, t.im / n};
  }
  GaussianRational& operator+=(const GaussianRational& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
    os << z.re;
    if (sgn(z.im) != 0) os << (sgn(z.im) > 0 ? "+" : "-") << abs(z.im) << "i";
    return os;
  }
};

}  // namespace cuntzlab

#endif  // CUNTZLAB_RATIONAL_HPP
