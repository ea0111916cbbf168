#pragma once

// Exact nonnegative rational scalars on top of GMP, wired into Eigen, plus
// the directed double conversions used whenever an exact value crosses into
// floating point. Values stay canonical (gcd 1, positive denominator) because
// every construction path either canonicalizes or inherits canonical inputs.

#include <gmpxx.h>

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "jsr/error.hpp"

namespace Eigen {

// mpq_class as an Eigen scalar. The cost constants only steer unrolling.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = long;
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace jsr {

using Rational = mpq_class;

enum class Rounding { Down, Nearest, Up };

inline bool is_integer(const Rational& q) {
  return mpz_cmp_ui(q.get_den().get_mpz_t(), 1) == 0;
}

// mpq_class(num, den) does not canonicalize, and GMP arithmetic assumes
// canonical operands; always build raw fractions through here.
inline Rational make_rational(long num, long den) {
  if (den == 0) throw Error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// GMP canonical text: "p/q", or plain "p" when the denominator is 1.
inline std::string to_fraction_string(const Rational& q) { return q.get_str(); }

// Directed conversion. mpq_get_d truncates toward zero, so a nudge by at most
// one ulp restores the requested direction; the comparison is exact because
// every finite double is itself a rational.
inline double to_double(const Rational& q, Rounding dir = Rounding::Nearest) {
  double d = q.get_d();
  if (dir == Rounding::Nearest) return d;
  if (!std::isfinite(d)) {
    if (d > 0) return dir == Rounding::Down ? std::numeric_limits<double>::max() : d;
    return dir == Rounding::Up ? std::numeric_limits<double>::lowest() : d;
  }
  if (dir == Rounding::Down) {
    while (Rational(d) > q) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  } else {
    while (Rational(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  }
  return d;
}

namespace detail {

inline mpz_class parse_digits(std::string_view s, const char* what) {
  if (s.empty()) throw ParseError(std::string("expected digits in ") + what);
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw ParseError(std::string("invalid character in ") + what + ": '" + c + "'");
    }
  }
  return mpz_class(std::string(s), 10);
}

}  // namespace detail

// Accepts "p/q" fractions, decimal strings ("3", "0.25", "2.5e-3") and plain
// unsigned integers. Finite decimals convert exactly. Negative values are
// rejected here so nonnegativity holds from the parse boundary inward.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ParseError("empty number");
  if (text.front() == '-') throw ParseError("negative entries are not allowed: '" + std::string(text) + "'");
  if (text.front() == '+') text.remove_prefix(1);

  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    mpz_class num = detail::parse_digits(text.substr(0, slash), "numerator");
    mpz_class den = detail::parse_digits(text.substr(slash + 1), "denominator");
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view mantissa = text;
  long exponent10 = 0;
  auto epos = text.find_first_of("eE");
  if (epos != std::string_view::npos) {
    mantissa = text.substr(0, epos);
    std::string_view es = text.substr(epos + 1);
    bool neg = false;
    if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
      neg = es.front() == '-';
      es.remove_prefix(1);
    }
    mpz_class e = detail::parse_digits(es, "exponent");
    if (!e.fits_slong_p() || std::abs(e.get_si()) > 4096) {
      throw ParseError("exponent out of range in '" + std::string(text) + "'");
    }
    exponent10 = neg ? -e.get_si() : e.get_si();
  }

  std::string digits;
  long frac_len = 0;
  auto dot = mantissa.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(mantissa);
  } else {
    digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
    frac_len = static_cast<long>(mantissa.size() - dot - 1);
  }
  mpz_class scaled = detail::parse_digits(digits, "decimal");

  mpz_class num = scaled, den = 1;
  long shift = exponent10 - frac_len;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift >= 0) num *= pow10; else den = pow10;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational rational_pow(const Rational& q, unsigned long n) {
  if (n == 0) return Rational(1);
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num().get_mpz_t(), n);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den().get_mpz_t(), n);
  return r;  // powers of a canonical fraction stay canonical
}

// The exact n-th root, when it exists in the rationals. In lowest terms p/q
// has a rational root iff p and q are both perfect n-th powers.
inline std::optional<Rational> exact_nth_root(const Rational& x, unsigned long n) {
  if (sgn(x) < 0) return std::nullopt;
  if (n == 1) return x;
  mpz_class rnum, rden;
  if (mpz_root(rnum.get_mpz_t(), x.get_num().get_mpz_t(), n) == 0) return std::nullopt;
  if (mpz_root(rden.get_mpz_t(), x.get_den().get_mpz_t(), n) == 0) return std::nullopt;
  return Rational(rnum, rden);
}

// Uniform access to the two arithmetic backends. The exact backend certifies
// everything it emits; the float64 backend trades that away for speed.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_exact = true;
  static const char* name() { return "exact"; }
  static Rational parse(std::string_view s) { return parse_rational(s); }
  static Rational from_long(long v) { return Rational(v); }
  // Exact: every finite double is a dyadic rational.
  static Rational from_double(double v) { return Rational(v); }
  static void canonicalize(Rational& v) { v.canonicalize(); }
  static Rational pow_uint(const Rational& v, unsigned long n) { return rational_pow(v, n); }
  static double to_double_dir(const Rational& v, Rounding dir) { return to_double(v, dir); }
  static std::string repr(const Rational& v) { return to_fraction_string(v); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool is_exact = false;
  static const char* name() { return "float64"; }
  static double parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
      double num = parse(s.substr(0, slash));
      double den = parse(s.substr(slash + 1));
      if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
      return num / den;
    }
    if (!s.empty() && s.front() == '-') {
      throw ParseError("negative entries are not allowed: '" + std::string(s) + "'");
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(std::string(s), &used);
    } catch (const std::exception&) {
      throw ParseError("invalid number '" + std::string(s) + "'");
    }
    if (used != s.size()) throw ParseError("invalid number '" + std::string(s) + "'");
    return v;
  }
  static double from_long(long v) { return static_cast<double>(v); }
  static double from_double(double v) { return v; }
  static void canonicalize(double&) {}
  static double pow_uint(double v, unsigned long n) { return std::pow(v, static_cast<double>(n)); }
  static double to_double_dir(double v, Rounding) { return v; }
  static std::string repr(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
};

}  // namespace jsr
