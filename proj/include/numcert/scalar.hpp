#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

#include "numcert/common.hpp"

namespace numcert {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// An element of the Gaussian rationals Q(i): re + im*i with exact
/// rational components. Supports the field operations without rounding.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  explicit GaussianRational(long long v) : re(v) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational d = b.re * b.re + b.im * b.im;
    if (d == 0) throw InvalidArgument("division by zero in Q(i)");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline GaussianRational conj(const GaussianRational& z) { return {z.re, -z.im}; }

namespace detail {

/// Parses "p/q", an integer, or a decimal with optional exponent
/// ("3.5", ".25", "1e-7") into an exact rational.
inline BigInt bigint_from_decimal(std::string s) {
  bool neg = false;
  std::size_t start = 0;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) neg = (s[start++] == '-');
  // strip leading zeros: boost would read "0..." as octal
  while (start + 1 < s.size() && s[start] == '0') ++start;
  BigInt v(s.substr(start));
  return neg ? -v : v;
}

inline Rational rational_from_string(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidArgument("empty numeric literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num = bigint_from_decimal(s.substr(0, slash));
    BigInt den = bigint_from_decimal(s.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in rational literal '" + s + "'");
    return Rational(num, den);
  }
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
  std::string digits;
  long long frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) throw InvalidArgument("malformed numeric literal '" + s + "'");
      seen_dot = true;
    } else {
      digits += s[i];
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    }
  }
  long long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t pos = i;
    bool eneg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) eneg = (s[pos++] == '-');
    if (pos >= s.size()) throw InvalidArgument("malformed exponent in '" + s + "'");
    for (; pos < s.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(s[pos])))
        throw InvalidArgument("malformed exponent in '" + s + "'");
      exponent = exponent * 10 + (s[pos] - '0');
    }
    if (eneg) exponent = -exponent;
    i = pos;
  }
  if (!seen_digit || i != s.size())
    throw InvalidArgument("malformed numeric literal '" + s + "'");
  Rational r(bigint_from_decimal(digits.empty() ? "0" : digits));
  long long shift = exponent - frac_digits;
  if (shift > 0)
    r *= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift)));
  else if (shift < 0)
    r /= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-shift)));
  if (neg) r = -r;
  return r;
}

inline std::string rational_to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1)
    return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Shortest decimal representation that round-trips through a double.
inline std::string double_to_string(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Operations a coefficient field must provide. Two instantiations exist:
/// ApproxScalar (IEEE double complex) and GaussianRational (exact Q(i)).
template <class S>
struct ScalarTraits;

using ApproxScalar = std::complex<double>;

template <>
struct ScalarTraits<ApproxScalar> {
  using Real = double;
  static constexpr bool exact = false;

  static ApproxScalar zero() { return {0.0, 0.0}; }
  static ApproxScalar one() { return {1.0, 0.0}; }
  static ApproxScalar imaginary_unit() { return {0.0, 1.0}; }
  static ApproxScalar from_rational(const Rational& re) {
    return {re.convert_to<double>(), 0.0};
  }
  static ApproxScalar make(const Rational& re, const Rational& im) {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }
  static ApproxScalar conjugate(const ApproxScalar& z) { return std::conj(z); }
  static Real abs2(const ApproxScalar& z) { return std::norm(z); }
  static Real re(const ApproxScalar& z) { return z.real(); }
  static Real im(const ApproxScalar& z) { return z.imag(); }
  static bool is_zero(const ApproxScalar& z) { return z.real() == 0.0 && z.imag() == 0.0; }
  static bool is_real(const ApproxScalar& z) { return z.imag() == 0.0; }
  static Real real_from_rational(const Rational& r) { return r.convert_to<double>(); }
  static std::complex<double> to_complex(const ApproxScalar& z) { return z; }
  static std::string to_string(const ApproxScalar& z);
};

template <>
struct ScalarTraits<GaussianRational> {
  using Real = Rational;
  static constexpr bool exact = true;

  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return GaussianRational(Rational(1)); }
  static GaussianRational imaginary_unit() { return {Rational(0), Rational(1)}; }
  static GaussianRational from_rational(const Rational& re) { return GaussianRational(re); }
  static GaussianRational make(const Rational& re, const Rational& im) { return {re, im}; }
  static GaussianRational conjugate(const GaussianRational& z) { return conj(z); }
  static Real abs2(const GaussianRational& z) { return z.re * z.re + z.im * z.im; }
  static Real re(const GaussianRational& z) { return z.re; }
  static Real im(const GaussianRational& z) { return z.im; }
  static bool is_zero(const GaussianRational& z) { return z.re == 0 && z.im == 0; }
  static bool is_real(const GaussianRational& z) { return z.im == 0; }
  static Real real_from_rational(const Rational& r) { return r; }
  static std::complex<double> to_complex(const GaussianRational& z) {
    return {z.re.convert_to<double>(), z.im.convert_to<double>()};
  }
  static std::string to_string(const GaussianRational& z);
};

inline std::string ScalarTraits<ApproxScalar>::to_string(const ApproxScalar& z) {
  if (z.imag() == 0.0) return detail::double_to_string(z.real());
  if (z.real() == 0.0) return detail::double_to_string(z.imag()) + "*ii";
  std::string im_part = z.imag() < 0 ? " - " + detail::double_to_string(-z.imag())
                                     : " + " + detail::double_to_string(z.imag());
  return "(" + detail::double_to_string(z.real()) + im_part + "*ii)";
}

inline std::string ScalarTraits<GaussianRational>::to_string(const GaussianRational& z) {
  if (z.im == 0) return detail::rational_to_string(z.re);
  if (z.re == 0) return detail::rational_to_string(z.im) + "*ii";
  std::string im_part = z.im < 0 ? " - " + detail::rational_to_string(-z.im)
                                 : " + " + detail::rational_to_string(z.im);
  return "(" + detail::rational_to_string(z.re) + im_part + "*ii)";
}

}  // namespace numcert
