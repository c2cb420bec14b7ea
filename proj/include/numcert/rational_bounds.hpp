#pragma once

#include "numcert/scalar.hpp"

namespace numcert {

/// Controls how tightly exact-mode square-root upper bounds enclose the
/// true value: every returned r for sqrt(q) satisfies
/// sqrt(q) <= r <= sqrt(q) * (1 + sqrt_slack).
struct ExactBoundContext {
  Rational sqrt_slack = Rational(1, 1000000);
};

namespace detail {

inline BigInt isqrt_floor(const BigInt& v) { return boost::multiprecision::sqrt(v); }

inline BigInt isqrt_ceil(const BigInt& v) {
  BigInt s = isqrt_floor(v);
  if (s * s < v) ++s;
  return s;
}

}  // namespace detail

/// Deterministic rational upper bound for sqrt(q). Perfect squares return
/// exactly; otherwise the bound is ceil(sqrt(num*den*N^2))/(den*N) with N
/// the smallest power of two >= 2/sqrt_slack, which keeps the relative
/// slack within contract and is monotone as the slack shrinks.
inline Rational rational_sqrt_upper(const Rational& q, const ExactBoundContext& ctx = {}) {
  if (q < 0) throw InvalidArgument("rational_sqrt_upper of a negative value");
  if (q == 0) return Rational(0);
  if (ctx.sqrt_slack <= 0) throw InvalidArgument("sqrt_slack must be positive");
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt ns = detail::isqrt_floor(num);
  BigInt ds = detail::isqrt_floor(den);
  if (ns * ns == num && ds * ds == den) return Rational(ns, ds);
  BigInt scale = 1;
  while (Rational(2) > ctx.sqrt_slack * Rational(scale)) scale <<= 1;
  BigInt s = detail::isqrt_ceil(num * den * scale * scale);
  return Rational(s, den * scale);
}

}  // namespace numcert
