#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numcert/common.hpp"
#include "numcert/scalar.hpp"

namespace numcert {

namespace iv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double next_down(double x) { return std::nextafter(x, -kInf); }
inline double next_up(double x) { return std::nextafter(x, kInf); }

// Directed arithmetic on doubles, emulated with error-free transforms:
// the rounded result is widened by one ulp only when the operation was
// inexact, so exact computations (and degenerate intervals at exact roots)
// stay degenerate. Overflow saturates soundly: a +inf overflow of an upper
// bound stays +inf; of a lower bound it clamps to DBL_MAX, which the true
// value exceeds.

inline double add_down(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) return s > 0 ? std::numeric_limits<double>::max() : s;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  if (!(err >= 0)) return next_down(s);
  return s;
}

inline double add_up(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) return s < 0 ? std::numeric_limits<double>::lowest() : s;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  if (!(err <= 0)) return next_up(s);
  return s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b) {
  double p = a * b;
  if (!std::isfinite(p)) {
    if (std::isnan(p)) return p;
    return p > 0 ? std::numeric_limits<double>::max() : p;
  }
  double err = std::fma(a, b, -p);
  if (!(err >= 0)) return next_down(p);
  return p;
}

inline double mul_up(double a, double b) {
  double p = a * b;
  if (!std::isfinite(p)) {
    if (std::isnan(p)) return p;
    return p < 0 ? std::numeric_limits<double>::lowest() : p;
  }
  double err = std::fma(a, b, -p);
  if (!(err <= 0)) return next_up(p);
  return p;
}

inline double sqrt_down(double a) {
  double r = std::sqrt(a);
  if (!std::isfinite(r)) return r;
  double err = std::fma(r, r, -a);
  if (!(err <= 0)) return next_down(r);
  return r;
}

inline double sqrt_up(double a) {
  double r = std::sqrt(a);
  if (!std::isfinite(r)) return r;
  double err = std::fma(r, r, -a);
  if (!(err >= 0)) return next_up(r);
  return r;
}

}  // namespace iv

/// A closed real interval [lo, hi] with the outward-rounding contract:
/// every arithmetic result contains the exact image of its operands.
/// Overflow widens an endpoint to infinity, a sentinel that fails every
/// certification containment test downstream.
struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;

  RealInterval() = default;
  RealInterval(double point) : lo(point), hi(point) {
    if (std::isnan(point)) throw InvalidArgument("NaN interval endpoint");
  }
  RealInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (std::isnan(lo_) || std::isnan(hi_)) throw InvalidArgument("NaN interval endpoint");
    if (lo_ > hi_) throw InvalidArgument("interval endpoints out of order");
  }
  static RealInterval raw(double lo, double hi) {
    RealInterval r;
    r.lo = lo;
    r.hi = hi;
    return r;
  }

  double width() const { return hi - lo; }
  double midpoint() const { return lo + 0.5 * (hi - lo); }
  bool is_bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const RealInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const RealInterval& o) const { return lo <= o.hi && o.lo <= hi; }
  /// Largest absolute value over the interval.
  double abs_upper() const { return std::max(std::fabs(lo), std::fabs(hi)); }

  friend RealInterval operator+(const RealInterval& a, const RealInterval& b) {
    return raw(iv::add_down(a.lo, b.lo), iv::add_up(a.hi, b.hi));
  }
  friend RealInterval operator-(const RealInterval& a, const RealInterval& b) {
    return raw(iv::sub_down(a.lo, b.hi), iv::sub_up(a.hi, b.lo));
  }
  friend RealInterval operator-(const RealInterval& a) { return raw(-a.hi, -a.lo); }
  friend RealInterval operator*(const RealInterval& a, const RealInterval& b) {
    double lo = std::min(std::min(iv::mul_down(a.lo, b.lo), iv::mul_down(a.lo, b.hi)),
                         std::min(iv::mul_down(a.hi, b.lo), iv::mul_down(a.hi, b.hi)));
    double hi = std::max(std::max(iv::mul_up(a.lo, b.lo), iv::mul_up(a.lo, b.hi)),
                         std::max(iv::mul_up(a.hi, b.lo), iv::mul_up(a.hi, b.hi)));
    return raw(lo, hi);
  }
  friend bool operator==(const RealInterval& a, const RealInterval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

/// Enclosure of sqrt over a nonnegative interval (used for norm bounds).
inline RealInterval interval_sqrt(const RealInterval& a) {
  if (a.lo < 0) throw InvalidArgument("interval_sqrt of a negative interval");
  return RealInterval::raw(iv::sqrt_down(a.lo), iv::sqrt_up(a.hi));
}

/// The rectangle [re.lo, re.hi] + i [im.lo, im.hi] in the complex plane;
/// containment is componentwise.
struct ComplexInterval {
  RealInterval re;
  RealInterval im;

  ComplexInterval() = default;
  ComplexInterval(RealInterval re_, RealInterval im_ = RealInterval(0.0))
      : re(re_), im(im_) {}
  explicit ComplexInterval(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

  bool is_bounded() const { return re.is_bounded() && im.is_bounded(); }
  bool contains(const std::complex<double>& z) const {
    return re.contains(z.real()) && im.contains(z.imag());
  }
  bool contains(const ComplexInterval& o) const {
    return re.contains(o.re) && im.contains(o.im);
  }
  bool intersects(const ComplexInterval& o) const {
    return re.intersects(o.re) && im.intersects(o.im);
  }
  std::complex<double> midpoint() const { return {re.midpoint(), im.midpoint()}; }
  ComplexInterval conjugate() const { return {re, -im}; }
  /// sup |z| over the rectangle (rigorous upper bound).
  double mag_upper() const {
    double mr = re.abs_upper(), mi = im.abs_upper();
    return iv::sqrt_up(iv::add_up(iv::mul_up(mr, mr), iv::mul_up(mi, mi)));
  }

  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexInterval operator-(const ComplexInterval& a) { return {-a.re, -a.im}; }
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const ComplexInterval& a, const ComplexInterval& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Builds a complex interval from real/imaginary parts; a missing imaginary
/// part is the zero interval.
inline ComplexInterval make_complex_interval(RealInterval re,
                                             std::optional<RealInterval> im = {}) {
  return {re, im.value_or(RealInterval(0.0))};
}

/// k = 0 gives [1,1]; otherwise left-associated repeated multiplication
/// (this reproduces the reference power semantics; a^1 is a itself).
inline ComplexInterval pow(const ComplexInterval& a, std::uint32_t k) {
  if (k == 0) return ComplexInterval(RealInterval(1.0));
  ComplexInterval r = a;
  for (std::uint32_t i = 1; i < k; ++i) r = r * a;
  return r;
}

/// An n-dimensional complex interval box.
struct IntervalBox {
  std::vector<ComplexInterval> entries;

  IntervalBox() = default;
  explicit IntervalBox(std::vector<ComplexInterval> e) : entries(std::move(e)) {}

  std::size_t size() const { return entries.size(); }
  const ComplexInterval& operator[](std::size_t i) const { return entries[i]; }
  ComplexInterval& operator[](std::size_t i) { return entries[i]; }

  std::vector<std::complex<double>> midpoint() const {
    std::vector<std::complex<double>> m;
    m.reserve(entries.size());
    for (const auto& e : entries) m.push_back(e.midpoint());
    return m;
  }
  bool contains(const IntervalBox& o) const {
    if (o.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (!entries[i].contains(o.entries[i])) return false;
    return true;
  }
  /// True when the boxes provably share no point (disjoint in some
  /// coordinate).
  bool disjoint_from(const IntervalBox& o) const {
    if (o.size() != size()) throw DimensionMismatch("boxes of different dimension");
    for (std::size_t i = 0; i < size(); ++i)
      if (!entries[i].intersects(o.entries[i])) return true;
    return false;
  }
  IntervalBox conjugate() const {
    IntervalBox r;
    r.entries.reserve(entries.size());
    for (const auto& e : entries) r.entries.push_back(e.conjugate());
    return r;
  }
  double max_width() const {
    double w = 0.0;
    for (const auto& e : entries) w = std::max({w, e.re.width(), e.im.width()});
    return w;
  }
};

/// A dense matrix of complex intervals.
struct IntervalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<ComplexInterval> data;

  IntervalMatrix() = default;
  IntervalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  ComplexInterval& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const ComplexInterval& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  static IntervalMatrix identity(std::size_t n) {
    IntervalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ComplexInterval(RealInterval(1.0));
    return m;
  }

  friend IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (a.cols != b.rows) throw DimensionMismatch("interval matrix product shape mismatch");
    IntervalMatrix r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t j = 0; j < b.cols; ++j) {
        ComplexInterval acc;
        for (std::size_t k = 0; k < a.cols; ++k) acc = acc + a(i, k) * b(k, j);
        r(i, j) = acc;
      }
    return r;
  }
  friend IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
      throw DimensionMismatch("interval matrix difference shape mismatch");
    IntervalMatrix r(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) r.data[i] = a.data[i] - b.data[i];
    return r;
  }

  /// Upper bound of the max-norm operator norm: max over rows of the sum
  /// of entry magnitude suprema. Dominates ||M||_inf for every point
  /// matrix contained in the interval matrix.
  double max_norm_upper() const {
    double norm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < cols; ++j) row = iv::add_up(row, (*this)(i, j).mag_upper());
      norm = std::max(norm, row);
    }
    return norm;
  }
};

// ---- Text format ----------------------------------------------------------
// Intervals render as "[lo,hi] + [lo,hi]*ii", the session output style.
// Negative zero prints as 0; endpoints use shortest round-trip decimals.

namespace detail {

inline std::string endpoint_to_string(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  return double_to_string(v);
}

}  // namespace detail

inline std::string to_string(const RealInterval& r) {
  return "[" + detail::endpoint_to_string(r.lo) + "," + detail::endpoint_to_string(r.hi) + "]";
}

inline std::string to_string(const ComplexInterval& c) {
  return to_string(c.re) + " + " + to_string(c.im) + "*ii";
}

inline std::string to_string(const IntervalBox& b) {
  std::string out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) out += ", ";
    out += to_string(b[i]);
  }
  return out;
}

namespace detail {

inline double parse_endpoint(std::string_view s, std::size_t base_pos) {
  double v = 0.0;
  auto first = s.data();
  auto last = s.data() + s.size();
  while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ParseError("malformed interval endpoint '" + std::string(s) + "'", base_pos);
  return v;
}

inline RealInterval parse_real_interval(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos >= s.size() || s[pos] != '[') throw ParseError("expected '['", pos);
  auto close = s.find(']', pos);
  if (close == std::string_view::npos) throw ParseError("missing ']'", pos);
  auto body = s.substr(pos + 1, close - pos - 1);
  auto comma = body.find(',');
  if (comma == std::string_view::npos) throw ParseError("expected ',' inside interval", pos);
  double lo = parse_endpoint(body.substr(0, comma), pos + 1);
  double hi = parse_endpoint(body.substr(comma + 1), pos + 2 + comma);
  pos = close + 1;
  return RealInterval(lo, hi);
}

}  // namespace detail

/// Parses "[lo,hi] + [lo,hi]*ii" (the imaginary part is optional).
inline ComplexInterval parse_complex_interval(std::string_view s) {
  std::size_t pos = 0;
  RealInterval re = detail::parse_real_interval(s, pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == s.size()) return ComplexInterval(re);
  if (s[pos] != '+') throw ParseError("expected '+' before imaginary part", pos);
  ++pos;
  RealInterval im = detail::parse_real_interval(s, pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos + 3 > s.size() || s.substr(pos, 3) != "*ii")
    throw ParseError("expected '*ii' after imaginary part", pos);
  pos += 3;
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw ParseError("unexpected trailing input in interval literal", pos);
  return {re, im};
}

/// Parses a comma-separated list of complex interval literals into a box
/// (commas inside brackets do not split).
inline IntervalBox parse_interval_box(std::string_view s) {
  std::vector<ComplexInterval> entries;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] == '[') ++depth;
    if (i < s.size() && s[i] == ']') --depth;
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      auto piece = s.substr(start, i - start);
      if (piece.find_first_not_of(" \t") != std::string_view::npos)
        entries.push_back(parse_complex_interval(piece));
      start = i + 1;
    }
  }
  if (entries.empty()) throw ParseError("empty interval box literal", 0);
  return IntervalBox(std::move(entries));
}

}  // namespace numcert
