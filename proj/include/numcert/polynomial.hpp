#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "numcert/scalar.hpp"

namespace numcert {

/// Exponent vector of one monomial x^nu. total_degree() == sum of entries.
struct Monomial {
  std::vector<std::uint32_t> exponents;

  Monomial() = default;
  explicit Monomial(std::size_t num_vars) : exponents(num_vars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : exponents(std::move(e)) {}

  std::size_t num_vars() const { return exponents.size(); }
  std::uint64_t total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), std::uint64_t{0});
  }
  bool is_constant() const {
    return std::all_of(exponents.begin(), exponents.end(), [](auto e) { return e == 0; });
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exponents == b.exponents;
  }
};

/// Canonical term order: graded lexicographic over the declared variable
/// list, leading (highest) term first.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    auto da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db;
    return std::lexicographical_compare(b.exponents.begin(), b.exponents.end(),
                                        a.exponents.begin(), a.exponents.end());
  }
};

/// Sparse multivariate polynomial over the coefficient field S.
/// Invariant: no stored term has a zero coefficient; the zero polynomial
/// has an empty term map.
template <class S>
class Polynomial {
 public:
  using Traits = ScalarTraits<S>;
  using TermMap = std::map<Monomial, S, GrlexGreater>;

  Polynomial() : num_vars_(0) {}
  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, S value) {
    Polynomial p(num_vars);
    p.add_term(Monomial(num_vars), std::move(value));
    return p;
  }
  static Polynomial variable(std::size_t num_vars, std::size_t index) {
    Polynomial p(num_vars);
    Monomial m(num_vars);
    m.exponents[index] = 1;
    p.add_term(std::move(m), Traits::one());
    return p;
  }

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Max total degree over stored terms; 0 for the zero polynomial.
  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
  }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
  }
  S constant_value() const {
    if (terms_.empty()) return Traits::zero();
    return terms_.begin()->second;
  }

  /// Coefficients merge; zero results are dropped.
  void add_term(Monomial m, S coeff) {
    if (Traits::is_zero(coeff)) return;
    auto [it, inserted] = terms_.emplace(std::move(m), coeff);
    if (!inserted) {
      it->second = it->second + coeff;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  bool all_real_coefficients() const {
    for (const auto& [m, c] : terms_)
      if (!Traits::is_real(c)) return false;
    return true;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.check_same_vars(b);
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    a.check_same_vars(b);
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r(a.num_vars_);
    for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_vars(b);
    Polynomial r(a.num_vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(a.num_vars_);
        for (std::size_t j = 0; j < a.num_vars_; ++j)
          m.exponents[j] = ma.exponents[j] + mb.exponents[j];
        r.add_term(std::move(m), ca * cb);
      }
    return r;
  }
  friend Polynomial operator*(const S& s, const Polynomial& a) {
    Polynomial r(a.num_vars_);
    for (const auto& [m, c] : a.terms_) r.add_term(m, s * c);
    return r;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(std::uint32_t k) const {
    Polynomial r = constant(num_vars_, Traits::one());
    for (std::uint32_t i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Formal partial derivative with respect to variable `var`.
  Polynomial derivative(std::size_t var) const {
    Polynomial r(num_vars_);
    for (const auto& [m, c] : terms_) {
      auto e = m.exponents[var];
      if (e == 0) continue;
      Monomial dm = m;
      dm.exponents[var] = e - 1;
      r.add_term(std::move(dm), c * S(Traits::from_rational(Rational(e))));
    }
    return r;
  }

  /// Direct term-by-term evaluation (monomial powers by binary
  /// exponentiation). Exact in exact mode.
  S eval(std::span<const S> x) const {
    if (x.size() != num_vars_)
      throw DimensionMismatch("point dimension does not match polynomial");
    S acc = Traits::zero();
    for (const auto& [m, c] : terms_) {
      S t = c;
      for (std::size_t j = 0; j < num_vars_; ++j)
        if (m.exponents[j] > 0) t = t * pow_scalar(x[j], m.exponents[j]);
      acc = acc + t;
    }
    return acc;
  }

  /// Canonical rendering: terms in graded-lex order, reparseable by
  /// parse_polynomial.
  std::string to_string(std::span<const std::string> var_names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      S coeff = c;
      std::string sign;
      // pull a leading minus out of purely real/imaginary coefficients
      bool negated = false;
      if (Traits::is_real(coeff) && Traits::re(coeff) < 0) negated = true;
      if (Traits::re(coeff) == 0 && Traits::im(coeff) < 0) negated = true;
      if (negated) coeff = -coeff;
      if (first) {
        if (negated) out += "-";
      } else {
        out += negated ? " - " : " + ";
      }
      first = false;
      std::string mono;
      for (std::size_t j = 0; j < num_vars_; ++j) {
        auto e = m.exponents[j];
        if (e == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += var_names[j];
        if (e > 1) mono += "^" + std::to_string(e);
      }
      bool unit = Traits::is_real(coeff) && Traits::re(coeff) == 1;
      if (mono.empty())
        out += Traits::to_string(coeff);
      else if (unit)
        out += mono;
      else
        out += Traits::to_string(coeff) + "*" + mono;
    }
    return out;
  }

 private:
  static S pow_scalar(const S& base, std::uint32_t e) {
    S result = Traits::one();
    S b = base;
    while (e > 0) {
      if (e & 1u) result = result * b;
      b = b * b;
      e >>= 1u;
    }
    return result;
  }
  void check_same_vars(const Polynomial& other) const {
    if (num_vars_ != other.num_vars_)
      throw DimensionMismatch("polynomials declared over different variable counts");
  }

  std::size_t num_vars_;
  TermMap terms_;
};

}  // namespace numcert
