#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "numcert/polynomial.hpp"

namespace numcert {

/// A candidate solution: one coordinate per system variable.
template <class S>
struct Point {
  std::vector<S> coords;

  Point() = default;
  explicit Point(std::vector<S> c) : coords(std::move(c)) {}

  std::size_t size() const { return coords.size(); }
  const S& operator[](std::size_t i) const { return coords[i]; }
  S& operator[](std::size_t i) { return coords[i]; }

  Point conjugate() const {
    Point r;
    r.coords.reserve(coords.size());
    for (const auto& c : coords) r.coords.push_back(ScalarTraits<S>::conjugate(c));
    return r;
  }
};

/// Squared Euclidean norm; exact in exact mode.
template <class S>
typename ScalarTraits<S>::Real norm2(const Point<S>& x) {
  typename ScalarTraits<S>::Real s{};
  for (const auto& c : x.coords) s += ScalarTraits<S>::abs2(c);
  return s;
}

/// Squared Euclidean distance between two points.
template <class S>
typename ScalarTraits<S>::Real distance2(const Point<S>& x, const Point<S>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("points of different dimension");
  typename ScalarTraits<S>::Real s{};
  for (std::size_t i = 0; i < x.size(); ++i)
    s += ScalarTraits<S>::abs2(x.coords[i] - y.coords[i]);
  return s;
}

/// An n x n square polynomial system. Construction enforces squareness,
/// consistent variable counts, and degree >= 1 for every member (a square
/// system with a constant equation is inconsistent or degenerate, and the
/// gamma bound needs d_i >= 1).
template <class S>
class PolySystem {
 public:
  PolySystem() = default;
  explicit PolySystem(std::vector<Polynomial<S>> polys) : polys_(std::move(polys)) {
    if (polys_.empty()) throw InvalidSystem("a system needs at least one polynomial");
    num_vars_ = polys_.front().num_vars();
    if (polys_.size() != num_vars_)
      throw InvalidSystem("system is not square: " + std::to_string(polys_.size()) +
                          " polynomials in " + std::to_string(num_vars_) + " variables");
    degrees_.reserve(polys_.size());
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      if (polys_[i].num_vars() != num_vars_)
        throw InvalidSystem("polynomial " + std::to_string(i + 1) +
                            " disagrees on the variable count");
      auto d = polys_[i].degree();
      if (d < 1 || polys_[i].is_zero())
        throw InvalidSystem("polynomial " + std::to_string(i + 1) +
                            " is constant; constant equations are not allowed");
      degrees_.push_back(d);
      max_degree_ = std::max(max_degree_, d);
    }
  }

  std::size_t num_vars() const { return num_vars_; }
  std::size_t size() const { return polys_.size(); }
  const Polynomial<S>& operator[](std::size_t i) const { return polys_[i]; }
  const std::vector<Polynomial<S>>& polys() const { return polys_; }
  const std::vector<std::uint64_t>& degrees() const { return degrees_; }
  std::uint64_t max_degree() const { return max_degree_; }

  bool all_real_coefficients() const {
    for (const auto& p : polys_)
      if (!p.all_real_coefficients()) return false;
    return true;
  }

  void check_point(const Point<S>& x) const {
    if (x.size() != num_vars_)
      throw DimensionMismatch("point dimension " + std::to_string(x.size()) +
                              " does not match system in " + std::to_string(num_vars_) +
                              " variables");
  }

 private:
  std::vector<Polynomial<S>> polys_;
  std::size_t num_vars_ = 0;
  std::vector<std::uint64_t> degrees_;
  std::uint64_t max_degree_ = 0;
};

/// F(x) by direct term-by-term evaluation.
template <class S>
std::vector<S> evaluate(const PolySystem<S>& F, const Point<S>& x) {
  F.check_point(x);
  std::vector<S> out;
  out.reserve(F.size());
  for (const auto& p : F.polys()) out.push_back(p.eval(x.coords));
  return out;
}

/// The formal Jacobian: entry (i, j) is d f_i / d x_j.
template <class S>
std::vector<std::vector<Polynomial<S>>> jacobian(const PolySystem<S>& F) {
  std::vector<std::vector<Polynomial<S>>> J;
  J.reserve(F.size());
  for (const auto& p : F.polys()) {
    std::vector<Polynomial<S>> row;
    row.reserve(F.num_vars());
    for (std::size_t j = 0; j < F.num_vars(); ++j) row.push_back(p.derivative(j));
    J.push_back(std::move(row));
  }
  return J;
}

/// F'(x), row-major.
template <class S>
std::vector<S> evaluate_jacobian(const PolySystem<S>& F, const Point<S>& x) {
  F.check_point(x);
  std::vector<S> out;
  out.reserve(F.size() * F.num_vars());
  for (const auto& p : F.polys())
    for (std::size_t j = 0; j < F.num_vars(); ++j)
      out.push_back(p.derivative(j).eval(x.coords));
  return out;
}

/// Evaluation schedule for a system and its Jacobian: per-variable power
/// tables shared across terms, then one accumulation pass per polynomial.
/// Matches direct evaluation to roundoff (exactly in exact mode).
template <class S>
class EvalProgram {
 public:
  explicit EvalProgram(const PolySystem<S>& F) : n_(F.num_vars()), max_pow_(F.num_vars(), 0) {
    auto J = jacobian(F);
    sys_offsets_.push_back(0);
    for (const auto& p : F.polys()) {
      append_poly(p, sys_terms_);
      sys_offsets_.push_back(static_cast<std::uint32_t>(sys_terms_.size()));
    }
    jac_offsets_.push_back(0);
    for (const auto& row : J)
      for (const auto& p : row) {
        append_poly(p, jac_terms_);
        jac_offsets_.push_back(static_cast<std::uint32_t>(jac_terms_.size()));
      }
  }

  std::size_t num_vars() const { return n_; }

  /// values[i] = f_i(x).
  void eval(std::span<const S> x, std::vector<S>& values) const {
    auto powers = power_table(x);
    values.assign(n_, ScalarTraits<S>::zero());
    accumulate(sys_terms_, sys_offsets_, powers, values);
  }

  /// values[i] = f_i(x); jac[i*n+j] = d f_i / d x_j (x).
  void eval_with_jacobian(std::span<const S> x, std::vector<S>& values,
                          std::vector<S>& jac) const {
    auto powers = power_table(x);
    values.assign(n_, ScalarTraits<S>::zero());
    accumulate(sys_terms_, sys_offsets_, powers, values);
    jac.assign(n_ * n_, ScalarTraits<S>::zero());
    accumulate(jac_terms_, jac_offsets_, powers, jac);
  }

 private:
  struct Factor {
    std::uint32_t var;
    std::uint32_t pow;
  };
  struct Term {
    S coeff;
    std::uint32_t begin;
    std::uint32_t end;
  };

  void append_poly(const Polynomial<S>& p, std::vector<Term>& dst) {
    for (const auto& [m, c] : p.terms()) {
      Term t{c, static_cast<std::uint32_t>(factors_.size()), 0};
      for (std::size_t j = 0; j < n_; ++j) {
        if (m.exponents[j] == 0) continue;
        factors_.push_back({static_cast<std::uint32_t>(j), m.exponents[j]});
        max_pow_[j] = std::max(max_pow_[j], m.exponents[j]);
      }
      t.end = static_cast<std::uint32_t>(factors_.size());
      dst.push_back(std::move(t));
    }
  }

  std::vector<std::vector<S>> power_table(std::span<const S> x) const {
    if (x.size() != n_) throw DimensionMismatch("point dimension does not match program");
    std::vector<std::vector<S>> powers(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      powers[j].reserve(max_pow_[j] + 1);
      powers[j].push_back(ScalarTraits<S>::one());
      for (std::uint32_t k = 1; k <= max_pow_[j]; ++k)
        powers[j].push_back(powers[j].back() * x[j]);
    }
    return powers;
  }

  void accumulate(const std::vector<Term>& terms, const std::vector<std::uint32_t>& offsets,
                  const std::vector<std::vector<S>>& powers, std::vector<S>& out) const {
    for (std::size_t slot = 0; slot + 1 < offsets.size(); ++slot) {
      S acc = ScalarTraits<S>::zero();
      for (std::uint32_t t = offsets[slot]; t < offsets[slot + 1]; ++t) {
        S v = terms[t].coeff;
        for (std::uint32_t f = terms[t].begin; f < terms[t].end; ++f)
          v = v * powers[factors_[f].var][factors_[f].pow];
        acc = acc + v;
      }
      out[slot] = acc;
    }
  }

  std::size_t n_;
  std::vector<std::uint32_t> max_pow_;
  std::vector<Factor> factors_;
  std::vector<Term> sys_terms_, jac_terms_;
  std::vector<std::uint32_t> sys_offsets_, jac_offsets_;
};

// ---- Bombieri-Weyl norms -------------------------------------------------

/// ||f||^2 = (1/d!) * sum_nu nu! (d-|nu|)! |a_nu|^2, in the mode's real type
/// (exact rational in exact mode).
template <class S>
typename ScalarTraits<S>::Real bombieri_weyl_norm2(const Polynomial<S>& f) {
  using Traits = ScalarTraits<S>;
  typename Traits::Real s{};
  if (f.is_zero()) return s;
  const std::uint64_t d = f.degree();
  BigInt dfact = 1;
  for (std::uint64_t k = 2; k <= d; ++k) dfact *= k;
  for (const auto& [m, c] : f.terms()) {
    BigInt w = 1;
    for (auto e : m.exponents)
      for (std::uint32_t k = 2; k <= e; ++k) w *= k;
    for (std::uint64_t k = 2; k <= d - m.total_degree(); ++k) w *= k;
    s += Traits::real_from_rational(Rational(w, dfact)) * Traits::abs2(c);
  }
  return s;
}

/// ||f||, approximate mode.
inline double bombieri_weyl_norm(const Polynomial<ApproxScalar>& f) {
  return std::sqrt(bombieri_weyl_norm2(f));
}

/// ||F||^2 = sum ||f_i||^2 over any list of polynomials.
template <class S>
typename ScalarTraits<S>::Real system_norm2(std::span<const Polynomial<S>> polys) {
  typename ScalarTraits<S>::Real s{};
  for (const auto& p : polys) s += bombieri_weyl_norm2(p);
  return s;
}

template <class S>
typename ScalarTraits<S>::Real system_norm2(const PolySystem<S>& F) {
  return system_norm2(std::span<const Polynomial<S>>(F.polys()));
}

inline double system_norm(std::span<const Polynomial<ApproxScalar>> polys) {
  return std::sqrt(system_norm2(polys));
}
inline double system_norm(const PolySystem<ApproxScalar>& F) {
  return std::sqrt(system_norm2(F));
}

/// ||(1,x)||^2 = 1 + sum |x_i|^2.
template <class S>
typename ScalarTraits<S>::Real projective_point_norm2(const Point<S>& x) {
  typename ScalarTraits<S>::Real s = ScalarTraits<S>::real_from_rational(Rational(1));
  for (const auto& c : x.coords) s += ScalarTraits<S>::abs2(c);
  return s;
}

inline double projective_point_norm(const Point<ApproxScalar>& x) {
  return std::sqrt(projective_point_norm2(x));
}

/// Diagonal of Delta_F(x): sqrt(d_i) * ||(1,x)||^(d_i - 1). Approximate mode.
inline std::vector<double> delta_diagonal(const PolySystem<ApproxScalar>& F,
                                          const Point<ApproxScalar>& x) {
  F.check_point(x);
  double pn = projective_point_norm(x);
  std::vector<double> d;
  d.reserve(F.size());
  for (auto di : F.degrees())
    d.push_back(std::sqrt(static_cast<double>(di)) *
                std::pow(pn, static_cast<double>(di - 1)));
  return d;
}

}  // namespace numcert
