#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "numcert/linalg.hpp"
#include "numcert/rational_bounds.hpp"
#include "numcert/system.hpp"

namespace numcert {

// The Smale constants are carried as their squares throughout: beta2 is
// ||F'(x)^{-1} F(x)||^2, gamma2 the squared Proposition-5 bound
// (mu * d^{3/2} / (2||(1,x)||))^2 with the Frobenius norm inside mu, and
// alpha2 = beta2 * gamma2. Squares keep exact mode closed under rational
// arithmetic (no square roots anywhere) and match the reference session
// output digit for digit; every threshold below is squared accordingly.

/// Squared certification threshold ((13 - 3*sqrt(17))/4)^2.
inline constexpr double kAlphaThreshold2 = 0.02486007511390482;
/// Squared 0.03 threshold from the distinctness/realness criteria.
inline constexpr double kSameThreshold2 = 9.0e-4;

template <class S>
struct AlphaConstants {
  using Real = typename ScalarTraits<S>::Real;
  Real alpha2{};
  Real beta2{};
  Real gamma2{};
  Real mu2{};
  /// When set, all constants are +infinity (Real holds no infinity in
  /// exact mode; the flag is authoritative in both modes).
  bool singular_jacobian = false;
};

enum class DistinctVerdict { Distinct, Same, Undecided };
enum class RealnessVerdict { Real, NotReal, Undecided };

namespace detail {

template <class S>
typename ScalarTraits<S>::Real delta2_entry(std::uint64_t deg,
                                            const typename ScalarTraits<S>::Real& pn2) {
  // Delta_ii^2 = d_i * ||(1,x)||^(2(d_i - 1))
  using Traits = ScalarTraits<S>;
  typename Traits::Real r = Traits::real_from_rational(Rational(deg));
  for (std::uint64_t k = 1; k < deg; ++k) r *= pn2;
  return r;
}

}  // namespace detail

/// (alpha^2, beta^2, gamma^2) for an approximate-mode pair. A numerically
/// singular Jacobian yields infinite constants and the singular flag.
inline AlphaConstants<ApproxScalar> compute_constants(const PolySystem<ApproxScalar>& F,
                                                      const Point<ApproxScalar>& x,
                                                      const EvalProgram<ApproxScalar>* prog = nullptr) {
  F.check_point(x);
  const std::size_t n = F.num_vars();
  std::vector<ApproxScalar> values, jac;
  if (prog) {
    prog->eval_with_jacobian(x.coords, values, jac);
  } else {
    EvalProgram<ApproxScalar> local(F);
    local.eval_with_jacobian(x.coords, values, jac);
  }
  AlphaConstants<ApproxScalar> out;
  auto lu = detail::lu_with_threshold(detail::to_eigen(jac, n));
  if (!lu.isInvertible()) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    out.alpha2 = out.beta2 = out.gamma2 = out.mu2 = inf;
    out.singular_jacobian = true;
    return out;
  }
  Eigen::VectorXcd v = lu.solve(detail::to_eigen(values));
  out.beta2 = v.squaredNorm();
  Eigen::MatrixXcd Jinv = lu.inverse();
  const double pn2 = projective_point_norm2(x);
  double fro2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col2 = Jinv.col(static_cast<Eigen::Index>(j)).squaredNorm();
    fro2 += col2 * detail::delta2_entry<ApproxScalar>(F.degrees()[j], pn2);
  }
  const double d = static_cast<double>(F.max_degree());
  out.mu2 = std::max(1.0, system_norm2(F) * fro2);
  out.gamma2 = out.mu2 * d * d * d / (4.0 * pn2);
  out.alpha2 = out.beta2 * out.gamma2;
  return out;
}

/// Exact-mode constants over Q(i): the squared values are exact rationals.
inline AlphaConstants<GaussianRational> compute_constants(const PolySystem<GaussianRational>& F,
                                                          const Point<GaussianRational>& x) {
  using Traits = ScalarTraits<GaussianRational>;
  F.check_point(x);
  const std::size_t n = F.num_vars();
  auto values = evaluate(F, x);
  auto jac = evaluate_jacobian(F, x);
  AlphaConstants<GaussianRational> out;
  auto v = detail::exact_solve(jac, values);
  auto inv = detail::exact_inverse(jac, n);
  if (!v || !inv) {
    out.singular_jacobian = true;
    return out;
  }
  for (const auto& c : *v) out.beta2 += Traits::abs2(c);
  const Rational pn2 = projective_point_norm2(x);
  Rational fro2 = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      fro2 += Traits::abs2((*inv)[i * n + j]) *
              detail::delta2_entry<GaussianRational>(F.degrees()[j], pn2);
  out.mu2 = std::max(Rational(1), system_norm2(F) * fro2);
  const Rational d3 = Rational(BigInt(F.max_degree()) * F.max_degree() * F.max_degree());
  out.gamma2 = out.mu2 * d3 / (4 * pn2);
  out.alpha2 = out.beta2 * out.gamma2;
  return out;
}

/// alpha < (13 - 3*sqrt(17))/4, decided on the squares.
inline bool certify_regular(const AlphaConstants<ApproxScalar>& c) {
  return !c.singular_jacobian && c.alpha2 < kAlphaThreshold2;
}

/// Exact variant of the threshold test: with A = alpha^2 rational,
/// alpha < (13-3*sqrt(17))/4 iff 8A < 161 and (161-8A)^2 > 25857.
inline bool certify_regular(const AlphaConstants<GaussianRational>& c) {
  if (c.singular_jacobian) return false;
  Rational lhs = 161 - 8 * c.alpha2;
  return lhs > 0 && lhs * lhs > 25857;
}

template <class S>
bool certify_regular(const PolySystem<S>& F, const Point<S>& x) {
  return certify_regular(compute_constants(F, x));
}

namespace detail {

// alpha < 0.03, on squares.
inline bool same_alpha_ok(const AlphaConstants<ApproxScalar>& c) {
  return !c.singular_jacobian && c.alpha2 < kSameThreshold2;
}
inline bool same_alpha_ok(const AlphaConstants<GaussianRational>& c) {
  return !c.singular_jacobian && c.alpha2 < Rational(9, 10000);
}

// ||x - y|| < 1/(20 gamma), on squares: dist2 * 400 * gamma2 < 1.
inline bool within_same_radius(const AlphaConstants<ApproxScalar>& c, double dist2) {
  return dist2 * 400.0 * c.gamma2 < 1.0;
}
inline bool within_same_radius(const AlphaConstants<GaussianRational>& c,
                               const Rational& dist2) {
  return dist2 * 400 * c.gamma2 < 1;
}

// ||x - y|| > 2*(beta_x + beta_y). Exact mode bounds the betas from above
// (sound: the true separation requirement is implied).
inline bool separated(const AlphaConstants<ApproxScalar>& cx,
                      const AlphaConstants<ApproxScalar>& cy, double dist2,
                      const ExactBoundContext&) {
  double s = 2.0 * (std::sqrt(cx.beta2) + std::sqrt(cy.beta2));
  return dist2 > s * s;
}
inline bool separated(const AlphaConstants<GaussianRational>& cx,
                      const AlphaConstants<GaussianRational>& cy, const Rational& dist2,
                      const ExactBoundContext& ctx) {
  Rational s = 2 * (rational_sqrt_upper(cx.beta2, ctx) + rational_sqrt_upper(cy.beta2, ctx));
  return dist2 > s * s;
}

// ||x - xbar|| > 4 beta, on squares (beta2 is exact in exact mode).
inline bool not_real_separated(const AlphaConstants<ApproxScalar>& c, double dist2) {
  return dist2 > 16.0 * c.beta2;
}
inline bool not_real_separated(const AlphaConstants<GaussianRational>& c,
                               const Rational& dist2) {
  return !c.singular_jacobian && dist2 > 16 * c.beta2;
}

}  // namespace detail

/// Theorem-1 distinctness for candidate points x, y:
/// Same when alpha(F,x) < 0.03 and ||x-y|| < 1/(20 gamma(F,x)); Distinct
/// when both points are certified regular and the closed 2*beta balls
/// around them are disjoint; Undecided otherwise.
template <class S>
DistinctVerdict certify_distinct(const PolySystem<S>& F, const Point<S>& x, const Point<S>& y,
                                 const AlphaConstants<S>& cx, const AlphaConstants<S>& cy,
                                 const ExactBoundContext& ctx = {}) {
  F.check_point(x);
  F.check_point(y);
  auto dist2 = distance2(x, y);
  if (detail::same_alpha_ok(cx) && detail::within_same_radius(cx, dist2))
    return DistinctVerdict::Same;
  if (certify_regular(cx) && certify_regular(cy) && detail::separated(cx, cy, dist2, ctx))
    return DistinctVerdict::Distinct;
  return DistinctVerdict::Undecided;
}

template <class S>
DistinctVerdict certify_distinct(const PolySystem<S>& F, const Point<S>& x, const Point<S>& y,
                                 const ExactBoundContext& ctx = {}) {
  return certify_distinct(F, x, y, compute_constants(F, x), compute_constants(F, y), ctx);
}

/// Theorem-1 realness for a candidate point of a real-coefficient system:
/// Real when alpha < 0.03 and ||x - xbar|| < 1/(20 gamma); NotReal when
/// ||x - xbar|| > 4 beta; Undecided otherwise. The real-coefficient
/// precondition makes xbar approximate a root of the same system.
template <class S>
RealnessVerdict certify_real(const PolySystem<S>& F, const Point<S>& x,
                             const AlphaConstants<S>& cx) {
  F.check_point(x);
  for (std::size_t i = 0; i < F.size(); ++i)
    if (!F[i].all_real_coefficients())
      throw NonRealCoefficients("realness certification requires real coefficients, but "
                                "polynomial " + std::to_string(i + 1) + " has a complex one");
  auto dist2 = distance2(x, x.conjugate());
  if (detail::same_alpha_ok(cx) && detail::within_same_radius(cx, dist2))
    return RealnessVerdict::Real;
  if (detail::not_real_separated(cx, dist2)) return RealnessVerdict::NotReal;
  return RealnessVerdict::Undecided;
}

template <class S>
RealnessVerdict certify_real(const PolySystem<S>& F, const Point<S>& x) {
  return certify_real(F, x, compute_constants(F, x));
}

/// Batch result of the pure alpha-theory pipeline (no singular fallback).
template <class S>
struct AlphaBatchResult {
  std::vector<AlphaConstants<S>> constants;  // input order
  std::vector<std::size_t> certified_regular;
  std::vector<std::size_t> certified_distinct;
  std::vector<std::size_t> certified_real;
};

namespace detail {

/// Maximal pairwise-distinct subset of the regular indices: a Same pair
/// keeps the smaller beta, an Undecided pair keeps the earlier point.
/// Deterministic in input order.
template <class S>
std::vector<std::size_t> select_distinct(const PolySystem<S>& F,
                                         const std::vector<Point<S>>& sols,
                                         const std::vector<AlphaConstants<S>>& constants,
                                         const std::vector<std::size_t>& regular,
                                         const ExactBoundContext& ctx) {
  std::vector<std::size_t> kept;
  for (std::size_t idx : regular) {
    bool drop = false;
    std::optional<std::size_t> replace_pos;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      auto verdict =
          certify_distinct(F, sols[kept[k]], sols[idx], constants[kept[k]], constants[idx], ctx);
      if (verdict == DistinctVerdict::Distinct) continue;
      if (verdict == DistinctVerdict::Same &&
          constants[idx].beta2 < constants[kept[k]].beta2) {
        replace_pos = k;
      } else {
        drop = true;
      }
      break;
    }
    if (drop) continue;
    if (replace_pos)
      kept[*replace_pos] = idx;
    else
      kept.push_back(idx);
  }
  return kept;
}

}  // namespace detail

/// Runs constants, regularity, pairwise distinctness, and realness over a
/// solution list. certified_distinct is a maximal pairwise-distinct subset
/// of certified_regular; certified_real are its Real members. Realness is
/// skipped entirely when F has non-real coefficients.
template <class S>
AlphaBatchResult<S> alpha_theory_certification(const PolySystem<S>& F,
                                               const std::vector<Point<S>>& sols,
                                               const ExactBoundContext& ctx = {}) {
  AlphaBatchResult<S> out;
  out.constants.reserve(sols.size());
  for (const auto& p : sols) {
    F.check_point(p);
    out.constants.push_back(compute_constants(F, p));
  }
  for (std::size_t i = 0; i < sols.size(); ++i)
    if (certify_regular(out.constants[i])) out.certified_regular.push_back(i);

  out.certified_distinct =
      detail::select_distinct(F, sols, out.constants, out.certified_regular, ctx);

  if (F.all_real_coefficients()) {
    for (std::size_t idx : out.certified_distinct)
      if (certify_real(F, sols[idx], out.constants[idx]) == RealnessVerdict::Real)
        out.certified_real.push_back(idx);
  }
  return out;
}

}  // namespace numcert
