#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "numcert/system.hpp"

namespace numcert {

namespace detail {

inline Eigen::MatrixXcd to_eigen(const std::vector<ApproxScalar>& rowmajor, std::size_t n) {
  Eigen::MatrixXcd M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = rowmajor[i * n + j];
  return M;
}

inline Eigen::VectorXcd to_eigen(const std::vector<ApproxScalar>& v) {
  Eigen::VectorXcd r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i];
  return r;
}

/// LU with the invertibility threshold used throughout: pivots below
/// n*eps relative to the largest pivot count as zero.
inline Eigen::FullPivLU<Eigen::MatrixXcd> lu_with_threshold(const Eigen::MatrixXcd& M) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
  lu.setThreshold(Eigen::NumTraits<double>::epsilon() * static_cast<double>(M.rows()));
  return lu;
}

/// Exact Gauss-Jordan solve over a field scalar. Returns nullopt when the
/// matrix is exactly singular. A (row-major) and b are copied.
template <class S>
std::optional<std::vector<S>> exact_solve(std::vector<S> A, std::vector<S> b) {
  using Traits = ScalarTraits<S>;
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && Traits::is_zero(A[piv * n + col])) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A[piv * n + j], A[col * n + j]);
      std::swap(b[piv], b[col]);
    }
    S inv = Traits::one() / A[col * n + col];
    for (std::size_t j = col; j < n; ++j) A[col * n + j] = A[col * n + j] * inv;
    b[col] = b[col] * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || Traits::is_zero(A[r * n + col])) continue;
      S f = A[r * n + col];
      for (std::size_t j = col; j < n; ++j)
        A[r * n + j] = A[r * n + j] - f * A[col * n + j];
      b[r] = b[r] - f * b[col];
    }
  }
  return b;
}

/// Exact inverse via Gauss-Jordan on [A | I]; nullopt when singular.
template <class S>
std::optional<std::vector<S>> exact_inverse(std::vector<S> A, std::size_t n) {
  using Traits = ScalarTraits<S>;
  std::vector<S> I(n * n, Traits::zero());
  for (std::size_t i = 0; i < n; ++i) I[i * n + i] = Traits::one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && Traits::is_zero(A[piv * n + col])) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(A[piv * n + j], A[col * n + j]);
        std::swap(I[piv * n + j], I[col * n + j]);
      }
    S inv = Traits::one() / A[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      A[col * n + j] = A[col * n + j] * inv;
      I[col * n + j] = I[col * n + j] * inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || Traits::is_zero(A[r * n + col])) continue;
      S f = A[r * n + col];
      for (std::size_t j = 0; j < n; ++j) {
        A[r * n + j] = A[r * n + j] - f * A[col * n + j];
        I[r * n + j] = I[r * n + j] - f * I[col * n + j];
      }
    }
  }
  return I;
}

}  // namespace detail

template <class S>
struct NewtonResult {
  Point<S> point;
  bool singular = false;  // Jacobian not (numerically) invertible; point unchanged
};

/// One step of the Newton operator N_F(x) = x - F'(x)^{-1} F(x); returns x
/// unchanged with the singular flag when F'(x) is not invertible.
inline NewtonResult<ApproxScalar> newton_operator(const PolySystem<ApproxScalar>& F,
                                                  const Point<ApproxScalar>& x) {
  F.check_point(x);
  EvalProgram<ApproxScalar> prog(F);
  std::vector<ApproxScalar> values, jac;
  prog.eval_with_jacobian(x.coords, values, jac);
  auto lu = detail::lu_with_threshold(detail::to_eigen(jac, F.num_vars()));
  if (!lu.isInvertible()) return {x, true};
  Eigen::VectorXcd step = lu.solve(detail::to_eigen(values));
  NewtonResult<ApproxScalar> r{x, false};
  for (std::size_t i = 0; i < F.num_vars(); ++i)
    r.point.coords[i] -= step(static_cast<Eigen::Index>(i));
  return r;
}

/// Exact-mode Newton step; the linear solve is exact, singularity is exact
/// rank deficiency.
inline NewtonResult<GaussianRational> newton_operator(const PolySystem<GaussianRational>& F,
                                                      const Point<GaussianRational>& x) {
  F.check_point(x);
  auto values = evaluate(F, x);
  auto jac = evaluate_jacobian(F, x);
  auto step = detail::exact_solve(jac, values);
  if (!step) return {x, true};
  NewtonResult<GaussianRational> r{x, false};
  for (std::size_t i = 0; i < F.num_vars(); ++i)
    r.point.coords[i] = r.point.coords[i] - (*step)[i];
  return r;
}

}  // namespace numcert
