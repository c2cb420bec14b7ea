#pragma once

#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "numcert/alpha.hpp"
#include "numcert/krawczyk.hpp"
#include "numcert/system.hpp"

namespace numcert {

enum class CertStrategy { AlphaTheory, IntervalArithmetic };

/// Orthonormal basis of the numerical kernel of a complex matrix: right
/// singular vectors whose singular values fall below tol relative to the
/// largest one (absolute when even the largest is below tol).
struct KernelBasis {
  Eigen::MatrixXcd basis;  // n x kappa, orthonormal columns
  std::size_t kappa = 0;
  double tolerance = 0.0;
};

inline KernelBasis numerical_kernel(const Eigen::MatrixXcd& M, double tol) {
  if (!(tol > 0)) throw InvalidArgument("kernel tolerance must be positive");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  double thresh = smax < tol ? tol : tol * smax;
  KernelBasis out;
  out.tolerance = tol;
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < thresh) null_cols.push_back(i);
  out.kappa = null_cols.size();
  out.basis.resize(M.cols(), static_cast<Eigen::Index>(out.kappa));
  for (std::size_t k = 0; k < out.kappa; ++k)
    out.basis.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(null_cols[k]);
  return out;
}

/// One level of deflation: the square system F_hat = F + F'B with B a
/// unit-norm random combination of the numerical kernel of F'(x).
struct DeflationStep {
  std::vector<ApproxScalar> b;
  CSystem deflated;
  std::size_t kappa = 0;
  std::uint64_t seed = 0;
};

struct DeflationOptions {
  double kernel_tol = 1e-6;
  std::uint64_t rng_seed = 2020;
  std::size_t max_iterations = 10;
  /// The soft-verification residual gate: a point only qualifies when
  /// ||F(x)||_inf <= residual_tol_scale * (1 + ||x||)^d.
  double residual_tol_scale = 1e-4;
  CertStrategy strategy = CertStrategy::AlphaTheory;
  std::optional<std::size_t> iterations;
  AdaptiveBoxOptions box;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t level_seed(std::uint64_t seed, std::size_t level) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(level) + 1));
}

}  // namespace detail

/// Deflates once at x. Refuses when the numerical kernel of F'(x) is
/// trivial (the point is numerically regular and deflation does not apply).
inline DeflationStep deflate_once(const CSystem& F, const CPoint& x, std::uint64_t rng_seed,
                                  double kernel_tol = 1e-6) {
  F.check_point(x);
  const std::size_t n = F.num_vars();
  auto kernel = numerical_kernel(detail::to_eigen(evaluate_jacobian(F, x), n), kernel_tol);
  if (kernel.kappa == 0)
    throw InvalidArgument("point is numerically regular; deflation does not apply");

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(kernel.kappa));
  do {
    for (std::size_t k = 0; k < kernel.kappa; ++k) {
      double re = gauss(rng), im = gauss(rng);
      coeffs(static_cast<Eigen::Index>(k)) = ApproxScalar(re, im);
    }
  } while (coeffs.norm() == 0.0);
  Eigen::VectorXcd B = kernel.basis * coeffs;
  B /= B.norm();

  DeflationStep step;
  step.kappa = kernel.kappa;
  step.seed = rng_seed;
  step.b.reserve(n);
  for (std::size_t j = 0; j < n; ++j) step.b.push_back(B(static_cast<Eigen::Index>(j)));

  std::vector<Polynomial<ApproxScalar>> polys;
  polys.reserve(n);
  for (const auto& f : F.polys()) {
    Polynomial<ApproxScalar> q = f;
    for (std::size_t j = 0; j < n; ++j) q = q + step.b[j] * f.derivative(j);
    polys.push_back(std::move(q));
  }
  step.deflated = CSystem(std::move(polys));
  return step;
}

enum class LevelOutcome { Skipped, Failed, Passed };

struct DeflationLevel {
  std::uint64_t seed = 0;
  std::size_t kappa = 0;
  std::vector<ApproxScalar> b;
  LevelOutcome outcome = LevelOutcome::Skipped;
};

/// A soft certificate: the full deflation history plus the verdict. Valid
/// with probability 1 over the random B draws, not a rigorous proof.
struct DeflationTrace {
  std::vector<DeflationLevel> levels;
  bool verdict = false;
  std::size_t iterations_used = 0;
  bool residual_gate_passed = false;
};

namespace detail {

inline bool regular_certified(const CSystem& F, const CPoint& x, const DeflationOptions& opts) {
  if (opts.strategy == CertStrategy::AlphaTheory) return certify_regular(F, x);
  return krawczyk_test(F, x, opts.box);
}

}  // namespace detail

/// Soft certification of a singular solution by iterated deflation. With a
/// fixed iteration count, deflates exactly that many times then certifies
/// once; without one, alternates certification and deflation until success
/// or the iteration cap. Deterministic in (F, x, rng_seed).
inline std::pair<bool, DeflationTrace> certify_singular(const CSystem& F, const CPoint& x,
                                                        const DeflationOptions& opts = {}) {
  F.check_point(x);
  DeflationTrace trace;

  auto values = evaluate(F, x);
  double residual = 0.0;
  for (const auto& v : values) residual = std::max(residual, std::abs(v));
  double gate = opts.residual_tol_scale *
                std::pow(1.0 + std::sqrt(norm2(x)), static_cast<double>(F.max_degree()));
  trace.residual_gate_passed = residual <= gate;
  if (!trace.residual_gate_passed) return {false, trace};

  CSystem current = F;
  if (opts.iterations) {
    for (std::size_t level = 0; level < *opts.iterations; ++level) {
      DeflationLevel rec;
      rec.seed = detail::level_seed(opts.rng_seed, level);
      try {
        auto step = deflate_once(current, x, rec.seed, opts.kernel_tol);
        rec.kappa = step.kappa;
        rec.b = step.b;
        current = std::move(step.deflated);
      } catch (const InvalidArgument&) {
        // already regular before the count was exhausted
        trace.levels.push_back(std::move(rec));
        trace.iterations_used = level;
        return {false, trace};
      }
      trace.levels.push_back(std::move(rec));
    }
    trace.iterations_used = *opts.iterations;
    bool ok = detail::regular_certified(current, x, opts);
    if (!trace.levels.empty())
      trace.levels.back().outcome = ok ? LevelOutcome::Passed : LevelOutcome::Failed;
    trace.verdict = ok;
    return {ok, trace};
  }

  if (detail::regular_certified(current, x, opts)) {
    trace.verdict = true;
    return {true, trace};  // already regular: empty trace
  }
  for (std::size_t level = 0; level < opts.max_iterations; ++level) {
    DeflationLevel rec;
    rec.seed = detail::level_seed(opts.rng_seed, level);
    try {
      auto step = deflate_once(current, x, rec.seed, opts.kernel_tol);
      rec.kappa = step.kappa;
      rec.b = step.b;
      current = std::move(step.deflated);
    } catch (const InvalidArgument&) {
      // not certifiable and numerically regular: deflation cannot help
      trace.levels.push_back(std::move(rec));
      trace.iterations_used = level;
      return {false, trace};
    }
    trace.iterations_used = level + 1;
    bool ok = detail::regular_certified(current, x, opts);
    rec.outcome = ok ? LevelOutcome::Passed : LevelOutcome::Failed;
    trace.levels.push_back(std::move(rec));
    if (ok) {
      trace.verdict = true;
      return {true, trace};
    }
  }
  return {false, trace};
}

}  // namespace numcert
