#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numcert/deflation.hpp"

namespace numcert {

struct CertifyOptions {
  CertStrategy strategy = CertStrategy::AlphaTheory;
  std::uint64_t rng_seed = 2020;
  std::size_t max_deflation_iterations = 10;
  double residual_tol_scale = 1e-4;
  double kernel_tol = 1e-6;
  AdaptiveBoxOptions box;
  /// Newton pre-refinement steps applied to every input point.
  std::size_t refinement_steps = 0;
  /// Compatibility output: collapse tri-states to booleans and drop the
  /// optional distinctness list under the interval strategy.
  bool compat_boolean_output = false;

  DeflationOptions deflation_options() const {
    DeflationOptions d;
    d.kernel_tol = kernel_tol;
    d.rng_seed = rng_seed;
    d.max_iterations = max_deflation_iterations;
    d.residual_tol_scale = residual_tol_scale;
    d.strategy = strategy;
    d.box = box;
    return d;
  }
};

enum class PointClass { Regular, Singular, NonCertified };

/// Everything learned about one input point, in input order.
struct SolutionRecord {
  std::size_t index = 0;
  CPoint point;  // after refinement, the point that was certified
  PointClass cls = PointClass::NonCertified;
  std::optional<AlphaConstants<ApproxScalar>> constants;  // alphaTheory evidence
  std::optional<KrawczykTest> krawczyk;                   // intervalArithmetic evidence
  std::optional<DeflationTrace> trace;                    // singular path evidence
  bool real = false;
  std::string error;  // per-point failure surfaced, never aborting the batch
};

struct CertificationReport {
  CertStrategy strategy = CertStrategy::AlphaTheory;
  std::vector<SolutionRecord> records;   // input order
  std::vector<double> alpha_values;      // alphaTheory only, input order
  std::vector<std::size_t> certified_regular;
  std::vector<std::size_t> certified_singular;
  std::vector<std::size_t> certified_distinct;
  std::vector<std::size_t> certified_real;
  std::vector<std::size_t> non_certified;

  bool all_certified() const { return non_certified.empty(); }
};

/// Index pairs whose certified boxes are provably disjoint: each box holds
/// a unique root, so disjoint boxes hold distinct roots. Overlapping
/// certified boxes stay undecided.
inline std::vector<std::pair<std::size_t, std::size_t>> pairwise_distinct_intervals(
    const std::vector<IntervalBox>& boxes) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (boxes[i].disjoint_from(boxes[j])) out.emplace_back(i, j);
  return out;
}

/// End-to-end certification of a solution list: per-point regular
/// certification under the chosen strategy, the soft singular fallback for
/// points that pass the residual gate, then distinctness and realness
/// passes over the certified set. Every input index lands in exactly one
/// of certifiedRegular, certifiedSingular, or nonCertified.
inline CertificationReport certify_solutions(const CSystem& F, const std::vector<CPoint>& sols,
                                             const CertifyOptions& opts = {}) {
  CertificationReport report;
  report.strategy = opts.strategy;
  report.records.reserve(sols.size());
  EvalProgram<ApproxScalar> prog(F);

  for (std::size_t i = 0; i < sols.size(); ++i) {
    SolutionRecord rec;
    rec.index = i;
    rec.point = sols[i];
    try {
      F.check_point(rec.point);
      for (std::size_t step = 0; step < opts.refinement_steps; ++step) {
        auto r = newton_operator(F, rec.point);
        if (r.singular) break;
        rec.point = std::move(r.point);
      }
      if (opts.strategy == CertStrategy::AlphaTheory) {
        rec.constants = compute_constants(F, rec.point, &prog);
        if (certify_regular(*rec.constants)) {
          rec.cls = PointClass::Regular;
        } else {
          auto [ok, trace] = certify_singular(F, rec.point, opts.deflation_options());
          rec.trace = std::move(trace);
          rec.cls = ok ? PointClass::Singular : PointClass::NonCertified;
        }
      } else {
        rec.krawczyk = krawczyk_test_detailed(F, rec.point, opts.box);
        if (rec.krawczyk->certified) {
          rec.cls = PointClass::Regular;
        } else {
          auto [ok, trace] = certify_singular(F, rec.point, opts.deflation_options());
          rec.trace = std::move(trace);
          rec.cls = ok ? PointClass::Singular : PointClass::NonCertified;
        }
      }
    } catch (const Error& e) {
      rec.cls = PointClass::NonCertified;
      rec.error = e.what();
    }
    report.records.push_back(std::move(rec));
  }

  for (const auto& rec : report.records) {
    switch (rec.cls) {
      case PointClass::Regular: report.certified_regular.push_back(rec.index); break;
      case PointClass::Singular: report.certified_singular.push_back(rec.index); break;
      case PointClass::NonCertified: report.non_certified.push_back(rec.index); break;
    }
  }

  if (opts.strategy == CertStrategy::AlphaTheory) {
    report.alpha_values.reserve(sols.size());
    for (const auto& rec : report.records)
      report.alpha_values.push_back(rec.constants ? rec.constants->alpha2
                                                  : std::numeric_limits<double>::infinity());

    std::vector<Point<ApproxScalar>> points;
    std::vector<AlphaConstants<ApproxScalar>> constants;
    points.reserve(report.records.size());
    constants.reserve(report.records.size());
    for (const auto& rec : report.records) {
      points.push_back(rec.point);
      constants.push_back(rec.constants ? *rec.constants : AlphaConstants<ApproxScalar>{});
    }
    report.certified_distinct =
        detail::select_distinct(F, points, constants, report.certified_regular, {});
    if (F.all_real_coefficients()) {
      for (std::size_t idx : report.certified_distinct) {
        if (certify_real(F, report.records[idx].point, constants[idx]) ==
            RealnessVerdict::Real) {
          report.certified_real.push_back(idx);
          report.records[idx].real = true;
        }
      }
    }
  } else {
    // Distinctness by certified-box disjointness; realness by conjugate
    // containment of the stored operator image. Singular verdicts carry no
    // separation bound and are excluded from both.
    for (std::size_t idx : report.certified_regular) {
      const auto& t = report.records[idx].krawczyk;
      bool ok = true;
      for (std::size_t kept : report.certified_distinct) {
        const auto& u = report.records[kept].krawczyk;
        if (!t->box.disjoint_from(u->box)) {
          ok = false;
          break;
        }
      }
      if (ok) report.certified_distinct.push_back(idx);
    }
    if (F.all_real_coefficients()) {
      for (std::size_t idx : report.certified_regular) {
        const auto& t = report.records[idx].krawczyk;
        if (t->certified && t->box.contains(t->op.K.conjugate())) {
          report.certified_real.push_back(idx);
          report.records[idx].real = true;
        }
      }
    }
  }
  return report;
}

}  // namespace numcert
