#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "numcert/certify.hpp"
#include "numcert/parse.hpp"
#include "numcert/version.hpp"

namespace numcert {

using OrderedJson = nlohmann::ordered_json;

enum class CoefficientMode { Approx, Exact };

inline std::string to_string(CoefficientMode m) {
  return m == CoefficientMode::Approx ? "approx" : "exact";
}

/// A system file carries the variable list, the coefficient mode, and the
/// polynomial expressions; exactly one of the two systems is populated.
struct LoadedSystem {
  CoefficientMode mode = CoefficientMode::Approx;
  std::vector<std::string> vars;
  std::optional<PolySystem<ApproxScalar>> approx;
  std::optional<PolySystem<GaussianRational>> exact;
  ParseDiagnostics diagnostics;

  std::size_t num_vars() const { return vars.size(); }
};

inline LoadedSystem parse_system_json(const nlohmann::json& doc,
                                      std::optional<CoefficientMode> mode_override = {}) {
  LoadedSystem out;
  if (!doc.is_object() || !doc.contains("vars") || !doc.contains("polys"))
    throw InvalidArgument("system document needs 'vars' and 'polys' fields");
  for (const auto& v : doc.at("vars")) out.vars.push_back(v.get<std::string>());
  std::string mode = doc.value("mode", "approx");
  if (mode != "approx" && mode != "exact")
    throw InvalidArgument("mode must be 'approx' or 'exact', got '" + mode + "'");
  out.mode = mode == "exact" ? CoefficientMode::Exact : CoefficientMode::Approx;
  if (mode_override) out.mode = *mode_override;

  std::vector<std::string> exprs;
  for (const auto& p : doc.at("polys")) exprs.push_back(p.get<std::string>());
  if (out.mode == CoefficientMode::Approx) {
    std::vector<Polynomial<ApproxScalar>> polys;
    for (const auto& e : exprs)
      polys.push_back(parse_polynomial<ApproxScalar>(e, out.vars, &out.diagnostics));
    out.approx = PolySystem<ApproxScalar>(std::move(polys));
  } else {
    std::vector<Polynomial<GaussianRational>> polys;
    for (const auto& e : exprs)
      polys.push_back(parse_polynomial<GaussianRational>(e, out.vars, &out.diagnostics));
    out.exact = PolySystem<GaussianRational>(std::move(polys));
  }
  return out;
}

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what(), e.byte);
  }
  return doc;
}

template <class S>
S scalar_from_json_value(const nlohmann::json& v) {
  if (v.is_string()) {
    return ScalarTraits<S>::from_rational(rational_from_string(v.get<std::string>()));
  }
  if (v.is_number()) {
    if constexpr (ScalarTraits<S>::exact)
      return ScalarTraits<S>::from_rational(Rational(v.get<double>()));
    else
      return ApproxScalar(v.get<double>(), 0.0);
  }
  throw InvalidArgument("coordinate component must be a number or a numeric string");
}

}  // namespace detail

/// Points are a JSON list of points; each point is a list of [re, im]
/// coordinate pairs (decimal strings in approx mode, 'p/q' rational
/// strings in exact mode; plain numbers are accepted in approx mode).
template <class S>
std::vector<Point<S>> parse_points_json(const nlohmann::json& doc, std::size_t num_vars) {
  const nlohmann::json* list = &doc;
  if (doc.is_object() && doc.contains("points")) list = &doc.at("points");
  if (!list->is_array()) throw InvalidArgument("points document must be a list of points");
  std::vector<Point<S>> out;
  for (const auto& pt : *list) {
    if (!pt.is_array() || pt.size() != num_vars)
      throw InvalidArgument("every point needs exactly " + std::to_string(num_vars) +
                            " coordinate pairs");
    Point<S> p;
    p.coords.reserve(num_vars);
    for (const auto& coord : pt) {
      if (!coord.is_array() || coord.size() != 2)
        throw InvalidArgument("every coordinate is a [re, im] pair");
      auto re = detail::scalar_from_json_value<S>(coord.at(0));
      auto im = detail::scalar_from_json_value<S>(coord.at(1));
      p.coords.push_back(re + ScalarTraits<S>::imaginary_unit() * im);
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline LoadedSystem load_system_file(const std::string& path,
                                     std::optional<CoefficientMode> mode_override = {}) {
  auto doc = detail::read_json_file(path);  // names the file on IO/JSON errors
  try {
    return parse_system_json(doc, mode_override);
  } catch (const ParseError& e) {
    throw ParseError("in '" + path + "': " + e.what(), e.position);
  } catch (const Error& e) {
    throw InvalidArgument("in '" + path + "': " + e.what());
  }
}

template <class S>
std::vector<Point<S>> load_points_file(const std::string& path, std::size_t num_vars) {
  auto doc = detail::read_json_file(path);
  try {
    return parse_points_json<S>(doc, num_vars);
  } catch (const ParseError& e) {
    throw ParseError("in '" + path + "': " + e.what(), e.position);
  } catch (const Error& e) {
    throw InvalidArgument("in '" + path + "': " + e.what());
  }
}

inline OrderedJson system_to_json(const LoadedSystem& sys) {
  OrderedJson doc;
  doc["vars"] = sys.vars;
  doc["mode"] = to_string(sys.mode);
  std::vector<std::string> polys;
  if (sys.approx)
    for (const auto& p : sys.approx->polys()) polys.push_back(p.to_string(sys.vars));
  if (sys.exact)
    for (const auto& p : sys.exact->polys()) polys.push_back(p.to_string(sys.vars));
  doc["polys"] = polys;
  return doc;
}

// ---- Report serialization --------------------------------------------------

/// Reproducibility header embedded verbatim in every report.
struct RunManifest {
  std::string command;
  std::string system_file;
  std::string points_file;
  std::uint64_t seed = 0;
  OrderedJson options;
  double duration_ms = 0.0;
};

namespace detail {

inline OrderedJson point_to_json(const CPoint& p) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& c : p.coords) arr.push_back({c.real(), c.imag()});
  return arr;
}

template <class S>
OrderedJson exact_point_to_json(const Point<S>& p) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& c : p.coords)
    arr.push_back({rational_to_string(ScalarTraits<S>::re(c)),
                   rational_to_string(ScalarTraits<S>::im(c))});
  return arr;
}

inline OrderedJson extended_real(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

inline OrderedJson box_to_json(const IntervalBox& b) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& e : b.entries) arr.push_back(to_string(e));
  return arr;
}

inline OrderedJson manifest_to_json(const RunManifest& m) {
  OrderedJson doc;
  doc["command"] = m.command;
  doc["systemFile"] = m.system_file;
  if (!m.points_file.empty()) doc["pointsFile"] = m.points_file;
  doc["version"] = kVersion;
  doc["seed"] = m.seed;
  doc["options"] = m.options;
  doc["durationMs"] = m.duration_ms;
  return doc;
}

inline OrderedJson trace_to_json(std::size_t index, const DeflationTrace& t) {
  OrderedJson doc;
  doc["index"] = index;
  doc["residualGatePassed"] = t.residual_gate_passed;
  doc["iterationsUsed"] = t.iterations_used;
  OrderedJson levels = OrderedJson::array();
  for (const auto& lvl : t.levels) {
    OrderedJson l;
    l["seed"] = lvl.seed;
    l["kappa"] = lvl.kappa;
    OrderedJson b = OrderedJson::array();
    for (const auto& c : lvl.b) b.push_back({c.real(), c.imag()});
    l["b"] = b;
    l["outcome"] = lvl.outcome == LevelOutcome::Passed
                       ? "passed"
                       : lvl.outcome == LevelOutcome::Failed ? "failed" : "skipped";
    levels.push_back(std::move(l));
  }
  doc["levels"] = levels;
  doc["verdict"] = t.verdict ? "soft-certified" : "not-certified";
  return doc;
}

}  // namespace detail

/// The report document: the manifest plus the session key set
/// (alphaValues under the alpha strategy; krawczykOperators under the
/// interval strategy; traces whenever the singular path ran).
inline OrderedJson report_to_json(const CertificationReport& report, const RunManifest& manifest,
                                  bool compat_boolean_output = false) {
  OrderedJson doc;
  doc["manifest"] = detail::manifest_to_json(manifest);

  auto index_point_list = [&](const std::vector<std::size_t>& indices) {
    OrderedJson arr = OrderedJson::array();
    for (auto i : indices) {
      OrderedJson entry;
      entry["index"] = i;
      entry["point"] = detail::point_to_json(report.records[i].point);
      arr.push_back(std::move(entry));
    }
    return arr;
  };

  const bool alpha = report.strategy == CertStrategy::AlphaTheory;
  if (alpha) {
    OrderedJson vals = OrderedJson::array();
    for (double v : report.alpha_values) vals.push_back(detail::extended_real(v));
    doc["alphaValues"] = vals;
  }
  if (alpha || !compat_boolean_output)
    doc["certifiedDistinct"] = index_point_list(report.certified_distinct);
  doc["certifiedReal"] = index_point_list(report.certified_real);
  doc["certifiedRegular"] = index_point_list(report.certified_regular);
  doc["certifiedSingular"] = index_point_list(report.certified_singular);

  OrderedJson noncert = OrderedJson::array();
  for (auto i : report.non_certified) {
    const auto& rec = report.records[i];
    OrderedJson entry;
    entry["index"] = i;
    entry["point"] = detail::point_to_json(rec.point);
    if (rec.constants) entry["alpha"] = detail::extended_real(rec.constants->alpha2);
    if (rec.krawczyk && !rec.krawczyk->box.entries.empty())
      entry["box"] = detail::box_to_json(rec.krawczyk->box);
    if (!rec.error.empty()) entry["error"] = rec.error;
    noncert.push_back(std::move(entry));
  }
  doc["nonCertified"] = noncert;

  if (!alpha) {
    OrderedJson ops = OrderedJson::array();
    for (auto i : report.certified_regular) {
      const auto& rec = report.records[i];
      if (!rec.krawczyk) continue;
      OrderedJson entry;
      entry["index"] = i;
      entry["box"] = detail::box_to_json(rec.krawczyk->box);
      entry["operator"] = detail::box_to_json(rec.krawczyk->op.K);
      ops.push_back(std::move(entry));
    }
    doc["krawczykOperators"] = ops;
  }

  OrderedJson traces = OrderedJson::array();
  for (const auto& rec : report.records)
    if (rec.trace && (!rec.trace->levels.empty() || rec.cls == PointClass::Singular))
      traces.push_back(detail::trace_to_json(rec.index, *rec.trace));
  if (!traces.empty()) doc["traces"] = traces;
  return doc;
}

/// Report document for the exact-mode alpha batch (no singular fallback:
/// exact points failing regular certification are nonCertified).
template <class S>
OrderedJson exact_report_to_json(const AlphaBatchResult<S>& batch,
                                 const std::vector<Point<S>>& sols,
                                 const RunManifest& manifest) {
  OrderedJson doc;
  doc["manifest"] = detail::manifest_to_json(manifest);
  OrderedJson vals = OrderedJson::array();
  for (const auto& c : batch.constants) {
    if (c.singular_jacobian)
      vals.push_back("inf");
    else
      vals.push_back(detail::rational_to_string(c.alpha2));
  }
  doc["alphaValues"] = vals;

  auto index_point_list = [&](const std::vector<std::size_t>& indices) {
    OrderedJson arr = OrderedJson::array();
    for (auto i : indices) {
      OrderedJson entry;
      entry["index"] = i;
      entry["point"] = detail::exact_point_to_json(sols[i]);
      arr.push_back(std::move(entry));
    }
    return arr;
  };
  doc["certifiedDistinct"] = index_point_list(batch.certified_distinct);
  doc["certifiedReal"] = index_point_list(batch.certified_real);
  doc["certifiedRegular"] = index_point_list(batch.certified_regular);
  doc["certifiedSingular"] = OrderedJson::array();
  OrderedJson noncert = OrderedJson::array();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    if (std::find(batch.certified_regular.begin(), batch.certified_regular.end(), i) !=
        batch.certified_regular.end())
      continue;
    OrderedJson entry;
    entry["index"] = i;
    entry["point"] = detail::exact_point_to_json(sols[i]);
    if (!batch.constants[i].singular_jacobian)
      entry["alpha"] = detail::rational_to_string(batch.constants[i].alpha2);
    else
      entry["alpha"] = "inf";
    noncert.push_back(std::move(entry));
  }
  doc["nonCertified"] = noncert;
  return doc;
}

}  // namespace numcert
