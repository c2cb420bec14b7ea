// Command-line front end: certify solution lists against a polynomial
// system, compute alpha-theory constants, run Krawczyk tests, certify
// singular solutions, and export alphaCertified input files.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "numcert/alphacertified.hpp"
#include "numcert/io.hpp"

namespace {

using namespace numcert;

constexpr int kExitCertified = 0;
constexpr int kExitNotCertified = 1;
constexpr int kExitInputError = 2;

struct CommonFlags {
  std::string strategy = "alpha";
  std::uint64_t seed = 2020;
  std::size_t refine = 0;
  std::size_t max_iterations = 10;
  double residual_tol = 1e-4;
  double inflation = 4.0;
  double radius_min = 1e-14;
  double kernel_tol = 1e-6;
  bool compat_bool = false;
  bool exact = false;
  std::string out;
  std::string out_dir;
};

CertifyOptions to_options(const CommonFlags& f) {
  CertifyOptions o;
  o.strategy = f.strategy == "interval" ? CertStrategy::IntervalArithmetic
                                        : CertStrategy::AlphaTheory;
  o.rng_seed = f.seed;
  o.max_deflation_iterations = f.max_iterations;
  o.residual_tol_scale = f.residual_tol;
  o.kernel_tol = f.kernel_tol;
  o.box.inflation = f.inflation;
  o.box.radius_min_scale = f.radius_min;
  o.refinement_steps = f.refine;
  o.compat_boolean_output = f.compat_bool;
  return o;
}

OrderedJson options_json(const CommonFlags& f) {
  OrderedJson o;
  o["strategy"] = f.strategy;
  o["seed"] = f.seed;
  o["refine"] = f.refine;
  o["maxIterations"] = f.max_iterations;
  o["residualTol"] = f.residual_tol;
  o["inflation"] = f.inflation;
  o["radiusMin"] = f.radius_min;
  o["kernelTol"] = f.kernel_tol;
  o["compatBool"] = f.compat_bool;
  o["exact"] = f.exact;
  return o;
}

LoadedSystem load_system_or_exit(const std::string& path, const CommonFlags& f) {
  std::optional<CoefficientMode> override;
  if (f.exact) override = CoefficientMode::Exact;
  LoadedSystem sys = load_system_file(path, override);
  if (sys.diagnostics.rational_in_approx_mode)
    std::cerr << "warning: rational literal converted to floating point in approximate mode\n";
  return sys;
}

template <class S>
Point<S> parse_point_literal(const std::string& text, std::size_t num_vars) {
  std::vector<std::string> no_vars;
  Point<S> p;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      auto piece = text.substr(start, i - start);
      if (piece.find_first_not_of(" \t") != std::string::npos) {
        auto poly = parse_polynomial<S>(piece, no_vars);
        if (!poly.is_constant())
          throw InvalidArgument("point coordinates must be constant expressions");
        p.coords.push_back(poly.constant_value());
      }
      start = i + 1;
    }
  }
  if (p.coords.size() != num_vars)
    throw InvalidArgument("point has " + std::to_string(p.coords.size()) +
                          " coordinates, the system has " + std::to_string(num_vars) +
                          " variables");
  return p;
}

void emit_report(const OrderedJson& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw InvalidArgument("cannot write report to '" + out + "'");
    f << doc.dump(2) << "\n";
  }
}

int run_export(const LoadedSystem& sys, const std::string& points_file,
               const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::path dir = out_dir.empty() ? fs::path("alphacertified-input") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream sysf(dir / "polynomial_system");
  std::ofstream ptsf(dir / "points");
  if (!sysf || !ptsf)
    throw InvalidArgument("cannot write alphaCertified files under '" + dir.string() + "'");
  if (sys.mode == CoefficientMode::Exact) {
    write_alphacertified_system(sysf, *sys.exact);
    auto pts = load_points_file<GaussianRational>(points_file, sys.num_vars());
    write_alphacertified_points(ptsf, pts);
  } else {
    write_alphacertified_system(sysf, *sys.approx);
    auto pts = load_points_file<ApproxScalar>(points_file, sys.num_vars());
    write_alphacertified_points(ptsf, pts);
  }
  std::cerr << "wrote " << (dir / "polynomial_system") << " and " << (dir / "points") << "\n";
  return kExitCertified;
}

int cmd_certify(const std::string& system_file, const std::string& points_file,
                const CommonFlags& flags) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem sys = load_system_or_exit(system_file, flags);

  if (flags.strategy == "alphaCertified") {
    // Export-only strategy: we produce the tool's input files; running the
    // external binary is out of scope.
    int rc = run_export(sys, points_file, flags.out_dir);
    std::cerr << "alphaCertified strategy exports input files only; run the external "
                 "binary on them to certify\n";
    return rc;
  }

  RunManifest manifest;
  manifest.command = "certify";
  manifest.system_file = system_file;
  manifest.points_file = points_file;
  manifest.seed = flags.seed;
  manifest.options = options_json(flags);

  if (sys.mode == CoefficientMode::Exact) {
    if (flags.strategy == "interval") {
      std::cerr << "error: the interval strategy needs an approximate-mode system\n";
      return kExitInputError;
    }
    auto pts = load_points_file<GaussianRational>(points_file, sys.num_vars());
    auto batch = alpha_theory_certification(*sys.exact, pts);
    manifest.duration_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    auto doc = exact_report_to_json(batch, pts, manifest);
    emit_report(doc, flags.out);
    return batch.certified_regular.size() == pts.size() ? kExitCertified : kExitNotCertified;
  }

  auto pts = load_points_file<ApproxScalar>(points_file, sys.num_vars());
  auto report = certify_solutions(*sys.approx, pts, to_options(flags));
  manifest.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  auto doc = report_to_json(report, manifest, flags.compat_bool);
  emit_report(doc, flags.out);
  return report.all_certified() ? kExitCertified : kExitNotCertified;
}

int cmd_constants(const std::string& system_file, const std::string& point_literal,
                  const CommonFlags& flags) {
  LoadedSystem sys = load_system_or_exit(system_file, flags);
  if (sys.mode == CoefficientMode::Exact) {
    auto x = parse_point_literal<GaussianRational>(point_literal, sys.num_vars());
    auto c = compute_constants(*sys.exact, x);
    if (c.singular_jacobian) {
      std::cout << "(inf, inf, inf)\n";
    } else {
      std::cout << "(" << detail::rational_to_string(c.alpha2) << ", "
                << detail::rational_to_string(c.beta2) << ", "
                << detail::rational_to_string(c.gamma2) << ")\n";
    }
  } else {
    auto x = parse_point_literal<ApproxScalar>(point_literal, sys.num_vars());
    auto c = compute_constants(*sys.approx, x);
    std::cout << "(" << detail::double_to_string(c.alpha2) << ", "
              << detail::double_to_string(c.beta2) << ", "
              << detail::double_to_string(c.gamma2) << ")\n";
  }
  return kExitCertified;
}

int cmd_krawczyk(const std::string& system_file, const std::string& point_literal,
                 const std::string& box_literal, const CommonFlags& flags) {
  LoadedSystem sys = load_system_or_exit(system_file, flags);
  if (sys.mode == CoefficientMode::Exact) {
    std::cerr << "error: Krawczyk certification needs an approximate-mode system\n";
    return kExitInputError;
  }
  const auto& F = *sys.approx;
  AdaptiveBoxOptions box_opts{flags.inflation, flags.radius_min};

  KrawczykTest t;
  if (!box_literal.empty()) {
    auto I = parse_interval_box(box_literal);
    if (I.size() != F.num_vars())
      throw InvalidArgument("box dimension does not match the system");
    t = krawczyk_test_detailed(F, I);
  } else {
    auto x = parse_point_literal<ApproxScalar>(point_literal, F.num_vars());
    t = krawczyk_test_detailed(F, x, box_opts);
  }

  if (!t.box.entries.empty()) std::cout << "box:      " << to_string(t.box) << "\n";
  if (t.y_singular) {
    std::cout << "krawczykOperator: undefined (" << t.diagnostic << ")\n";
    std::cout << "krawczykTest: false\n";
    return kExitNotCertified;
  }
  std::cout << "operator: " << to_string(t.op.K) << "\n";
  std::cout << "contraction: " << detail::double_to_string(t.op.contraction) << "\n";
  std::cout << "krawczykTest: " << (t.certified ? "true" : "false") << "\n";
  if (F.all_real_coefficients()) {
    bool real = t.certified && t.box.contains(t.op.K.conjugate());
    std::cout << "krawczykRealnessTest: " << (real ? "true" : "false") << "\n";
  } else {
    std::cout << "krawczykRealnessTest: not applicable (non-real coefficients)\n";
  }
  return t.certified ? kExitCertified : kExitNotCertified;
}

int cmd_certify_singular(const std::string& system_file, const std::string& point_literal,
                         std::optional<std::size_t> iterations, const CommonFlags& flags) {
  LoadedSystem sys = load_system_or_exit(system_file, flags);
  if (sys.mode == CoefficientMode::Exact) {
    std::cerr << "error: singular certification needs an approximate-mode system\n";
    return kExitInputError;
  }
  auto x = parse_point_literal<ApproxScalar>(point_literal, sys.num_vars());
  DeflationOptions opts;
  opts.kernel_tol = flags.kernel_tol;
  opts.rng_seed = flags.seed;
  opts.max_iterations = flags.max_iterations;
  opts.residual_tol_scale = flags.residual_tol;
  opts.strategy = flags.strategy == "interval" ? CertStrategy::IntervalArithmetic
                                               : CertStrategy::AlphaTheory;
  opts.box = AdaptiveBoxOptions{flags.inflation, flags.radius_min};
  opts.iterations = iterations;

  auto [verdict, trace] = certify_singular(*sys.approx, x, opts);
  std::cout << "verdict: " << (verdict ? "true (soft)" : "false") << "\n";
  if (!trace.residual_gate_passed) {
    std::cout << "residual gate: failed (the point does not approximately satisfy the system)\n";
    return kExitNotCertified;
  }
  for (std::size_t i = 0; i < trace.levels.size(); ++i) {
    const auto& lvl = trace.levels[i];
    std::cout << "level " << (i + 1) << ": kappa=" << lvl.kappa << " seed=" << lvl.seed
              << " outcome="
              << (lvl.outcome == LevelOutcome::Passed
                      ? "passed"
                      : lvl.outcome == LevelOutcome::Failed ? "failed" : "skipped")
              << " b=(";
    for (std::size_t j = 0; j < lvl.b.size(); ++j) {
      if (j) std::cout << ", ";
      std::cout << ScalarTraits<ApproxScalar>::to_string(lvl.b[j]);
    }
    std::cout << ")\n";
  }
  return verdict ? kExitCertified : kExitNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numcert: a posteriori certification of polynomial system solutions"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string system_file, points_file, point_literal, box_literal;
  std::optional<std::size_t> iterations;

  auto add_common = [&](CLI::App* cmd, bool with_strategy = true) {
    if (with_strategy)
      cmd->add_option("--strategy", flags.strategy,
                      "certification strategy: alpha | interval | alphaCertified")
          ->check(CLI::IsMember({"alpha", "interval", "alphaCertified"}));
    cmd->add_option("--seed", flags.seed, "RNG seed for deflation vectors");
    cmd->add_option("--max-iterations", flags.max_iterations, "deflation iteration cap");
    cmd->add_option("--residual-tol", flags.residual_tol,
                    "residual gate scale: ||F(x)||_inf <= tol*(1+||x||)^d");
    cmd->add_option("--inflation", flags.inflation, "adaptive box radius = inflation*beta");
    cmd->add_option("--radius-min", flags.radius_min,
                    "adaptive box radius floor scale (times 1+||x||)");
    cmd->add_option("--kernel-tol", flags.kernel_tol, "relative SVD kernel tolerance");
    cmd->add_flag("--exact", flags.exact, "treat the system (and points) as exact rationals");
  };

  auto* certify = app.add_subcommand("certify", "certify a list of numerical solutions");
  certify->add_option("system", system_file, "system file")->required();
  certify->add_option("points", points_file, "points file")->required();
  add_common(certify);
  certify->add_option("--refine", flags.refine, "Newton pre-refinement steps");
  certify->add_flag("--compat-bool", flags.compat_bool,
                    "compatibility output: booleans only, no optional keys");
  certify->add_option("--out", flags.out, "write the report to this file");
  certify->add_option("--out-dir", flags.out_dir,
                      "output directory for the alphaCertified strategy");

  auto* constants = app.add_subcommand("constants", "compute (alpha, beta, gamma)");
  constants->add_option("system", system_file, "system file")->required();
  constants->add_option("--point", point_literal, "comma-separated coordinates")->required();
  add_common(constants, false);

  auto* krawczyk = app.add_subcommand("krawczyk", "Krawczyk operator and tests");
  krawczyk->add_option("system", system_file, "system file")->required();
  auto* kp = krawczyk->add_option("--point", point_literal, "comma-separated coordinates");
  auto* kb = krawczyk->add_option("--box", box_literal,
                                  "interval box literal '[lo,hi]+[lo,hi]*ii, ...'");
  kp->excludes(kb);
  add_common(krawczyk, false);

  auto* singular = app.add_subcommand("certify-singular", "soft singular certification");
  singular->add_option("system", system_file, "system file")->required();
  singular->add_option("--point", point_literal, "comma-separated coordinates")->required();
  singular->add_option("--iterations", iterations, "fixed deflation iteration count");
  add_common(singular);

  auto* exp = app.add_subcommand("export-alphacertified", "write alphaCertified input files");
  exp->add_option("system", system_file, "system file")->required();
  exp->add_option("points", points_file, "points file")->required();
  exp->add_option("--out-dir", flags.out_dir, "output directory");
  add_common(exp, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(certify)) return cmd_certify(system_file, points_file, flags);
    if (app.got_subcommand(constants)) return cmd_constants(system_file, point_literal, flags);
    if (app.got_subcommand(krawczyk)) {
      if (point_literal.empty() && box_literal.empty()) {
        std::cerr << "error: krawczyk needs --point or --box\n";
        return kExitInputError;
      }
      return cmd_krawczyk(system_file, point_literal, box_literal, flags);
    }
    if (app.got_subcommand(singular))
      return cmd_certify_singular(system_file, point_literal, iterations, flags);
    if (app.got_subcommand(exp)) {
      LoadedSystem sys = load_system_or_exit(system_file, flags);
      return run_export(sys, points_file, flags.out_dir);
    }
  } catch (const numcert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
