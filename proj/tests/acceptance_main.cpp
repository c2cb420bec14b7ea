// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.

#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "numcert/alphacertified.hpp"
#include "numcert/io.hpp"
#include "oracles.hpp"

using namespace numcert;

namespace {

struct Criterion {
  int id;
  const char* summary;
  std::function<bool(std::string&)> run;
};

LoadedSystem fixture_system(const char* name) {
  return load_system_file(std::string("fixtures/") + name);
}

template <class S>
std::vector<Point<S>> fixture_points(const char* name, std::size_t n) {
  return load_points_file<S>(std::string("fixtures/") + name, n);
}

bool close_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

bool endpoints_match(const ComplexInterval& c, double relo, double rehi, double imlo,
                     double imhi) {
  return close_abs(c.re.lo, relo, 1e-9) && close_abs(c.re.hi, rehi, 1e-9) &&
         close_abs(c.im.lo, imlo, 1e-9) && close_abs(c.im.hi, imhi, 1e-9);
}

std::complex<double> sample_in(const ComplexInterval& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ure(c.re.lo, c.re.hi), uim(c.im.lo, c.im.hi);
  return {ure(rng), uim(rng)};
}

bool criterion_alpha_constants(std::string& detail) {
  auto sys = fixture_system("i3_system.json");
  auto pts = fixture_points<ApproxScalar>("i3_points.json", 4);
  auto c = compute_constants(*sys.approx, pts[0]);
  std::ostringstream os;
  os << "gamma=" << c.gamma2 << " alpha=" << c.alpha2;
  detail = os.str();
  if (c.singular_jacobian) return false;
  if (std::fabs(c.gamma2 - 223.414) > 1e-3 * 223.414) return false;
  if (!(c.alpha2 < 1e-8)) return false;
  return true;
}

bool criterion_batch_alpha(std::string& detail) {
  auto sys = fixture_system("i3_system.json");
  auto pts = fixture_points<ApproxScalar>("i3_points.json", 4);
  auto report = certify_solutions(*sys.approx, pts, {});
  std::ostringstream os;
  os << "regular=" << report.certified_regular.size()
     << " real=" << report.certified_real.size()
     << " distinct=" << report.certified_distinct.size()
     << " singular=" << report.certified_singular.size()
     << " nonCertified=" << report.non_certified.size();
  detail = os.str();
  auto both = std::vector<std::size_t>{0, 1};
  return report.certified_regular == both && report.certified_real == both &&
         report.certified_distinct == both && report.certified_singular.empty() &&
         report.non_certified.empty();
}

bool criterion_interval_fixtures(std::string& detail) {
  auto i1 = make_complex_interval(RealInterval(0.8, 0.9), RealInterval(-0.1, 0.1));
  auto i2 = make_complex_interval(RealInterval(0.2, 0.3));
  bool ok = endpoints_match(i1 + i2, 1.0, 1.2, -0.1, 0.1);
  ok = ok && endpoints_match(i1 * i2, 0.16, 0.27, -0.03, 0.03);
  ok = ok && endpoints_match(pow(i1, 3), 0.486, 0.756, -0.244, 0.244);
  IntervalMatrix M(2, 2);
  M(0, 0) = i1;
  M(0, 1) = i2;
  M(1, 0) = i2;
  M(1, 1) = i1;
  auto M2 = M * M;
  ok = ok && endpoints_match(M2(0, 0), 0.67, 0.91, -0.18, 0.18);
  ok = ok && endpoints_match(M2(0, 1), 0.32, 0.54, -0.06, 0.06);
  ok = ok && endpoints_match(M2(1, 0), 0.32, 0.54, -0.06, 0.06);
  ok = ok && endpoints_match(M2(1, 1), 0.67, 0.91, -0.18, 0.18);
  detail = "sum/product/cube/matrix-square endpoints vs printed values";
  return ok;
}

bool criterion_krawczyk(std::string& detail) {
  auto sys = fixture_system("i36_system.json");
  const auto& F = *sys.approx;
  CPoint complex_root{{ApproxScalar(-1.61803), ApproxScalar(0.0, -1.27202)}};
  CPoint real_root{{ApproxScalar(.618034), ApproxScalar(-.786151)}};
  auto t = krawczyk_test_detailed(F, complex_root, {});
  std::ostringstream os;
  os << "K width=" << t.op.K.max_width();
  detail = os.str();
  if (!t.certified) return false;
  if (!(t.op.K.max_width() < 1e-8)) return false;
  if (krawczyk_realness_test(F, complex_root)) return false;
  if (!krawczyk_realness_test(F, real_root)) return false;
  return true;
}

bool criterion_singular(std::string& detail) {
  auto sys = fixture_system("i45_system.json");
  const auto& F = *sys.approx;
  CPoint x{{ApproxScalar(1e-7), ApproxScalar(0.0, 2e-7)}};

  DeflationOptions opts;
  if (!certify_singular(F, x, opts).first) return false;
  opts.iterations = 1;
  if (certify_singular(F, x, opts).first) return false;
  opts.iterations = 2;
  if (!certify_singular(F, x, opts).first) return false;

  int passed = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    DeflationOptions o;
    o.rng_seed = seed;
    o.iterations = 2;
    if (certify_singular(F, x, o).first) ++passed;
  }
  std::ostringstream os;
  os << "seeds passed: " << passed << "/50";
  detail = os.str();
  return passed >= 49;
}

bool criterion_exact(std::string& detail) {
  using F50 = oracle::Float50;
  auto sys = fixture_system("i23_system.json");
  auto pts = fixture_points<GaussianRational>("i24_points.json", 4);
  auto c = compute_constants(*sys.exact, pts[0]);
  if (c.singular_jacobian) return false;
  auto o = oracle::constants_oracle<F50>(*sys.exact, pts[0]);
  auto sound = [](const Rational& exact_value, const F50& oracle_value) {
    F50 v = exact_value.convert_to<F50>();
    return v >= oracle_value * (1 - F50("1e-40")) && v <= oracle_value * F50("1.05");
  };
  detail = "alpha=" + detail::rational_to_string(c.alpha2) +
           " beta=" + detail::rational_to_string(c.beta2) +
           " gamma=" + detail::rational_to_string(c.gamma2);
  return sound(c.alpha2, o.alpha2) && sound(c.beta2, o.beta2) && sound(c.gamma2, o.gamma2);
}

bool property_containment(std::string& why) {
  std::mt19937_64 rng(4096);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  auto rand_iv = [&]() {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    return ComplexInterval(RealInterval(std::min(a, b), std::max(a, b)),
                           RealInterval(std::min(c, d), std::max(c, d)));
  };
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = rand_iv(), b = rand_iv();
    std::uniform_int_distribution<std::uint32_t> kd(0, 5);
    std::uint32_t k = kd(rng);
    auto sum = a + b, diff = a - b, prod = a * b, powk = pow(a, k);
    for (int s = 0; s < 100; ++s) {
      auto x = sample_in(a, rng), y = sample_in(b, rng);
      std::complex<double> xp(1.0, 0.0);
      for (std::uint32_t i = 0; i < k; ++i) xp *= x;
      if (!sum.contains(x + y) || !diff.contains(x - y) || !prod.contains(x * y) ||
          !powk.contains(xp)) {
        why = "interval containment violated";
        return false;
      }
    }
  }
  return true;
}

bool property_gamma_oracle(std::string& why) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int tested = 0;
  while (tested < 100) {
    std::uniform_int_distribution<std::uint32_t> degd(2, 4);
    std::uint32_t d = degd(rng);
    Polynomial<ApproxScalar> f(1);
    for (std::uint32_t k = 0; k <= d; ++k) {
      Monomial m(1);
      m.exponents[0] = k;
      f.add_term(std::move(m), ApproxScalar(gauss(rng), gauss(rng)));
    }
    if (f.degree() < 2) continue;
    PolySystem<ApproxScalar> F({f});
    auto x = oracle::random_point(rng, 1);
    auto c = compute_constants(F, x);
    if (c.singular_jacobian) continue;
    if (std::sqrt(c.gamma2) < oracle::univariate_gamma(f, x[0]) * (1.0 - 1e-12)) {
      why = "gamma bound below the true univariate gamma";
      return false;
    }
    ++tested;
  }
  return true;
}

bool property_jacobian_fd(std::string& why) {
  std::mt19937_64 rng(33);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 3;
    std::vector<Polynomial<ApproxScalar>> ps;
    for (std::size_t i = 0; i < n; ++i) {
      auto p = oracle::random_poly(rng, n, 4, 5);
      Monomial lead(n);
      lead.exponents[i] = 1;
      p.add_term(std::move(lead), ApproxScalar(1.0));
      ps.push_back(std::move(p));
    }
    PolySystem<ApproxScalar> F(std::move(ps));
    auto x = oracle::random_point(rng, n);
    auto J = evaluate_jacobian(F, x);
    for (std::size_t j = 0; j < n; ++j) {
      auto xp = x, xm = x;
      xp.coords[j] += h;
      xm.coords[j] -= h;
      auto fp = evaluate(F, xp);
      auto fm = evaluate(F, xm);
      for (std::size_t i = 0; i < n; ++i) {
        ApproxScalar fd = (fp[i] - fm[i]) / (2.0 * h);
        if (std::abs(fd - J[i * n + j]) > 1e-6 * std::max(1.0, std::abs(J[i * n + j]))) {
          why = "Jacobian disagrees with central finite differences";
          return false;
        }
      }
    }
  }
  return true;
}

bool property_quadratic_envelope(std::string& why) {
  using R = oracle::Float200;
  auto i3 = fixture_system("i3_system.json");
  auto i3_pts = fixture_points<ApproxScalar>("i3_points.json", 4);
  auto i36 = fixture_system("i36_system.json");
  struct Case {
    const PolySystem<ApproxScalar>* F;
    CPoint x;
  };
  std::vector<Case> corpus{
      {&*i3.approx, i3_pts[0]},
      {&*i3.approx, i3_pts[1]},
      {&*i36.approx, CPoint{{ApproxScalar(.618034), ApproxScalar(-.786151)}}},
      {&*i36.approx, CPoint{{ApproxScalar(-1.61803), ApproxScalar(0.0, -1.27202)}}}};
  for (const auto& test : corpus) {
    if (!certify_regular(*test.F, test.x)) {
      why = "corpus point unexpectedly not certified";
      return false;
    }
    auto ref = oracle::newton_refine<R>(*test.F, test.x, 12);
    std::vector<oracle::Cx<R>> it;
    for (const auto& c : test.x.coords) it.push_back(oracle::Cx<R>(c));
    R e0 = oracle::distance(it, ref);
    for (int k = 1; k <= 6; ++k) {
      auto step =
          oracle::solve(oracle::eval_jacobian(*test.F, it), oracle::eval_system(*test.F, it));
      for (std::size_t i = 0; i < it.size(); ++i) it[i] = it[i] - step[i];
      R bound = e0 * R("1.5");
      for (int j = 0; j < (1 << k) - 1; ++j) bound /= 2;
      if (oracle::distance(it, ref) > bound) {
        why = "quadratic convergence envelope violated";
        return false;
      }
    }
    R res{};
    for (const auto& v : oracle::eval_system(*test.F, it)) res = std::max(res, v.abs());
    if (res >= R("1e-14")) {
      why = "residual after 6 Newton steps above 1e-14";
      return false;
    }
  }
  return true;
}

bool property_partition_fuzz(std::string& why) {
  std::mt19937_64 rng(999);
  auto sys = fixture_system("i36_system.json");
  const auto& F = *sys.approx;
  std::uniform_int_distribution<int> count(0, 5), kind(0, 2);
  for (int batch = 0; batch < 100; ++batch) {
    std::vector<CPoint> sols;
    int m = count(rng);
    for (int i = 0; i < m; ++i) {
      if (kind(rng) == 0)
        sols.push_back(CPoint{{ApproxScalar(.618034), ApproxScalar(-.786151)}});
      else if (kind(rng) == 1 && !sols.empty())
        sols.push_back(sols.back());
      else
        sols.push_back(oracle::random_point(rng, 2, 2.0));
    }
    CertifyOptions opts;
    opts.strategy =
        batch % 2 ? CertStrategy::AlphaTheory : CertStrategy::IntervalArithmetic;
    opts.max_deflation_iterations = 3;
    auto report = certify_solutions(F, sols, opts);
    std::vector<int> seen(sols.size(), 0);
    for (auto i : report.certified_regular) seen.at(i) += 1;
    for (auto i : report.certified_singular) seen.at(i) += 1;
    for (auto i : report.non_certified) seen.at(i) += 1;
    for (int s : seen)
      if (s != 1) {
        why = "report partition invariant violated";
        return false;
      }
  }
  return true;
}

bool property_export_roundtrip(std::string& why) {
  auto sys = fixture_system("i3_system.json");
  auto pts = fixture_points<ApproxScalar>("i3_points.json", 4);
  std::stringstream sysf, ptsf;
  write_alphacertified_system(sysf, *sys.approx);
  write_alphacertified_points(ptsf, pts);
  auto back = read_alphacertified_system<ApproxScalar>(sysf);
  auto pts_back = read_alphacertified_points<ApproxScalar>(ptsf, 4);
  for (std::size_t i = 0; i < 4; ++i)
    if (!(back[i] == (*sys.approx)[i])) {
      why = "system export/import changed a polynomial";
      return false;
    }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (pts_back[i][j] != pts[i][j]) {
        why = "points export/import changed a coordinate";
        return false;
      }

  auto exact_sys = fixture_system("i23_system.json");
  std::stringstream exact_stream;
  write_alphacertified_system(exact_stream, *exact_sys.exact);
  auto exact_back = read_alphacertified_system<GaussianRational>(exact_stream);
  for (std::size_t i = 0; i < 4; ++i)
    if (!(exact_back[i] == (*exact_sys.exact)[i])) {
      why = "exact system export/import changed a polynomial";
      return false;
    }
  return true;
}

bool criterion_properties(std::string& detail) {
  struct Prop {
    const char* name;
    bool (*run)(std::string&);
  };
  const Prop props[] = {{"interval containment", property_containment},
                        {"gamma oracle", property_gamma_oracle},
                        {"jacobian finite differences", property_jacobian_fd},
                        {"quadratic envelope", property_quadratic_envelope},
                        {"partition fuzz", property_partition_fuzz},
                        {"export round-trip", property_export_roundtrip}};
  for (const auto& p : props) {
    std::string why;
    if (!p.run(why)) {
      detail = std::string(p.name) + ": " + why;
      return false;
    }
  }
  detail = "containment, gamma oracle, jacobian FD, envelope, fuzz, export";
  return true;
}

bool criterion_negative_controls(std::string& detail) {
  auto i36 = fixture_system("i36_system.json");
  const auto& F = *i36.approx;
  CPoint far{{ApproxScalar(3.0), ApproxScalar(2.0)}};
  double residual = 0.0;
  for (const auto& v : evaluate(F, far)) residual = std::max(residual, std::abs(v));
  if (residual <= 0.1) return false;
  for (auto strategy : {CertStrategy::AlphaTheory, CertStrategy::IntervalArithmetic}) {
    CertifyOptions opts;
    opts.strategy = strategy;
    auto report = certify_solutions(F, {far}, opts);
    if (report.non_certified != std::vector<std::size_t>{0}) {
      detail = "a far point was certified";
      return false;
    }
  }

  std::vector<std::string> vx{"x"};
  PolySystem<ApproxScalar> sq({parse_polynomial<ApproxScalar>("x^2 - 1", vx)});
  IntervalBox no_root({make_complex_interval(RealInterval(10.0, 11.0))});
  if (krawczyk_test(sq, no_root)) {
    detail = "a rootless box passed the Krawczyk test";
    return false;
  }

  auto i45 = fixture_system("i45_system.json");
  CPoint origin{{ApproxScalar(0.0), ApproxScalar(0.0)}};
  auto c = compute_constants(*i45.approx, origin);
  if (!c.singular_jacobian || !std::isinf(c.alpha2) || certify_regular(c)) {
    detail = "the singular origin was not flagged with infinite constants";
    return false;
  }
  detail = "far point, rootless box, singular origin all rejected";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "alpha constants fixture (gamma 223.414 rel 1e-3, alpha < 1e-8)",
       criterion_alpha_constants},
      {2, "batch alpha certification fixture (both roots regular/real/distinct)",
       criterion_batch_alpha},
      {3, "interval arithmetic fixtures (printed endpoints, abs 1e-9)",
       criterion_interval_fixtures},
      {4, "Krawczyk fixtures (test true, widths < 1e-8, realness verdicts)",
       criterion_krawczyk},
      {5, "singular fixtures (auto/1/2 iterations, 50-seed stability)",
       criterion_singular},
      {6, "exact-mode soundness vs 50-digit oracle (within 5%)", criterion_exact},
      {7, "property suites", criterion_properties},
      {8, "negative controls", criterion_negative_controls},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", c.id, c.summary,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
