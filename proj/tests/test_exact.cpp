#include <catch2/catch_amalgamated.hpp>

#include "numcert/alpha.hpp"
#include "numcert/parse.hpp"
#include "oracles.hpp"

using namespace numcert;

namespace {

using QScalar = GaussianRational;
const std::vector<std::string> kVars4{"x1", "x2", "y1", "y2"};
const std::vector<std::string> kVarsX{"x"};

PolySystem<QScalar> make(std::initializer_list<const char*> exprs,
                         const std::vector<std::string>& vars) {
  std::vector<Polynomial<QScalar>> ps;
  for (auto* e : exprs) ps.push_back(parse_polynomial<QScalar>(e, vars));
  return PolySystem<QScalar>(std::move(ps));
}

PolySystem<QScalar> exact_session_system() {
  return make({"3*y1 + 2*y2 - 1", "3*x1 + 2*x2 - 7/2", "x1^2 + y1^2 - 1",
               "x2^2 + y2^2 - 1"},
              kVars4);
}

Point<QScalar> exact_session_point() {
  return Point<QScalar>{{QScalar(Rational(5, 9)), QScalar(Rational(3, 4)),
                         QScalar(Rational(3, 4)), QScalar(Rational(-1, 2))}};
}

Rational q(long long n, long long d) { return Rational(n, d); }

}  // namespace

TEST_CASE("exact constants reproduce the reference rationals") {
  auto F = exact_session_system();
  auto c = compute_constants(F, exact_session_point());
  REQUIRE_FALSE(c.singular_jacobian);
  CHECK(c.alpha2 == Rational(BigInt("73052652544805089"), BigInt("8695980754208352")));
  CHECK(c.beta2 == q(9731461, 303595776));
  CHECK(c.gamma2 == Rational(BigInt("60054828392"), BigInt("229146291")));
  CHECK(c.alpha2 == c.beta2 * c.gamma2);
  // this alpha is far above the certification threshold
  CHECK_FALSE(certify_regular(c));
}

TEST_CASE("exact constants dominate the 50-digit oracle and stay within 5%") {
  using F50 = oracle::Float50;
  auto F = exact_session_system();
  auto x = exact_session_point();
  auto c = compute_constants(F, x);
  auto o = oracle::constants_oracle<F50>(F, x);

  auto check_pair = [](const Rational& exact_value, const F50& oracle_value) {
    F50 v = exact_value.convert_to<F50>();
    CHECK(v >= oracle_value * (1 - F50("1e-40")));
    CHECK(v <= oracle_value * F50("1.05"));
  };
  check_pair(c.alpha2, o.alpha2);
  check_pair(c.beta2, o.beta2);
  check_pair(c.gamma2, o.gamma2);
}

TEST_CASE("exact soundness on random rational systems") {
  using F50 = oracle::Float50;
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  std::uniform_int_distribution<std::uint32_t> exp(0, 2);
  const std::vector<std::string> vars{"x", "y"};
  int tested = 0;
  while (tested < 25) {
    std::vector<Polynomial<QScalar>> ps;
    for (int i = 0; i < 2; ++i) {
      Polynomial<QScalar> p(2);
      for (int t = 0; t < 4; ++t) {
        Monomial m(2);
        m.exponents[0] = exp(rng);
        m.exponents[1] = exp(rng);
        p.add_term(std::move(m), QScalar(q(num(rng), den(rng)), q(num(rng), den(rng))));
      }
      Monomial lead(2);
      lead.exponents[i] = 1;
      p.add_term(std::move(lead), QScalar(Rational(1)));
      ps.push_back(std::move(p));
    }
    PolySystem<QScalar> F(std::move(ps));
    Point<QScalar> x{{QScalar(q(num(rng), den(rng)), q(num(rng), den(rng))),
                      QScalar(q(num(rng), den(rng)), q(num(rng), den(rng)))}};
    auto c = compute_constants(F, x);
    if (c.singular_jacobian) continue;
    auto o = oracle::constants_oracle<F50>(F, x);
    CHECK(c.alpha2.convert_to<F50>() >= o.alpha2 * (1 - F50("1e-40")));
    CHECK(c.alpha2.convert_to<F50>() <= o.alpha2 * (1 + F50("1e-40")));
    CHECK(c.beta2.convert_to<F50>() >= o.beta2 * (1 - F50("1e-40")));
    CHECK(c.gamma2.convert_to<F50>() >= o.gamma2 * (1 - F50("1e-40")));
    ++tested;
  }
}

TEST_CASE("exact singular Jacobian flags infinite constants") {
  const std::vector<std::string> vars{"x", "y"};
  auto F = make({"x^2 + y", "x^3 - y^2"}, vars);
  Point<QScalar> origin{{QScalar(Rational(0)), QScalar(Rational(0))}};
  auto c = compute_constants(F, origin);
  CHECK(c.singular_jacobian);
  CHECK_FALSE(certify_regular(c));
}

TEST_CASE("exact regular certification through the rational threshold test") {
  // x^2 - 2 at 3/2: Newton converges fast, alpha is small
  auto F = make({"x^2 - 2"}, kVarsX);
  Point<QScalar> x{{QScalar(q(3, 2))}};
  auto c = compute_constants(F, x);
  // cross-check the rational threshold test against the double comparison
  double a2 = c.alpha2.convert_to<double>();
  CHECK(certify_regular(c) == (a2 < kAlphaThreshold2));

  // far from a root the test must reject
  Point<QScalar> far{{QScalar(Rational(100))}};
  CHECK_FALSE(certify_regular(compute_constants(F, far)));
}

TEST_CASE("exact distinctness and realness") {
  // 577/408 is a continued-fraction convergent of sqrt(2); alpha is tiny
  auto F = make({"x^2 - 2"}, kVarsX);
  Point<QScalar> a{{QScalar(q(577, 408))}};
  Point<QScalar> b{{QScalar(q(-577, 408))}};
  CHECK(certify_distinct(F, a, b) == DistinctVerdict::Distinct);
  CHECK(certify_distinct(F, a, a) == DistinctVerdict::Same);
  CHECK(certify_real(F, a) == RealnessVerdict::Real);

  // near the imaginary root i*sqrt(2) of x^2 + 2, the conjugate pair is
  // far apart relative to beta
  auto G = make({"x^2 + 2"}, kVarsX);
  Point<QScalar> imag{{QScalar(Rational(0), q(3, 2))}};
  CHECK(certify_real(G, imag) == RealnessVerdict::NotReal);
}

TEST_CASE("exact batch certification") {
  auto F = make({"x^2 - 2"}, kVarsX);
  std::vector<Point<QScalar>> sols{Point<QScalar>{{QScalar(q(577, 408))}},
                                   Point<QScalar>{{QScalar(q(-577, 408))}},
                                   Point<QScalar>{{QScalar(Rational(50))}}};
  auto batch = alpha_theory_certification(F, sols);
  CHECK(batch.certified_regular == std::vector<std::size_t>{0, 1});
  CHECK(batch.certified_distinct == std::vector<std::size_t>{0, 1});
  CHECK(batch.certified_real == std::vector<std::size_t>{0, 1});
}
