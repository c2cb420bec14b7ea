#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "numcert/certify.hpp"
#include "numcert/parse.hpp"
#include "oracles.hpp"

using namespace numcert;
using Catch::Approx;

namespace {

const std::vector<std::string> kVars4{"x1", "x2", "y1", "y2"};
const std::vector<std::string> kVarsXY{"x", "y"};

CSystem make(std::initializer_list<const char*> exprs, const std::vector<std::string>& vars) {
  std::vector<Polynomial<ApproxScalar>> ps;
  for (auto* e : exprs) ps.push_back(parse_polynomial<ApproxScalar>(e, vars));
  return CSystem(std::move(ps));
}

CSystem session_system() {
  return make({"3*y1 + 2*y2 - 1", "3*x1 + 2*x2 - 3.5", "x1^2 + y1^2 - 1",
               "x2^2 + y2^2 - 1"},
              kVars4);
}

std::vector<CPoint> session_solutions() {
  return {CPoint{{ApproxScalar(.652548), ApproxScalar(.771177), ApproxScalar(.757747),
                  ApproxScalar(-.63662)}},
          CPoint{{ApproxScalar(.95437), ApproxScalar(.318445), ApproxScalar(-.298627),
                  ApproxScalar(.947941)}}};
}

void check_partition(const CertificationReport& r, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (auto i : r.certified_regular) seen.at(i) += 1;
  for (auto i : r.certified_singular) seen.at(i) += 1;
  for (auto i : r.non_certified) seen.at(i) += 1;
  for (std::size_t i = 0; i < n; ++i) CHECK(seen[i] == 1);
  for (auto i : r.certified_real) {
    bool in_reg = std::count(r.certified_regular.begin(), r.certified_regular.end(), i) > 0;
    bool in_sing = std::count(r.certified_singular.begin(), r.certified_singular.end(), i) > 0;
    CHECK((in_reg || in_sing));
  }
  for (auto i : r.certified_distinct)
    CHECK(std::count(r.certified_regular.begin(), r.certified_regular.end(), i) > 0);
}

}  // namespace

TEST_CASE("certify_solutions, alpha strategy, session fixture") {
  auto report = certify_solutions(session_system(), session_solutions(), {});
  CHECK(report.certified_regular == std::vector<std::size_t>{0, 1});
  CHECK(report.certified_distinct == std::vector<std::size_t>{0, 1});
  CHECK(report.certified_real == std::vector<std::size_t>{0, 1});
  CHECK(report.certified_singular.empty());
  CHECK(report.non_certified.empty());
  REQUIRE(report.alpha_values.size() == 2);
  CHECK(report.alpha_values[0] < 1e-4);
  CHECK(report.alpha_values[1] < 1e-4);
  check_partition(report, 2);
}

TEST_CASE("certify_solutions, interval strategy, session fixture") {
  CertifyOptions opts;
  opts.strategy = CertStrategy::IntervalArithmetic;
  auto report = certify_solutions(session_system(), session_solutions(), opts);
  CHECK(report.certified_regular == std::vector<std::size_t>{0, 1});
  CHECK(report.certified_real == std::vector<std::size_t>{0, 1});
  CHECK(report.non_certified.empty());
  CHECK(report.alpha_values.empty());
  for (auto i : report.certified_regular) {
    REQUIRE(report.records[i].krawczyk.has_value());
    CHECK(report.records[i].krawczyk->certified);
    CHECK(report.records[i].krawczyk->op.K.max_width() < 1e-8);
  }
  check_partition(report, 2);
}

TEST_CASE("empty input gives empty lists") {
  auto report = certify_solutions(session_system(), {}, {});
  CHECK(report.records.empty());
  CHECK(report.certified_regular.empty());
  CHECK(report.certified_singular.empty());
  CHECK(report.certified_distinct.empty());
  CHECK(report.certified_real.empty());
  CHECK(report.non_certified.empty());
}

TEST_CASE("singular solutions land in certifiedSingular with a trace") {
  auto cusp = make({"x^2 + y", "x^3 - y^2"}, kVarsXY);
  std::vector<CPoint> sols{CPoint{{ApproxScalar(1e-7), ApproxScalar(0.0, 2e-7)}}};
  for (auto strategy : {CertStrategy::AlphaTheory, CertStrategy::IntervalArithmetic}) {
    CertifyOptions opts;
    opts.strategy = strategy;
    auto report = certify_solutions(cusp, sols, opts);
    CHECK(report.certified_singular == std::vector<std::size_t>{0});
    CHECK(report.non_certified.empty());
    REQUIRE(report.records[0].trace.has_value());
    CHECK(report.records[0].trace->verdict);
    CHECK(report.records[0].trace->levels.size() == 2);
    // soft verdicts carry no separation bound
    CHECK(report.certified_distinct.empty());
    check_partition(report, 1);
  }
}

TEST_CASE("negative control: far points are never certified") {
  auto F = session_system();
  std::vector<CPoint> sols{CPoint{{ApproxScalar(2.0), ApproxScalar(-3.0), ApproxScalar(1.0),
                                   ApproxScalar(0.5)}}};
  double residual = 0.0;
  for (const auto& v : evaluate(F, sols[0])) residual = std::max(residual, std::abs(v));
  REQUIRE(residual > 0.1);
  for (auto strategy : {CertStrategy::AlphaTheory, CertStrategy::IntervalArithmetic}) {
    CertifyOptions opts;
    opts.strategy = strategy;
    auto report = certify_solutions(F, sols, opts);
    CHECK(report.non_certified == std::vector<std::size_t>{0});
    CHECK(report.certified_regular.empty());
    CHECK(report.certified_singular.empty());
    check_partition(report, 1);
  }
}

TEST_CASE("partition invariant under fuzzing") {
  std::mt19937_64 rng(1234);
  auto F = session_system();
  auto circle = make({"x^2 + y^2 - 1", "x - y^2"}, kVarsXY);
  auto good = session_solutions();
  std::uniform_int_distribution<int> count(0, 6), kind(0, 3);
  for (int batch = 0; batch < 100; ++batch) {
    const bool use_circle = batch % 2 == 0;
    const auto& sys = use_circle ? circle : F;
    std::size_t n = sys.num_vars();
    std::vector<CPoint> sols;
    int m = count(rng);
    for (int i = 0; i < m; ++i) {
      switch (kind(rng)) {
        case 0:
          sols.push_back(oracle::random_point(rng, n, 3.0));  // garbage
          break;
        case 1:  // a known good point (padded/truncated to fit)
          if (!use_circle) {
            sols.push_back(good[i % 2]);
          } else {
            sols.push_back(CPoint{{ApproxScalar(.618034), ApproxScalar(-.786151)}});
          }
          break;
        case 2:
          sols.push_back(sols.empty() ? oracle::random_point(rng, n) : sols.back());
          break;
        default:
          sols.push_back(oracle::random_point(rng, n, 0.3));
          break;
      }
    }
    CertifyOptions opts;
    opts.strategy = batch % 4 < 2 ? CertStrategy::AlphaTheory
                                  : CertStrategy::IntervalArithmetic;
    opts.max_deflation_iterations = 3;  // keep the fuzz fast
    auto report = certify_solutions(sys, sols, opts);
    CHECK(report.records.size() == sols.size());
    check_partition(report, sols.size());
  }
}

TEST_CASE("strategy agreement on the regular corpus") {
  auto F = session_system();
  auto sols = session_solutions();
  auto circle = make({"x^2 + y^2 - 1", "x - y^2"}, kVarsXY);
  std::vector<CPoint> circle_sols{
      CPoint{{ApproxScalar(.618034), ApproxScalar(-.786151)}},
      CPoint{{ApproxScalar(-1.61803), ApproxScalar(0.0, -1.27202)}}};

  CertifyOptions alpha, interval;
  interval.strategy = CertStrategy::IntervalArithmetic;
  CHECK(certify_solutions(F, sols, alpha).certified_regular ==
        certify_solutions(F, sols, interval).certified_regular);
  CHECK(certify_solutions(circle, circle_sols, alpha).certified_regular ==
        certify_solutions(circle, circle_sols, interval).certified_regular);
}

TEST_CASE("refinement never loses certified points") {
  auto F = session_system();
  auto sols = session_solutions();
  // perturb the inputs so they need the refinement to shine
  for (auto& p : sols)
    for (auto& c : p.coords) c += ApproxScalar(1e-5, -1e-5);
  std::size_t prev = 0;
  for (std::size_t refine = 0; refine <= 3; ++refine) {
    CertifyOptions opts;
    opts.refinement_steps = refine;
    auto report = certify_solutions(F, sols, opts);
    std::size_t certified = report.certified_regular.size() + report.certified_singular.size();
    CHECK(certified >= prev);
    prev = certified;
  }
}

TEST_CASE("order independence") {
  auto F = session_system();
  auto sols = session_solutions();
  std::vector<CPoint> swapped{sols[1], sols[0]};
  auto a = certify_solutions(F, sols, {});
  auto b = certify_solutions(F, swapped, {});
  CHECK(a.certified_regular.size() == b.certified_regular.size());
  CHECK(a.alpha_values[0] == Approx(b.alpha_values[1]));
  CHECK(a.alpha_values[1] == Approx(b.alpha_values[0]));
}

TEST_CASE("pairwise distinct intervals") {
  auto near = [](double re) {
    return IntervalBox({make_complex_interval(RealInterval(re - 0.01, re + 0.01))});
  };
  std::vector<IntervalBox> boxes{near(0.0), near(1.0), near(0.0)};
  auto pairs = pairwise_distinct_intervals(boxes);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(pairs[1] == std::pair<std::size_t, std::size_t>{1, 2});

  // a box is never distinct from itself; degenerate disjoint boxes are
  std::vector<IntervalBox> degenerate{
      IntervalBox({ComplexInterval(ApproxScalar(0.0))}),
      IntervalBox({ComplexInterval(ApproxScalar(0.0))}),
      IntervalBox({ComplexInterval(ApproxScalar(2.0))})};
  auto dp = pairwise_distinct_intervals(degenerate);
  REQUIRE(dp.size() == 2);
  CHECK(dp[0] == std::pair<std::size_t, std::size_t>{0, 2});
  CHECK(dp[1] == std::pair<std::size_t, std::size_t>{1, 2});
}

TEST_CASE("per-point errors are surfaced, not thrown") {
  auto F = session_system();
  std::vector<CPoint> sols{CPoint{{ApproxScalar(1.0)}},  // wrong dimension
                           session_solutions()[0]};
  auto report = certify_solutions(F, sols, {});
  CHECK(report.non_certified == std::vector<std::size_t>{0});
  CHECK_FALSE(report.records[0].error.empty());
  CHECK(report.certified_regular == std::vector<std::size_t>{1});
  check_partition(report, 2);
}
