#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "finsler/gacheck.h"
#include "finsler/metric.h"
#include "finsler/sampling.h"

using namespace finsler;

namespace {

MetricSpec Randers(const Vec3& b) {
  MetricSpec s;
  s.family = MetricFamily::kRanders;
  s.b = b;
  return s;
}

MetricSpec AlphaBeta(PhiFamily phi, double b) {
  MetricSpec s;
  s.family = MetricFamily::kAlphaBeta;
  s.phi = phi;
  s.b = Vec3(b, 0.0, 0.0);
  return s;
}

}  // namespace

TEST_CASE("sufficient condition for a drift-shift metric reduces analytically") {
  // F_s = |y|, F_a = b.y: condition-1 matrix is I/3 - b b^T with eigenvalues
  // {1/3 - |b|^2, 1/3, 1/3}, independent of y, and Hess F_a = 0.
  SufficientConditionReport report;
  std::string err;
  REQUIRE(SufficientCondition(Randers(Vec3(0.3, 0, 0)), &report, &err, 200));
  CHECK(report.holds);
  CHECK(report.fs_finsler);
  CHECK(report.cond1_min_eig == doctest::Approx(1.0 / 3.0 - 0.09).epsilon(1e-12));
  CHECK(std::abs(report.cond2_max_eig) <= 1e-12);

  REQUIRE(SufficientCondition(Randers(Vec3(0.6, 0, 0)), &report, &err, 200));
  CHECK_FALSE(report.holds);
  CHECK(report.cond1_min_eig == doctest::Approx(1.0 / 3.0 - 0.36).epsilon(1e-12));
  CHECK(report.has_witness);
  // The violated eigen-direction is the drift axis.
  CHECK(std::abs(report.witness_w.normalized().dot(Vec3(1, 0, 0))) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("symmetrized-tensor check") {
  GaDirectReport report;
  std::string err;
  REQUIRE(GaDirect(Randers(Vec3(0.3, 0, 0)), &report, &err, 500));
  CHECK(report.holds);
  CHECK(report.min_eig > 0.0);

  REQUIRE(GaDirect(Randers(Vec3(0.9, 0, 0)), &report, &err, 500));
  CHECK_FALSE(report.holds);
}

TEST_CASE("verdicts are even in the drift") {
  for (double b : {0.2, 0.45, 0.7}) {
    GAReport plus, minus;
    std::string err;
    REQUIRE(CheckGa(Randers(Vec3(b, 0, 0)), &plus, &err, 300, 150));
    REQUIRE(CheckGa(Randers(Vec3(-b, 0, 0)), &minus, &err, 300, 150));
    CHECK(plus.direct.holds == minus.direct.holds);
    CHECK(plus.sufficient.holds == minus.sufficient.holds);
    CHECK(plus.direct.min_eig == doctest::Approx(minus.direct.min_eig).epsilon(1e-12));
  }
}

TEST_CASE("sufficient implies the direct check on random configurations") {
  SplitMix64 rng(301);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    MetricSpec spec;
    switch (rng.Next() % 3) {
      case 0: spec = Randers(RandomUnitVector(&rng) * rng.NextInRange(0.0, 0.95)); break;
      case 1: spec = AlphaBeta(PhiFamily::kTwoOrder, rng.NextInRange(0.0, 0.6)); break;
      default: spec = AlphaBeta(PhiFamily::kMatsumoto, rng.NextInRange(0.0, 0.45)); break;
    }
    GAReport report;
    std::string err;
    if (!CheckGa(spec, &report, &err, 200, 100)) continue;
    ++checked;
    if (report.sufficient.holds) CHECK(report.direct.holds);
  }
  CHECK(checked >= 90);
}

TEST_CASE("threshold scans bracket the known critical drifts") {
  struct Case {
    PhiFamily family;
    double lo, hi, expect;
  };
  const Case cases[] = {
      {PhiFamily::kRanders, 0.4, 0.8, 1.0 / std::sqrt(3.0)},
      {PhiFamily::kTwoOrder, 0.2, 0.45, 1.0 / std::sqrt(10.0)},
      {PhiFamily::kMatsumoto, 0.35, 0.65, 0.5},
  };
  for (const Case& c : cases) {
    ThresholdResult result;
    std::string err;
    REQUIRE_MESSAGE(
        ThresholdScan(c.family, c.lo, c.hi, 0.002, &result, &err, 13, 500), err);
    CHECK(std::abs(result.critical_b - c.expect) <= 0.005);
    CHECK(result.monotone);
    CHECK(result.bracket_hi - result.bracket_lo <= 0.002 + 1e-12);
    REQUIRE(result.table.size() == 13);
    CHECK(result.table.front().verdict);
    CHECK_FALSE(result.table.back().verdict);
  }
}

TEST_CASE("threshold scan rejects a bracket without a flip") {
  ThresholdResult result;
  std::string err;
  CHECK_FALSE(ThresholdScan(PhiFamily::kRanders, 0.7, 0.8, 0.002, &result, &err));
  CHECK_FALSE(err.empty());
  CHECK_FALSE(ThresholdScan(PhiFamily::kRanders, 0.1, 0.3, 0.002, &result, &err));
}

TEST_CASE("odd-even binomial gap values and positivity") {
  double f;
  std::string err;
  REQUIRE(OddEvenBinomialGap(0.5, 2, &f, &err));
  CHECK(f == 0.75);
  REQUIRE(OddEvenBinomialGap(0.5, 3, &f, &err));
  CHECK(f == 1.5);

  long long num, den;
  REQUIRE(OddEvenBinomialGapRational(2, 1, 2, &num, &den, &err));
  CHECK(num == 3);
  CHECK(den == 4);
  REQUIRE(OddEvenBinomialGapRational(3, 1, 2, &num, &den, &err));
  CHECK(num == 3);
  CHECK(den == 2);

  for (int m = 1; m <= 12; ++m) {
    double limit = OddEvenBinomialGapAdmissibleLimit(m);
    if (m <= 2 || m % 2 == 1) {
      CHECK(limit == 1.0);
    } else {
      CHECK(limit == doctest::Approx(1.0 / std::sqrt(m - 1.0)).epsilon(1e-12));
    }
    for (int i = 1; i < 200; ++i) {
      double a = limit * i / 200.0;
      REQUIRE_MESSAGE(OddEvenBinomialGap(a, m, &f, &err), err);
      CHECK(f >= -1e-12);
    }
    // The closed endpoint is outside the admissible open interval.
    CHECK_FALSE(OddEvenBinomialGap(limit, m, &f, &err));
    CHECK_FALSE(OddEvenBinomialGap(-0.1, m, &f, &err));
  }
}
