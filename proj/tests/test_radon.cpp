#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>

#include "finsler/cartan.h"
#include "finsler/metric.h"
#include "finsler/radon.h"
#include "finsler/sampling.h"

using namespace finsler;

namespace {

MetricSpec Randers(const Vec3& b) {
  MetricSpec s;
  s.family = MetricFamily::kRanders;
  s.b = b;
  return s;
}

HomogeneousFunction InverseSquare() {
  HomogeneousFunction g;
  g.eval = [](const Vec3& y) { return 1.0 / y.squaredNorm(); };
  g.degree = -2.0;
  return g;
}

HomogeneousFunction MetricPower(const MetricSpec& spec) {
  HomogeneousFunction g;
  int m = spec.m;
  g.eval = [spec, m](const Vec3& y) {
    return std::pow(EvalMetricFast(spec, Vec3::Zero(), y), -m);
  };
  g.degree = -m;
  return g;
}

double Transform(const HomogeneousFunction& g, const Vec3& z, int n) {
  double r;
  std::string err;
  REQUIRE_MESSAGE(RadonTransform(g, z, n, &r, &err), err);
  return r;
}

}  // namespace

TEST_CASE("inverse-square norm transforms to the reciprocal norm") {
  HomogeneousFunction g = InverseSquare();
  CHECK(Transform(g, Vec3(0, 0, 2), 64) == doctest::Approx(0.5).epsilon(1e-14));
  SplitMix64 rng(201);
  for (int i = 0; i < 50; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.25, 4.0);
    CHECK(std::abs(Transform(g, z, 64) - 1.0 / z.norm()) <= 1e-12);
  }
}

TEST_CASE("frozen drift-shift transform value") {
  HomogeneousFunction g = MetricPower(Randers(Vec3(0.3, 0, 0)));
  CHECK(Transform(g, Vec3(0, 0, 2), 256) ==
        doctest::Approx(0.5759806795175375).epsilon(1e-12));
}

TEST_CASE("linearity") {
  HomogeneousFunction g = InverseSquare();
  HomogeneousFunction h = MetricPower(Randers(Vec3(0.2, 0.1, 0)));
  double alpha = 1.7, beta = -0.4;
  HomogeneousFunction combo;
  combo.degree = -2.0;
  combo.eval = [&, alpha, beta](const Vec3& y) {
    return alpha * g.eval(y) + beta * h.eval(y);
  };
  SplitMix64 rng(202);
  for (int i = 0; i < 25; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    double lhs = Transform(combo, z, 128);
    double rhs = alpha * Transform(g, z, 128) + beta * Transform(h, z, 128);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("output is (-1)-homogeneous") {
  HomogeneousFunction g = MetricPower(Randers(Vec3(0.25, -0.15, 0.1)));
  SplitMix64 rng(203);
  for (int i = 0; i < 25; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    double r = Transform(g, z, 128);
    for (double t : {0.5, 2.0}) {
      CHECK(std::abs(Transform(g, t * z, 128) * t - r) <= 1e-12 * std::abs(r));
    }
  }
}

TEST_CASE("basis independence") {
  HomogeneousFunction g = MetricPower(Randers(Vec3(0.2, 0.25, -0.1)));
  SplitMix64 rng(204);
  for (int i = 0; i < 25; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    Vec3 f1, f2;
    std::string err;
    REQUIRE(OrthonormalBasis(z.normalized(), &f1, &f2, &err));
    double ang = rng.NextInRange(0.0, 2.0 * M_PI);
    Vec3 g1 = std::cos(ang) * f1 + std::sin(ang) * f2;
    Vec3 g2 = -std::sin(ang) * f1 + std::cos(ang) * f2;
    double a, b2;
    REQUIRE(RadonTransformWithBasis(g, z, f1, f2, 256, &a, &err));
    REQUIRE(RadonTransformWithBasis(g, z, g1, g2, 256, &b2, &err));
    CHECK(std::abs(a - b2) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("rotation equivariance") {
  // Rotations are the orthogonal slice of the unimodular invariance: the
  // transform of a rotated integrand is the rotated transform.
  HomogeneousFunction g = MetricPower(Randers(Vec3(0.2, 0.1, -0.25)));
  SplitMix64 rng(205);
  for (int i = 0; i < 10; ++i) {
    Mat3 rot = RandomRotation(&rng);
    HomogeneousFunction gr;
    gr.degree = g.degree;
    gr.eval = [&g, rot](const Vec3& y) { return g.eval(rot * y); };
    for (int j = 0; j < 5; ++j) {
      Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
      double lhs = Transform(g, rot * z, 256);
      double rhs = Transform(gr, z, 256);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("reciprocity against the area integrand") {
  MetricSpec spec = Randers(Vec3(0.3, 0, 0));
  CartanIntegrand ci;
  std::string err;
  REQUIRE(MakeCartanIntegrand(spec, 256, &ci, &err, /*use_closed_form=*/false));
  HomogeneousFunction g = MetricPower(spec);
  SplitMix64 rng(206);
  for (int i = 0; i < 50; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    double area;
    REQUIRE(AreaIntegrand(ci, Vec3::Zero(), z, &area, &err));
    double r = Transform(g, z, 256);
    CHECK(std::abs(area * r - 1.0) <= 1e-12);
    // And through the dedicated reciprocal evaluator.
    double via;
    REQUIRE(CartanViaRadon(spec, Vec3::Zero(), z, 256, &via, &err));
    CHECK(via == doctest::Approx(area).epsilon(1e-12));
  }
}

TEST_CASE("first-order differentiation rule") {
  HomogeneousFunction g = MetricPower(Randers(Vec3(0.3, 0, 0)));
  SplitMix64 rng(207);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    int tau = static_cast<int>(rng.Next() % 3);
    int sigma = static_cast<int>(rng.Next() % 3);
    DiffRuleReport report;
    std::string err;
    REQUIRE_MESSAGE(VerifyDiffRule(g, z, tau, sigma, 256, &report, &err), err);
    worst = std::max(worst, report.residual);
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("singular integrand is rejected with the node named") {
  // A drift of norm > 1 makes the metric non-positive along a cone.  The
  // evaluator reports that domain failure as NaN and the transform refuses,
  // naming the offending quadrature node.
  MetricSpec bad = Randers(Vec3(1.2, 0, 0));
  HomogeneousFunction g;
  int m = bad.m;
  g.eval = [bad, m](const Vec3& y) {
    double f = EvalMetricFast(bad, Vec3::Zero(), y);
    if (!(f > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(f, -m);
  };
  g.degree = -m;
  double r;
  std::string err;
  CHECK_FALSE(RadonTransform(g, Vec3(0, 0, 1), 128, &r, &err));
  CHECK(err.find("node") != std::string::npos);

  // The area quadrature applies the positivity guard itself.
  CartanIntegrand ci;
  REQUIRE(MakeCartanIntegrand(bad, 128, &ci, &err, false));
  double a;
  CHECK_FALSE(AreaIntegrand(ci, Vec3::Zero(), Vec3(0, 0, 1), &a, &err));
  CHECK(err.find("node") != std::string::npos);
}

TEST_CASE("seminorm probe reports finite ratios") {
  HomogeneousFunction g = MetricPower(Randers(Vec3(0.3, 0, 0)));
  SeminormProbe probe;
  std::string err;
  REQUIRE(SeminormBoundProbe(g, 1, 200, 128, &probe, &err));
  CHECK(probe.rho_integrand > 0.0);
  CHECK(probe.rho_transform > 0.0);
  CHECK(std::isfinite(probe.ratio));
  CHECK(probe.k == 1);
}
