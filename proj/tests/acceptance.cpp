// Acceptance gate: one line per criterion, process exit code = number of
// failures.  Each criterion is self-contained and prints its own timing.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "finsler/cartan.h"
#include "finsler/curve.h"
#include "finsler/gacheck.h"
#include "finsler/mesh.h"
#include "finsler/metric.h"
#include "finsler/plateau.h"
#include "finsler/radon.h"
#include "finsler/sampling.h"

using namespace finsler;

namespace {

MetricSpec Euclid() {
  MetricSpec s;
  s.family = MetricFamily::kEuclidean;
  return s;
}

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

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------

bool QuadratureMatchesClosedForm(std::string* detail) {
  SplitMix64 rng(9001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vec3 b = RandomUnitVector(&rng) * rng.NextInRange(0.0, 0.9);
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.1, 5.0);
    CartanIntegrand quad;
    std::string err;
    if (!MakeCartanIntegrand(Randers(b), 256, &quad, &err, false)) {
      *detail = err;
      return false;
    }
    double a_quad;
    if (!AreaIntegrand(quad, Vec3::Zero(), z, &a_quad, &err)) {
      *detail = err;
      return false;
    }
    double zn = z.norm();
    double c2 = b.squaredNorm() - std::pow(b.dot(z) / zn, 2);
    double a_exact = zn * std::pow(1.0 - c2, 1.5);
    worst = std::max(worst, std::abs(a_quad - a_exact) / a_exact);
  }
  *detail = Fmt("worst relative error %.3e over 1000 samples", worst);
  return worst <= 1e-9;
}

bool SymmetrizationSharesTheIntegrand(std::string* detail) {
  double worst = 0.0;
  for (const MetricSpec& spec :
       {Randers(Vec3(0.3, 0, 0)), AlphaBeta(PhiFamily::kMatsumoto, 0.4)}) {
    CartanIntegrand ci;
    SymmetrizationIdentityReport rep;
    std::string err;
    if (!MakeCartanIntegrand(spec, 256, &ci, &err, false) ||
        !CheckSymmetrizationIdentity(ci, 200, 17, &rep, &err)) {
      *detail = err;
      return false;
    }
    worst = std::max(worst, rep.max_rel_error);
  }
  *detail = Fmt("worst relative error %.3e over 2x200 samples", worst);
  return worst <= 1e-8;
}

bool ThresholdsMatchTheKnownCriticalDrifts(std::string* detail) {
  struct Case {
    PhiFamily family;
    double lo, hi, target;
  };
  const Case cases[] = {
      {PhiFamily::kRanders, 0.4, 0.8, 1.0 / std::sqrt(3.0)},
      {PhiFamily::kTwoOrder, 0.2, 0.45, 1.0 / std::sqrt(10.0)},
      {PhiFamily::kMatsumoto, 0.35, 0.65, 0.5},
  };
  std::string found;
  for (const Case& c : cases) {
    ThresholdResult result;
    std::string err;
    if (!ThresholdScan(c.family, c.lo, c.hi, 0.002, &result, &err, 13, 500)) {
      *detail = err;
      return false;
    }
    double gap = std::abs(result.critical_b - c.target);
    found += Fmt("%.5f(target %.5f) ", result.critical_b, c.target);
    if (gap > 0.005 || !result.monotone) {
      *detail = found + "-- out of tolerance";
      return false;
    }
  }
  *detail = found;
  return true;
}

bool SufficientImpliesDirect(std::string* detail) {
  SplitMix64 rng(9004);
  int checked = 0, violations = 0;
  for (int i = 0; i < 500; ++i) {
    MetricSpec spec;
    switch (rng.Next() % 3) {
      case 0:
        spec = Randers(RandomUnitVector(&rng) * rng.NextInRange(0.0, 0.95));
        break;
      case 1:
        spec = AlphaBeta(PhiFamily::kTwoOrder, rng.NextInRange(0.0, 0.6));
        break;
      default:
        spec = AlphaBeta(PhiFamily::kMatsumoto, rng.NextInRange(0.0, 0.45));
        break;
    }
    GAReport report;
    std::string err;
    if (!CheckGa(spec, &report, &err, 300, 200)) continue;
    ++checked;
    if (report.sufficient.holds && !report.direct.holds) ++violations;
  }
  *detail = Fmt("%g violations over %g evaluable configurations",
                static_cast<double>(violations), static_cast<double>(checked));
  return violations == 0 && checked >= 450;
}

bool BinomialGapStaysNonnegative(std::string* detail) {
  std::string err;
  long long num, den;
  if (!OddEvenBinomialGapRational(2, 1, 2, &num, &den, &err) || num != 3 ||
      den != 4) {
    *detail = "exact value at a=1/2, m=2 is not 3/4";
    return false;
  }
  if (!OddEvenBinomialGapRational(3, 1, 2, &num, &den, &err) || num != 3 ||
      den != 2) {
    *detail = "exact value at a=1/2, m=3 is not 3/2";
    return false;
  }
  double worst = 0.0;
  for (int m = 1; m <= 12; ++m) {
    double limit = OddEvenBinomialGapAdmissibleLimit(m);
    for (int i = 1; i < 200; ++i) {
      double a = limit * i / 200.0;
      double f;
      if (!OddEvenBinomialGap(a, m, &f, &err)) {
        *detail = err;
        return false;
      }
      worst = std::min(worst, f);
    }
  }
  *detail = Fmt("grid minimum %.3e over m=1..12", worst);
  return worst >= -1e-12;
}

bool RadonIdentitiesHold(std::string* detail) {
  SplitMix64 rng(9006);
  std::string err;

  HomogeneousFunction inv2;
  inv2.eval = [](const Vec3& y) { return 1.0 / y.squaredNorm(); };
  inv2.degree = -2.0;
  double worst_inv = 0.0;
  for (int i = 0; i < 50; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.25, 4.0);
    double r;
    if (!RadonTransform(inv2, z, 64, &r, &err)) {
      *detail = err;
      return false;
    }
    worst_inv = std::max(worst_inv, std::abs(r - 1.0 / z.norm()));
  }

  MetricSpec spec = Randers(Vec3(0.3, 0, 0));
  HomogeneousFunction power;
  int m = spec.m;
  power.eval = [spec, m](const Vec3& y) {
    return std::pow(EvalMetricFast(spec, Vec3::Zero(), y), -m);
  };
  power.degree = -m;

  CartanIntegrand quad;
  if (!MakeCartanIntegrand(spec, 256, &quad, &err, false)) {
    *detail = err;
    return false;
  }
  double worst_rec = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.25, 4.0);
    double r, a;
    if (!RadonTransform(power, z, 256, &r, &err) ||
        !AreaIntegrand(quad, Vec3::Zero(), z, &a, &err)) {
      *detail = err;
      return false;
    }
    worst_rec = std::max(worst_rec, std::abs(a * r - 1.0));
  }

  double worst_diff = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.5, 2.0);
    DiffRuleReport rep;
    if (!VerifyDiffRule(power, z, i % 3, (i / 3) % 3, 256, &rep, &err)) {
      *detail = err;
      return false;
    }
    worst_diff = std::max(worst_diff, rep.residual);
  }

  *detail = Fmt("inverse-square %.2e, reciprocity %.2e, derivative rule %.2e",
                worst_inv, worst_rec, worst_diff);
  return worst_inv <= 1e-12 && worst_rec <= 1e-12 && worst_diff <= 1e-5;
}

bool EuclideanDiskSolve(std::string* detail) {
  SolveConfig config;
  config.rings = 16;
  SolveResult result;
  std::string err;
  if (!SolvePlateau(Euclid(), MakeCircleCurve(), config, &result, &err)) {
    *detail = err;
    return false;
  }
  double area_gap = std::abs(result.finsler_area - M_PI) / M_PI;
  double l2 = result.finsler_boundary_length * result.finsler_boundary_length;
  double iso_slack = std::abs(4.0 * M_PI * result.finsler_area - l2) / l2;
  *detail = Fmt("area gap %.2e, conformality %.2e, flat-limit slack %.2e",
                area_gap, result.conformality_defect, iso_slack);
  return result.converged && area_gap <= 0.01 &&
         result.conformality_defect <= 1e-3 && iso_slack <= 0.02;
}

bool RandersDiskSolve(std::string* detail) {
  SolveConfig config;
  config.rings = 16;
  SolveResult result;
  std::string err;
  if (!SolvePlateau(Randers(Vec3(0.3, 0, 0)), MakeCircleCurve(), config,
                    &result, &err)) {
    *detail = err;
    return false;
  }
  double upper = 1.015 * M_PI * std::pow(0.91, 1.5);
  double lower = result.bounds.m1 * result.euclidean_area;
  *detail = Fmt("area %.6f in [%.6f, %.6f]", result.finsler_area, lower, upper);
  return result.converged && result.finsler_area <= upper &&
         result.finsler_area >= lower - 1e-9 && result.isoperimetric_ok;
}

bool ConvexityFlipIsBracketed(std::string* detail) {
  auto lambda_min = [](double b, double* out, std::string* err) {
    CartanIntegrand ci;
    EllipticityReport rep;
    if (!MakeCartanIntegrand(Randers(Vec3(b, 0, 0)), 64, &ci, err, true) ||
        !EllipticityScan(ci, 2000, &rep, err)) {
      return false;
    }
    *out = rep.lambda_min;
    return true;
  };
  std::string err;
  double at_03, at_09;
  if (!lambda_min(0.3, &at_03, &err) || !lambda_min(0.9, &at_09, &err)) {
    *detail = err;
    return false;
  }
  double lo = 0.3, hi = 0.9;
  while (hi - lo > 0.005) {
    double mid = 0.5 * (lo + hi);
    double lm;
    if (!lambda_min(mid, &lm, &err)) {
      *detail = err;
      return false;
    }
    (lm > 0 ? lo : hi) = mid;
  }
  *detail = Fmt("minimum eigenvalue %.3f at drift 0.3, %.3f at 0.9; "
                "flip in [%.4f, ",
                at_03, at_09, lo) +
            Fmt("%.4f]", hi);
  return at_03 > 0 && at_09 < 0 && lo >= 0.55 && hi <= 0.61;
}

bool PropertySuitesHold(std::string* detail) {
  SplitMix64 rng(9010);
  std::string err;

  // Positive homogeneity and the gradient identity grad F . y = F.
  for (const MetricSpec& spec :
       {Randers(Vec3(0.25, -0.1, 0.05)), AlphaBeta(PhiFamily::kMatsumoto, 0.3)}) {
    for (int i = 0; i < 50; ++i) {
      Vec3 y = RandomUnitVector(&rng) * rng.NextInRange(0.2, 3.0);
      double f, ft;
      if (!EvalMetric(spec, Vec3::Zero(), y, &f, &err) ||
          !EvalMetric(spec, Vec3::Zero(), 2.0 * y, &ft, &err)) {
        *detail = err;
        return false;
      }
      if (std::abs(ft - 2.0 * f) > 1e-10 * f) {
        *detail = "homogeneity residual above 1e-10";
        return false;
      }
      Vec3 grad;
      Mat3 hess;
      if (!MetricGradHess(spec, Vec3::Zero(), y, &grad, &hess, &err)) {
        *detail = err;
        return false;
      }
      if (std::abs(grad.dot(y) - f) > 1e-9 * std::max(1.0, f)) {
        *detail = "gradient identity residual above 1e-9";
        return false;
      }
    }
  }

  // Area integrand: homogeneity in Z and independence of the in-plane basis.
  CartanIntegrand ci;
  if (!MakeCartanIntegrand(Randers(Vec3(0.2, 0.1, -0.1)), 128, &ci, &err,
                           false)) {
    *detail = err;
    return false;
  }
  for (int i = 0; i < 25; ++i) {
    Vec3 z = RandomUnitVector(&rng) * rng.NextInRange(0.3, 3.0);
    double a, a2, ar;
    if (!AreaIntegrand(ci, Vec3::Zero(), z, &a, &err) ||
        !AreaIntegrand(ci, Vec3::Zero(), 2.0 * z, &a2, &err)) {
      *detail = err;
      return false;
    }
    if (std::abs(a2 - 2.0 * a) > 1e-9 * a) {
      *detail = "area homogeneity residual above 1e-9";
      return false;
    }
    Vec3 f1, f2;
    if (!OrthonormalBasis(z, &f1, &f2, &err)) {
      *detail = err;
      return false;
    }
    double angle = rng.NextInRange(0.0, 6.28);
    Vec3 g1 = std::cos(angle) * f1 + std::sin(angle) * f2;
    Vec3 g2 = -std::sin(angle) * f1 + std::cos(angle) * f2;
    if (!AreaIntegrandWithBasis(ci, Vec3::Zero(), z, g1, g2, &ar, &err)) {
      *detail = err;
      return false;
    }
    if (std::abs(ar - a) > 1e-12 * std::max(1.0, a)) {
      *detail = "area depends on the in-plane basis";
      return false;
    }
  }

  // Growth sandwich for a healthy drift metric.
  GrowthBounds bounds;
  if (!ComputeGrowthBounds(ci, 500, &bounds, &err)) {
    *detail = err;
    return false;
  }
  if (!bounds.sandwich_ok) {
    *detail = "growth sandwich probe failed";
    return false;
  }

  // Mesh identity: vertices - edges + faces = 1 on the disk.
  DiskMesh mesh;
  if (!GenerateDiskMesh(5, &mesh, &err) || EulerCharacteristic(mesh) != 1) {
    *detail = "disk mesh characteristic is not 1";
    return false;
  }

  // Descent monotonicity on a genuinely curved solve.
  BoundaryCurve helix;
  if (!MakeHelicalArcCurve(1.0, 0.4, &helix, &err)) {
    *detail = err;
    return false;
  }
  SolveConfig config;
  config.rings = 3;
  config.quad_n = 64;
  config.eps_schedule = {0.5};
  config.max_iterations_per_stage = 25;
  std::vector<double> energies;
  config.observer = [&energies](const SolveConfig::IterationInfo& info) {
    energies.push_back(info.energy);
  };
  SolveResult result;
  if (!SolvePlateau(Randers(Vec3(0.2, 0, 0.1)), helix, config, &result, &err)) {
    *detail = err;
    return false;
  }
  for (std::size_t k = 1; k < energies.size(); ++k) {
    if (energies[k] > energies[k - 1] + 1e-12) {
      *detail = "descent produced an energy increase";
      return false;
    }
  }
  if (energies.size() < 3) {
    *detail = "descent made too few steps to measure";
    return false;
  }

  // Energy gradient against central finite differences.
  PlateauProblem problem;
  CartanIntegrand pci;
  if (!MakeCartanIntegrand(Randers(Vec3(0.2, 0.1, 0.15)), 64, &pci, &err,
                           false) ||
      !PlateauProblem::Create(pci, helix, 2, 0.05, &problem, &err)) {
    *detail = err;
    return false;
  }
  std::vector<double> dof;
  problem.PackDof(&dof);
  for (double& d : dof) d += 0.004 * rng.NextInRange(-1, 1);
  problem.ProjectBoundaryDof(&dof);
  double energy;
  std::vector<double> grad;
  bool valid;
  if (!problem.EnergyAndGradient(dof, &energy, &grad, &valid, &err) || !valid) {
    *detail = "gradient evaluation failed";
    return false;
  }
  double worst_fd = 0.0;
  for (std::size_t d = 0; d < dof.size(); d += 2) {
    double h = 1e-6 * std::max(1.0, std::abs(dof[d]));
    auto up = dof, dn = dof;
    up[d] += h;
    dn[d] -= h;
    double eu, ed;
    bool vu, vd;
    if (!problem.Energy(up, &eu, &vu, &err) ||
        !problem.Energy(dn, &ed, &vd, &err) || !vu || !vd) {
      *detail = "finite-difference evaluation failed";
      return false;
    }
    double fd = (eu - ed) / (2 * h);
    worst_fd = std::max(worst_fd,
                        std::abs(grad[d] - fd) / std::max(1.0, std::abs(fd)));
  }
  if (worst_fd > 1e-5) {
    *detail = Fmt("gradient/finite-difference mismatch %.3e", worst_fd);
    return false;
  }

  *detail = Fmt("gradient check worst %.2e; %g descent steps monotone",
                worst_fd, static_cast<double>(energies.size()));
  return true;
}

// ---------------------------------------------------------------------------

int failures = 0;

void Run(int id, const char* label, const std::function<bool(std::string*)>& fn) {
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = fn(&detail);
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("[%s] %2d. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", id, label,
              seconds, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

}  // namespace

int main() {
  Run(1, "quadrature area matches the drift-shift closed form",
      QuadratureMatchesClosedForm);
  Run(2, "harmonic symmetrization shares the area integrand",
      SymmetrizationSharesTheIntegrand);
  Run(3, "threshold scans reproduce the known critical drifts",
      ThresholdsMatchTheKnownCriticalDrifts);
  Run(4, "sufficient convexity criterion implies the direct check",
      SufficientImpliesDirect);
  Run(5, "odd-even binomial gap is nonnegative on admissible grids",
      BinomialGapStaysNonnegative);
  Run(6, "transform identities: inverse-square, reciprocity, derivative rule",
      RadonIdentitiesHold);
  Run(7, "euclidean disk solve recovers the flat disk", EuclideanDiskSolve);
  Run(8, "drift-shift disk solve respects the closed-form and sandwich bounds",
      RandersDiskSolve);
  Run(9, "convexity loss is bracketed near the known critical drift",
      ConvexityFlipIsBracketed);
  Run(10, "cross-module invariant suite", PropertySuitesHold);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
