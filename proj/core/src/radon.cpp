#include "finsler/radon.h"

#include <cmath>
#include <limits>

namespace finsler {

bool RadonTransformWithBasis(const HomogeneousFunction& g, const Vec3& z,
                             const Vec3& f1, const Vec3& f2, int quad_n,
                             double* out, std::string* error) {
  double zn = z.norm();
  if (!(zn > 0.0)) {
    if (error) *error = "radon transform is undefined at Z = 0";
    return false;
  }
  if (quad_n < 16) {
    if (error) {
      *error = "quadrature order must be >= 16, got " + std::to_string(quad_n);
    }
    return false;
  }
  if (!g.eval) {
    if (error) *error = "radon transform requires an evaluator";
    return false;
  }
  CircleNodes nodes = MakeCircleNodes(quad_n);
  KahanSum sum;
  for (int j = 0; j < quad_n; ++j) {
    Vec3 y = nodes.cosines[static_cast<std::size_t>(j)] * f1 +
             nodes.sines[static_cast<std::size_t>(j)] * f2;
    double v = g.eval(y);
    if (!std::isfinite(v)) {
      if (error) {
        *error = "integrand is singular on the great circle orthogonal to Z "
                 "(quadrature node " + std::to_string(j) + ")";
      }
      return false;
    }
    sum.Add(v);
  }
  // Node average equals the 1/(2*pi) normalized circle integral.
  *out = sum.Value() / (static_cast<double>(quad_n) * zn);
  return true;
}

bool RadonTransform(const HomogeneousFunction& g, const Vec3& z, int quad_n,
                    double* out, std::string* error) {
  Vec3 f1, f2;
  if (!OrthonormalBasis(z, &f1, &f2, error)) {
    if (error && z.norm() == 0.0) *error = "radon transform is undefined at Z = 0";
    return false;
  }
  return RadonTransformWithBasis(g, z, f1, f2, quad_n, out, error);
}

bool CartanViaRadon(const MetricSpec& metric, const Vec3& x, const Vec3& z,
                    int quad_n, double* out, std::string* error) {
  HomogeneousFunction g;
  double m = static_cast<double>(metric.m);
  g.eval = [&metric, &x, m](const Vec3& y) {
    double f = EvalMetricFast(metric, x, y);
    if (!(f > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(f, -m);
  };
  g.degree = -m;
  double r;
  if (!RadonTransform(g, z, quad_n, &r, error)) return false;
  if (!(r > 0.0)) {
    if (error) *error = "radon transform of the metric integrand is nonpositive";
    return false;
  }
  *out = 1.0 / r;
  return true;
}

bool VerifyDiffRule(const HomogeneousFunction& g, const Vec3& z, int tau,
                    int sigma, int quad_n, DiffRuleReport* out,
                    std::string* error) {
  if (tau < 0 || tau > 2 || sigma < 0 || sigma > 2) {
    if (error) *error = "component indices must be in {0,1,2}";
    return false;
  }
  // Left side: Z_tau * d/dZ_sigma R[g] by central differences.
  double h = FdStepGradient(z);
  Vec3 e = Vec3::Zero();
  e[sigma] = h;
  double rp, rm;
  if (!RadonTransform(g, z + e, quad_n, &rp, error)) return false;
  if (!RadonTransform(g, z - e, quad_n, &rm, error)) return false;
  out->lhs = z[tau] * (rp - rm) / (2.0 * h);

  // Right side: -R[y -> d/dy_tau (y_sigma g)](Z) with the derivative of g
  // taken by central differences at the nodes.
  HomogeneousFunction hg;
  hg.degree = g.degree;  // d/dy_tau(y_sigma g) has the same degree as g
  hg.eval = [&g, tau, sigma](const Vec3& y) {
    double hh = FdStepGradient(y);
    Vec3 et = Vec3::Zero();
    et[tau] = hh;
    double dg = (g.eval(y + et) - g.eval(y - et)) / (2.0 * hh);
    double base = (tau == sigma) ? g.eval(y) : 0.0;
    return base + y[sigma] * dg;
  };
  double rhs_raw;
  if (!RadonTransform(hg, z, quad_n, &rhs_raw, error)) return false;
  out->rhs = -rhs_raw;
  out->residual = std::abs(out->lhs - out->rhs);
  return true;
}

bool SeminormBoundProbe(const HomogeneousFunction& g, int k, int sample_count,
                        int quad_n, SeminormProbe* out, std::string* error) {
  out->k = k;
  if (!RhoK(g.eval, k, sample_count, &out->rho_integrand, error)) return false;
  auto transform = [&](const Vec3& z) {
    double r;
    std::string err;
    if (!RadonTransform(g, z, quad_n, &r, &err)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return r;
  };
  if (!RhoK(transform, k, sample_count, &out->rho_transform, error)) return false;
  if (!(out->rho_integrand > 0.0)) {
    if (error) *error = "integrand seminorm vanishes; ratio undefined";
    return false;
  }
  out->ratio = out->rho_transform / out->rho_integrand;
  return true;
}

}  // namespace finsler
