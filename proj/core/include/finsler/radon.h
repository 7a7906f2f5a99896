#pragma once

#include "finsler/cartan.h"
#include "finsler/metric.h"
#include "finsler/types.h"

#include <functional>
#include <string>

namespace finsler {

// A homogeneous integrand on R^3 \ {0}: evaluator, homogeneity degree, and a
// smoothness hint (continuous derivative count) used only for reporting.
struct HomogeneousFunction {
  std::function<double(const Vec3&)> eval;
  double degree = -2.0;
  int smoothness = 2;
};

// Extended spherical Radon transform, normalized to be (-1)-homogeneous:
//   R[g](Z) = (1 / (2*pi*|Z|)) * Integral over the unit circle of the plane
//             orthogonal to Z of g.
// Equally spaced nodes (trapezoid rule on a periodic integrand); singular
// integrands are rejected via non-finite node detection; summation uses a
// fixed-order compensated accumulator.
bool RadonTransform(const HomogeneousFunction& g, const Vec3& z, int quad_n,
                    double* out, std::string* error);

// Same, with a caller-supplied orthonormal basis of the plane orthogonal to Z
// (basis-independence checks).
bool RadonTransformWithBasis(const HomogeneousFunction& g, const Vec3& z,
                             const Vec3& f1, const Vec3& f2, int quad_n,
                             double* out, std::string* error);

// Area integrand via the reciprocity A(x,Z) = 1 / R[F(x,.)^-m](Z).
bool CartanViaRadon(const MetricSpec& metric, const Vec3& x, const Vec3& z,
                    int quad_n, double* out, std::string* error);

struct DiffRuleReport {
  double lhs = 0.0;       // Z_tau * d/dZ_sigma R[g](Z), central differences
  double rhs = 0.0;       // -R[y -> d/dy_tau (y_sigma g)](Z)
  double residual = 0.0;  // |lhs - rhs|
};

// First-order differentiation rule of the extended transform:
//   Z_tau d/dZ_sigma R[g](Z) = -R[d/dy_tau (y_sigma g)](Z).
// The left side differentiates the transform by central differences; the
// right side evaluates d/dy_tau(y_sigma g) = delta_{tau,sigma} g + y_sigma
// d/dy_tau g at the quadrature nodes (central differences for dg).  Only the
// first-order rule is supported.
bool VerifyDiffRule(const HomogeneousFunction& g, const Vec3& z, int tau,
                    int sigma, int quad_n, DiffRuleReport* out,
                    std::string* error);

struct SeminormProbe {
  double rho_transform = 0.0;  // rho_k(R[g]) on the sphere
  double rho_integrand = 0.0;  // rho_k(g)
  double ratio = 0.0;          // rho_transform / rho_integrand
  int k = 1;
};

// Measures the seminorm of g and of its transform and reports the ratio; no
// universal constant is asserted (the ratio is scale-invariant: g -> c*g
// leaves it unchanged).
bool SeminormBoundProbe(const HomogeneousFunction& g, int k, int sample_count,
                        int quad_n, SeminormProbe* out, std::string* error);

}  // namespace finsler
