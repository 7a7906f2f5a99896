#pragma once

#include "finsler/metric.h"
#include "finsler/sampling.h"
#include "finsler/types.h"

#include <functional>
#include <string>
#include <vector>

namespace finsler {

// Busemann-Hausdorff area integrand of a metric, evaluated by spherical
// quadrature: for a surface normal Z and base point x,
//   A(x,Z) = |Z| * 2*pi / Integral_{S^1} F(x, cos t * f1 + sin t * f2)^-m dt,
// with {f1,f2} an orthonormal basis of the plane orthogonal to Z.  The value
// is basis-independent; quadrature uses equally spaced nodes (spectrally
// accurate for smooth metrics).  Only m = 2 (surfaces in R^3) is supported.
struct CartanIntegrand {
  MetricSpec metric;
  int quad_n = 256;
  // Exact closed forms exist for the euclidean and Randers families
  // (A = |Z| (1 - c^2)^(3/2) with c^2 = |b|^2 - (b.Z/|Z|)^2); when enabled
  // they replace the quadrature on those families.  Cross-validated against
  // the quadrature path in tests.
  bool use_closed_form = true;
  CircleNodes nodes;
};

// Builds the integrand evaluator; quad_n >= 16 (default 256) and metric.m == 2
// are enforced.
bool MakeCartanIntegrand(const MetricSpec& metric, int quad_n,
                         CartanIntegrand* out, std::string* error,
                         bool use_closed_form = true);

bool HasClosedForm(const MetricSpec& metric);

// A(x,Z).  Fails for Z = 0 and when the metric vanishes, changes sign, or is
// singular on the plane orthogonal to Z.
bool AreaIntegrand(const CartanIntegrand& ci, const Vec3& x, const Vec3& z,
                   double* out, std::string* error);

// Unchecked variant: NaN propagates instead of error strings.
double AreaIntegrandFast(const CartanIntegrand& ci, const Vec3& x, const Vec3& z);

// Quadrature with a caller-supplied orthonormal basis of the plane orthogonal
// to Z (basis-independence checks).
bool AreaIntegrandWithBasis(const CartanIntegrand& ci, const Vec3& x,
                            const Vec3& z, const Vec3& f1, const Vec3& f2,
                            double* out, std::string* error);

// Area integrand of an arbitrary positive evaluator y -> G(y) (degree-1
// homogeneous); used to compare the integrands of F and derived metrics.
bool AreaIntegrandOfCallable(const std::function<double(const Vec3&)>& g, int m,
                             const CircleNodes& nodes, const Vec3& z,
                             double* out, std::string* error);

// Gradient and Hessian of A(x,.) in Z.  Central finite differences on the
// quadrature path; the closed-form path uses the analytic gradient and
// differentiates it once numerically for the Hessian.  Hess*Z = 0 up to
// discretization (degree-0 homogeneity of the gradient).
bool AreaIntegrandDerivs(const CartanIntegrand& ci, const Vec3& x, const Vec3& z,
                         double* value, Vec3* grad, Mat3* hess,
                         std::string* error);

// Gradient of A in the base point x (zero for x-independent metrics);
// central finite differences.
bool AreaIntegrandXGradient(const CartanIntegrand& ci, const Vec3& x,
                            const Vec3& z, Vec3* grad, std::string* error);

// ---------------------------------------------------------------------------
// Growth bounds and scans.

struct GrowthBounds {
  double c1 = 0.0;  // min of F over sampled unit directions (and x-grid)
  double c2 = 0.0;  // max of F
  double m1 = 0.0;  // c1^m
  double m2 = 0.0;  // c2^m
  int sample_count = 0;
  // Probe of the sandwich m1*|Z| <= A(x,Z) <= m2*|Z| on a direction sample.
  bool sandwich_ok = false;
  double worst_lower_margin = 0.0;  // min of A/|Z| - m1 over probes
  double worst_upper_margin = 0.0;  // min of m2 - A/|Z| over probes
};

// Defaults: 500 directions minimum; metrics with x-dependence are sampled on
// a 5^3 grid over [-1,1]^3 unless x_grid is supplied.  Fails when the sampled
// minimum c1 is nonpositive (not a Finsler metric).
bool ComputeGrowthBounds(const CartanIntegrand& ci, int sample_count,
                         GrowthBounds* out, std::string* error,
                         const std::vector<Vec3>* x_grid = nullptr);

// Default x-grid used by scans for x-dependent metrics: 5^3 over [-1,1]^3;
// the single point 0 otherwise.
std::vector<Vec3> DefaultXGrid(const MetricSpec& metric);

struct SymmetrizationIdentityReport {
  double max_rel_error = 0.0;
  Vec3 argmax_z = Vec3::Zero();
  int sample_count = 0;
};

// Verifies that the metric and its m-harmonic symmetrization generate the
// same area integrand on random (x,Z) samples; reports the worst relative
// error.
bool CheckSymmetrizationIdentity(const CartanIntegrand& ci, int sample_count,
                                 std::uint64_t seed,
                                 SymmetrizationIdentityReport* out,
                                 std::string* error);

struct EllipticityReport {
  double lambda_min = 0.0;   // min tangential Hessian eigenvalue, |Z| = 1
  Vec3 argmin_z = Vec3::Zero();
  Vec3 argmin_x = Vec3::Zero();
  int sample_count = 0;
  double tolerance = 1e-6;
  bool refined = false;      // pattern-search refinement applied
  bool verdict = false;      // lambda_min >= -tolerance
};

// Scans the smallest eigenvalue of the area-integrand Hessian restricted to
// the plane orthogonal to Z (scaled by |Z|; evaluated at |Z| = 1) over a
// Fibonacci direction sample, then refines the minimizer with a deterministic
// local pattern search so the reported minimum is not biased by the lattice
// spacing.  lambda_min is a sampled estimate; sample_count is reported.
bool EllipticityScan(const CartanIntegrand& ci, int sample_count,
                     EllipticityReport* out, std::string* error,
                     double tolerance = 1e-6,
                     const std::vector<Vec3>* x_grid = nullptr,
                     bool refine = true);

// Sampled sup of |D^alpha g| over the unit sphere for all |alpha| <= k.
// Derivatives are taken by central differences of the ambient extension.
// Only k <= 2 is supported; larger k is an error.
bool RhoK(const std::function<double(const Vec3&)>& g, int k, int sample_count,
          double* out, std::string* error, std::uint64_t seed = 0);

struct DominanceReport {
  double delta = 0.0;        // sup_x rho_2(A(x,.) - |.|)
  bool pass_corollary = false;   // delta < 1/5
  double k0 = 0.0;           // 2*(m2* - min(lambda*, m1*/2)) of the shifted integrand
  double m1_star = 0.0;
  double m2_star = 0.0;
  double lambda_star = 0.0;
  double delta0 = 0.1;       // configured smallness threshold for F itself
  double delta0_sup = 0.0;   // sup_x rho_2(F(x,.) - |.|)
  bool delta0_pass = false;
  int sample_count = 0;
};

// Distance of the area integrand from the euclidean one in the C^2 seminorm,
// with the induced smallness constant k0 of the rescaled shifted integrand
// R*A - |.| at R = (1 + 1e-6)/(1 - delta).  The restriction of the euclidean
// Hessian to the tangent plane is the identity at |Z| = 1, so tangential
// eigenvalues shift affinely and lambda* = R*lambda_min - 1 exactly.
bool DominanceFeasibility(const CartanIntegrand& ci, DominanceReport* out,
                          std::string* error, int rho_samples = 1000,
                          int scan_samples = 500, double delta0 = 0.1,
                          const std::vector<Vec3>* x_grid = nullptr);

}  // namespace finsler
