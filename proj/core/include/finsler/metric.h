#pragma once

#include "finsler/types.h"

#include <functional>
#include <string>
#include <vector>

namespace finsler {

// Built-in metric families on R^3.  All are positively 1-homogeneous in y;
// "composite" is the reversible perturbed-quartic base plus a smooth linear
// drift term b(x).y, the only x-dependent family.
enum class MetricFamily {
  kEuclidean,         // |y|
  kRanders,           // |y| + b.y
  kAlphaBeta,         // |y| * phi(b.y/|y|)
  kPerturbedQuartic,  // sqrt(sqrt(sum y_i^4) + epsilon*|y|^2)
  kComposite,         // perturbed quartic + b(x).y
};

// phi families for the alpha-beta construction F = alpha*phi(beta/alpha).
enum class PhiFamily {
  kRanders,            // 1 + s
  kTwoOrder,           // (1 + s)^2
  kMatsumoto,          // 1/(1 - s), pole at s = 1
  kPolynomial,         // sum_k c_k s^k
  kOddReciprocalRoot,  // (1 + h(s))^(-1/m), h odd: h(s) = c_0 s + c_1 s^3 + ...
};

struct MetricSpec {
  MetricFamily family = MetricFamily::kEuclidean;
  PhiFamily phi = PhiFamily::kRanders;   // used by kAlphaBeta only
  std::vector<double> phi_coeffs;        // kPolynomial / kOddReciprocalRoot
  Vec3 b = Vec3::Zero();                 // drift vector (mean drift for kComposite)
  double epsilon = 0.1;                  // quartic regularization weight
  Vec3 drift_amp = Vec3::Zero();         // kComposite: b(x) = b + amp.*sin(freq.*x)
  Vec3 drift_freq = Vec3::Zero();
  int m = 2;                             // homogeneity exponent of the area data; ambient dim m+1

  bool IsXDependent() const;
  bool IsReversible() const;
  int Dimension() const { return m + 1; }

  // Stable key=value rendering (sorted keys, %.17g numbers); identical specs
  // produce identical text, which feeds the report config hash.
  std::string CanonicalText() const;
};

const char* FamilyName(MetricFamily family);
const char* PhiName(PhiFamily phi);
bool ParseFamilyName(const std::string& name, MetricFamily* out);
bool ParsePhiName(const std::string& name, PhiFamily* out);

// Drift field of the composite family (constant b for every other family).
Vec3 DriftField(const MetricSpec& spec, const Vec3& x);

// phi and its first two derivatives at s.  Fails on a pole (e.g. the
// reciprocal family at s = 1), reporting the offending ratio.
bool EvalPhi(const MetricSpec& spec, double s, double* phi, double* dphi,
             double* ddphi, std::string* error);

// ---------------------------------------------------------------------------
// Metric evaluation.

// F(x,y).  Returns 0 at y = 0 (positive homogeneity forces the value; the
// metric is not differentiable there).  Fails with a domain error when the
// evaluation crosses a phi pole, naming the singular ratio beta/alpha.
bool EvalMetric(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                double* out, std::string* error);

// Unchecked variant for hot loops: NaN/inf propagate instead of error strings.
double EvalMetricFast(const MetricSpec& spec, const Vec3& x, const Vec3& y);

// Analytic y-gradient and y-Hessian.  Refuses y = 0, where positive
// homogeneity makes the derivative undefined.  Hess*y = 0 up to roundoff
// (degree-0 homogeneity of the gradient).
bool MetricGradHess(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                    Vec3* grad, Mat3* hess, std::string* error);

// Central finite-difference counterparts (h = cbrt(eps)*max(1,|y|) for the
// gradient, eps^(1/4)*max(1,|y|) for the Hessian); cross-check utilities.
Vec3 MetricGradientFd(const MetricSpec& spec, const Vec3& x, const Vec3& y);
Mat3 MetricHessianFd(const MetricSpec& spec, const Vec3& x, const Vec3& y);

// Fundamental tensor g = grad F (x) grad F + F * Hess F, symmetrized.
// Satisfies g*y = F*grad F (Euler identities).
bool FundamentalTensor(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                       Mat3* g, std::string* error);

// ---------------------------------------------------------------------------
// Structural checks.

struct FinslerCheckReport {
  int sample_count = 0;
  double min_value = 0.0;                    // min F over sampled unit directions
  Vec3 argmin_value = Vec3::Zero();
  double max_homogeneity_residual = 0.0;     // relative, over t in {0.5, 2, 10}
  double min_eigenvalue = 0.0;               // min fundamental-tensor eigenvalue
  Vec3 argmin_eigenvalue = Vec3::Zero();
  bool verdict = false;
  std::string error;                         // non-empty if evaluation failed
};

// Positivity + homogeneity + fundamental-tensor positive definiteness on a
// Fibonacci direction sample (>= 100 directions enforced).  Verdict requires
// every margin to clear 1e-9.
FinslerCheckReport CheckFinsler(const MetricSpec& spec, const Vec3& x,
                                int sample_count = 200, std::uint64_t seed = 0);

struct AlphaBetaCheckReport {
  bool verdict = false;
  int grid_count = 0;
  double min_phi = 0.0;            // min of phi(s) on |s| <= b
  double min_criterion = 0.0;      // min of phi - s*phi' + (b^2 - s^2)*phi''
  double margin = 1e-10;
};

// Dimension-3 positivity criterion for alpha-beta metrics: phi(s) > 0 and
// phi - s*phi' + (b^2 - s^2)*phi'' > 0 on the whole interval |s| <= b_norm,
// sampled on a uniform grid including the endpoints; verdict requires both
// minima to exceed the margin (default 1e-10).  phi poles inside the interval
// are a domain error.
bool CheckAlphaBetaFinsler(const MetricSpec& spec, double b_norm,
                           AlphaBetaCheckReport* report, std::string* error,
                           int grid_count = 2001, double margin = 1e-10);

// ---------------------------------------------------------------------------
// m-harmonic symmetrization and even/odd split.

// F_sym(x,y) = [2 / (F(x,y)^-m + F(x,-y)^-m)]^(1/m); even in y, equals F for
// reversible metrics, and produces the same area integrand as F.
bool EvalSymmetrized(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                     double* out, std::string* error);
double EvalSymmetrizedFast(const MetricSpec& spec, const Vec3& x, const Vec3& y);

// Analytic derivatives of F_sym via the chain rule through both F(x,y) and
// F(x,-y); same conventions as MetricGradHess.
bool SymmetrizedGradHess(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                         Vec3* grad, Mat3* hess, std::string* error);

// Fundamental tensor of F_sym.
bool SymmetrizedFundamentalTensor(const MetricSpec& spec, const Vec3& x,
                                  const Vec3& y, Mat3* g, std::string* error);

// Arithmetic even/odd split F = F_s + F_a with F_s even, F_a odd.
double EvalSymmetricPart(const MetricSpec& spec, const Vec3& x, const Vec3& y);
double EvalAntisymmetricPart(const MetricSpec& spec, const Vec3& x, const Vec3& y);

// Derivatives of both split parts in one pass (used by the sufficient-
// condition checks, which need grad F_a and Hess F_a alongside g_{F_s}).
bool SplitGradHess(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                   Vec3* grad_sym, Mat3* hess_sym, Vec3* grad_asym,
                   Mat3* hess_asym, std::string* error);

struct SymmetrizationPair {
  std::function<double(const Vec3&, const Vec3&)> sym;         // even part
  std::function<double(const Vec3&, const Vec3&)> asym;        // odd part
  std::function<double(const Vec3&, const Vec3&)> m_harmonic;  // F_sym
};

// Bundles the three derived evaluators of a metric (even part, odd part,
// m-harmonic symmetrization) as callables over (x,y).
SymmetrizationPair SplitSymAsym(const MetricSpec& spec);

}  // namespace finsler
