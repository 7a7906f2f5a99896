#include "finsler/metric.h"

#include "finsler/sampling.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace finsler {

namespace {

constexpr double kQuietNan = std::numeric_limits<double>::quiet_NaN();

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string FormatVec(const Vec3& v) {
  return FormatDouble(v[0]) + "," + FormatDouble(v[1]) + "," + FormatDouble(v[2]);
}

// h(s) and derivatives for the odd-reciprocal-root family:
// h(s) = c0*s + c1*s^3 + c2*s^5 + ...
void EvalOddPoly(const std::vector<double>& coeffs, double s, double* h,
                 double* dh, double* ddh) {
  double v = 0.0, dv = 0.0, ddv = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    int e = 2 * static_cast<int>(k) + 1;
    double c = coeffs[k];
    v += c * std::pow(s, e);
    dv += c * e * std::pow(s, e - 1);
    if (e >= 2) ddv += c * e * (e - 1) * std::pow(s, e - 2);
  }
  *h = v;
  *dh = dv;
  *ddh = ddv;
}

}  // namespace

bool MetricSpec::IsXDependent() const { return family == MetricFamily::kComposite; }

bool MetricSpec::IsReversible() const {
  switch (family) {
    case MetricFamily::kEuclidean:
    case MetricFamily::kPerturbedQuartic:
      return true;
    case MetricFamily::kRanders:
    case MetricFamily::kAlphaBeta:
      return b.norm() == 0.0;
    case MetricFamily::kComposite:
      return b.norm() == 0.0 && drift_amp.norm() == 0.0;
  }
  return false;
}

std::string MetricSpec::CanonicalText() const {
  std::ostringstream os;
  os << "b=" << FormatVec(b) << ";drift_amp=" << FormatVec(drift_amp)
     << ";drift_freq=" << FormatVec(drift_freq)
     << ";epsilon=" << FormatDouble(epsilon) << ";family=" << FamilyName(family)
     << ";m=" << m << ";phi=" << PhiName(phi) << ";phi_coeffs=";
  for (std::size_t i = 0; i < phi_coeffs.size(); ++i) {
    if (i) os << ",";
    os << FormatDouble(phi_coeffs[i]);
  }
  return os.str();
}

const char* FamilyName(MetricFamily family) {
  switch (family) {
    case MetricFamily::kEuclidean: return "euclidean";
    case MetricFamily::kRanders: return "randers";
    case MetricFamily::kAlphaBeta: return "alpha-beta";
    case MetricFamily::kPerturbedQuartic: return "perturbed-quartic";
    case MetricFamily::kComposite: return "composite";
  }
  return "unknown";
}

const char* PhiName(PhiFamily phi) {
  switch (phi) {
    case PhiFamily::kRanders: return "randers";
    case PhiFamily::kTwoOrder: return "two-order";
    case PhiFamily::kMatsumoto: return "matsumoto";
    case PhiFamily::kPolynomial: return "polynomial";
    case PhiFamily::kOddReciprocalRoot: return "odd-reciprocal-root";
  }
  return "unknown";
}

bool ParseFamilyName(const std::string& name, MetricFamily* out) {
  for (MetricFamily f :
       {MetricFamily::kEuclidean, MetricFamily::kRanders, MetricFamily::kAlphaBeta,
        MetricFamily::kPerturbedQuartic, MetricFamily::kComposite}) {
    if (name == FamilyName(f)) {
      *out = f;
      return true;
    }
  }
  return false;
}

bool ParsePhiName(const std::string& name, PhiFamily* out) {
  for (PhiFamily p :
       {PhiFamily::kRanders, PhiFamily::kTwoOrder, PhiFamily::kMatsumoto,
        PhiFamily::kPolynomial, PhiFamily::kOddReciprocalRoot}) {
    if (name == PhiName(p)) {
      *out = p;
      return true;
    }
  }
  return false;
}

Vec3 DriftField(const MetricSpec& spec, const Vec3& x) {
  if (spec.family != MetricFamily::kComposite) return spec.b;
  Vec3 out = spec.b;
  for (int i = 0; i < 3; ++i) {
    out[i] += spec.drift_amp[i] * std::sin(spec.drift_freq[i] * x[i]);
  }
  return out;
}

bool EvalPhi(const MetricSpec& spec, double s, double* phi, double* dphi,
             double* ddphi, std::string* error) {
  switch (spec.phi) {
    case PhiFamily::kRanders:
      *phi = 1.0 + s;
      *dphi = 1.0;
      *ddphi = 0.0;
      return true;
    case PhiFamily::kTwoOrder:
      *phi = (1.0 + s) * (1.0 + s);
      *dphi = 2.0 * (1.0 + s);
      *ddphi = 2.0;
      return true;
    case PhiFamily::kMatsumoto: {
      double d = 1.0 - s;
      if (!(std::abs(d) > 1e-14)) {
        if (error) {
          *error = "matsumoto phi is singular: beta/alpha = " + FormatDouble(s) +
                   " hits the pole at 1";
        }
        return false;
      }
      *phi = 1.0 / d;
      *dphi = 1.0 / (d * d);
      *ddphi = 2.0 / (d * d * d);
      return true;
    }
    case PhiFamily::kPolynomial: {
      double v = 0.0, dv = 0.0, ddv = 0.0;
      for (std::size_t k = spec.phi_coeffs.size(); k-- > 0;) {
        ddv = ddv * s + 2.0 * dv;
        dv = dv * s + v;
        v = v * s + spec.phi_coeffs[k];
      }
      // The Horner recurrences above accumulate v = sum c_k s^k,
      // dv = sum k c_k s^(k-1), ddv = sum k(k-1) c_k s^(k-2).
      *phi = v;
      *dphi = dv;
      *ddphi = ddv;
      return true;
    }
    case PhiFamily::kOddReciprocalRoot: {
      double h, dh, ddh;
      EvalOddPoly(spec.phi_coeffs, s, &h, &dh, &ddh);
      double base = 1.0 + h;
      if (!(base > 1e-14)) {
        if (error) {
          *error = "odd-reciprocal-root phi is singular: 1 + h(beta/alpha) = " +
                   FormatDouble(base) + " at beta/alpha = " + FormatDouble(s);
        }
        return false;
      }
      double inv_m = 1.0 / spec.m;
      double p = std::pow(base, -inv_m);
      *phi = p;
      *dphi = -inv_m * std::pow(base, -inv_m - 1.0) * dh;
      *ddphi = inv_m * (inv_m + 1.0) * std::pow(base, -inv_m - 2.0) * dh * dh -
               inv_m * std::pow(base, -inv_m - 1.0) * ddh;
      return true;
    }
  }
  if (error) *error = "unknown phi family";
  return false;
}

namespace {

// Perturbed quartic G(y) = sqrt(sum y_i^4) + epsilon*|y|^2 and derivatives;
// F = sqrt(G).
double QuarticValue(const Vec3& y, double epsilon) {
  double t = 0.0, s = 0.0;
  for (int i = 0; i < 3; ++i) {
    double yi2 = y[i] * y[i];
    t += yi2 * yi2;
    s += yi2;
  }
  return std::sqrt(std::sqrt(t) + epsilon * s);
}

void QuarticGradHess(const Vec3& y, double epsilon, Vec3* grad, Mat3* hess) {
  double t = 0.0, s = 0.0;
  Vec3 y2, y3;
  for (int i = 0; i < 3; ++i) {
    y2[i] = y[i] * y[i];
    y3[i] = y2[i] * y[i];
    t += y2[i] * y2[i];
    s += y2[i];
  }
  double rt = std::sqrt(t);
  double g_val = rt + epsilon * s;
  Vec3 grad_g = 2.0 * y3 / rt + 2.0 * epsilon * y;
  Mat3 hess_g = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    hess_g(i, i) = 6.0 * y2[i] / rt + 2.0 * epsilon;
    for (int j = 0; j < 3; ++j) {
      hess_g(i, j) -= 4.0 * y3[i] * y3[j] / (rt * t);
    }
  }
  double f = std::sqrt(g_val);
  *grad = grad_g / (2.0 * f);
  *hess = hess_g / (2.0 * f) - grad_g * grad_g.transpose() / (4.0 * g_val * f);
}

}  // namespace

double EvalMetricFast(const MetricSpec& spec, const Vec3& x, const Vec3& y) {
  double alpha = y.norm();
  if (alpha == 0.0) return 0.0;
  switch (spec.family) {
    case MetricFamily::kEuclidean:
      return alpha;
    case MetricFamily::kRanders:
      return alpha + spec.b.dot(y);
    case MetricFamily::kAlphaBeta: {
      double s = spec.b.dot(y) / alpha;
      double phi, dphi, ddphi;
      if (!EvalPhi(spec, s, &phi, &dphi, &ddphi, nullptr)) return kQuietNan;
      return alpha * phi;
    }
    case MetricFamily::kPerturbedQuartic:
      return QuarticValue(y, spec.epsilon);
    case MetricFamily::kComposite:
      return QuarticValue(y, spec.epsilon) + DriftField(spec, x).dot(y);
  }
  return kQuietNan;
}

bool EvalMetric(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                double* out, std::string* error) {
  if (y.norm() == 0.0) {
    *out = 0.0;
    return true;
  }
  if (spec.family == MetricFamily::kAlphaBeta) {
    double alpha = y.norm();
    double s = spec.b.dot(y) / alpha;
    double phi, dphi, ddphi;
    if (!EvalPhi(spec, s, &phi, &dphi, &ddphi, error)) return false;
    *out = alpha * phi;
    return true;
  }
  double v = EvalMetricFast(spec, x, y);
  if (!std::isfinite(v)) {
    if (error) *error = "metric evaluation is not finite";
    return false;
  }
  *out = v;
  return true;
}

bool MetricGradHess(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                    Vec3* grad, Mat3* hess, std::string* error) {
  double alpha = y.norm();
  if (alpha == 0.0) {
    if (error) *error = "metric derivatives are undefined at y = 0";
    return false;
  }
  Vec3 yh = y / alpha;
  Mat3 proj = (Mat3::Identity() - yh * yh.transpose()) / alpha;
  switch (spec.family) {
    case MetricFamily::kEuclidean:
      *grad = yh;
      *hess = proj;
      return true;
    case MetricFamily::kRanders:
      *grad = yh + spec.b;
      *hess = proj;
      return true;
    case MetricFamily::kAlphaBeta: {
      double s = spec.b.dot(y) / alpha;
      double phi, dphi, ddphi;
      if (!EvalPhi(spec, s, &phi, &dphi, &ddphi, error)) return false;
      Vec3 q = spec.b - s * yh;
      *grad = (phi - s * dphi) * yh + dphi * spec.b;
      *hess = (phi - s * dphi) * proj + (ddphi / alpha) * q * q.transpose();
      return true;
    }
    case MetricFamily::kPerturbedQuartic:
      QuarticGradHess(y, spec.epsilon, grad, hess);
      return true;
    case MetricFamily::kComposite: {
      QuarticGradHess(y, spec.epsilon, grad, hess);
      *grad += DriftField(spec, x);
      return true;
    }
  }
  if (error) *error = "unknown metric family";
  return false;
}

Vec3 MetricGradientFd(const MetricSpec& spec, const Vec3& x, const Vec3& y) {
  return FdGradient([&](const Vec3& v) { return EvalMetricFast(spec, x, v); }, y);
}

Mat3 MetricHessianFd(const MetricSpec& spec, const Vec3& x, const Vec3& y) {
  return FdHessian([&](const Vec3& v) { return EvalMetricFast(spec, x, v); }, y);
}

bool FundamentalTensor(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                       Mat3* g, std::string* error) {
  double f;
  if (!EvalMetric(spec, x, y, &f, error)) return false;
  Vec3 grad;
  Mat3 hess;
  if (!MetricGradHess(spec, x, y, &grad, &hess, error)) return false;
  Mat3 raw = grad * grad.transpose() + f * hess;
  *g = 0.5 * (raw + raw.transpose());
  return true;
}

FinslerCheckReport CheckFinsler(const MetricSpec& spec, const Vec3& x,
                                int sample_count, std::uint64_t seed) {
  FinslerCheckReport rep;
  if (sample_count < 100) sample_count = 100;
  rep.sample_count = sample_count;
  std::vector<Vec3> dirs = FibonacciSphere(sample_count, seed);
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.max_homogeneity_residual = 0.0;
  const double scales[3] = {0.5, 2.0, 10.0};
  for (const Vec3& d : dirs) {
    double f;
    std::string err;
    if (!EvalMetric(spec, x, d, &f, &err)) {
      rep.error = err;
      rep.verdict = false;
      return rep;
    }
    if (f < rep.min_value) {
      rep.min_value = f;
      rep.argmin_value = d;
    }
    for (double t : scales) {
      double ft;
      if (!EvalMetric(spec, x, t * d, &ft, &err)) {
        rep.error = err;
        rep.verdict = false;
        return rep;
      }
      double denom = std::max(std::abs(t * f), 1e-300);
      double resid = std::abs(ft - t * f) / denom;
      rep.max_homogeneity_residual = std::max(rep.max_homogeneity_residual, resid);
    }
    Mat3 g;
    if (!FundamentalTensor(spec, x, d, &g, &err)) {
      rep.error = err;
      rep.verdict = false;
      return rep;
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(g);
    double lam = es.eigenvalues()[0];
    if (lam < rep.min_eigenvalue) {
      rep.min_eigenvalue = lam;
      rep.argmin_eigenvalue = d;
    }
  }
  rep.verdict = rep.min_value > 1e-9 && rep.min_eigenvalue > 1e-9 &&
                rep.max_homogeneity_residual <= 1e-9;
  return rep;
}

bool CheckAlphaBetaFinsler(const MetricSpec& spec, double b_norm,
                           AlphaBetaCheckReport* report, std::string* error,
                           int grid_count, double margin) {
  if (b_norm < 0.0) {
    if (error) *error = "b_norm must be nonnegative";
    return false;
  }
  if (grid_count < 3) grid_count = 3;
  report->grid_count = grid_count;
  report->margin = margin;
  report->min_phi = std::numeric_limits<double>::infinity();
  report->min_criterion = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_count; ++i) {
    double s = -b_norm + 2.0 * b_norm * i / (grid_count - 1);
    double phi, dphi, ddphi;
    if (!EvalPhi(spec, s, &phi, &dphi, &ddphi, error)) return false;
    double crit = phi - s * dphi + (b_norm * b_norm - s * s) * ddphi;
    report->min_phi = std::min(report->min_phi, phi);
    report->min_criterion = std::min(report->min_criterion, crit);
  }
  report->verdict = report->min_phi > margin && report->min_criterion > margin;
  return true;
}

double EvalSymmetrizedFast(const MetricSpec& spec, const Vec3& x, const Vec3& y) {
  if (y.norm() == 0.0) return 0.0;
  double fp = EvalMetricFast(spec, x, y);
  double fm = EvalMetricFast(spec, x, -y);
  double m = static_cast<double>(spec.m);
  double p = std::pow(fp, -m) + std::pow(fm, -m);
  return std::pow(2.0 / p, 1.0 / m);
}

bool EvalSymmetrized(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                     double* out, std::string* error) {
  if (y.norm() == 0.0) {
    *out = 0.0;
    return true;
  }
  double fp, fm;
  if (!EvalMetric(spec, x, y, &fp, error)) return false;
  if (!EvalMetric(spec, x, -y, &fm, error)) return false;
  if (!(fp > 0.0) || !(fm > 0.0)) {
    if (error) {
      *error = "m-harmonic symmetrization requires F > 0 in both directions; got " +
               FormatDouble(fp) + " and " + FormatDouble(fm);
    }
    return false;
  }
  double m = static_cast<double>(spec.m);
  double p = std::pow(fp, -m) + std::pow(fm, -m);
  *out = std::pow(2.0 / p, 1.0 / m);
  return true;
}

bool SymmetrizedGradHess(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                         Vec3* grad, Mat3* hess, std::string* error) {
  double alpha = y.norm();
  if (alpha == 0.0) {
    if (error) *error = "metric derivatives are undefined at y = 0";
    return false;
  }
  double fp, fm;
  if (!EvalMetric(spec, x, y, &fp, error)) return false;
  if (!EvalMetric(spec, x, -y, &fm, error)) return false;
  if (!(fp > 0.0) || !(fm > 0.0)) {
    if (error) *error = "m-harmonic symmetrization requires F > 0 in both directions";
    return false;
  }
  Vec3 gp, gm_at;
  Mat3 hp, hm_at;
  if (!MetricGradHess(spec, x, y, &gp, &hp, error)) return false;
  if (!MetricGradHess(spec, x, -y, &gm_at, &hm_at, error)) return false;
  // With u(y) = F(x,y)^-m and v(y) = F(x,-y)^-m:
  //   grad u = -m F+^-(m+1) grad F+,      grad v = +m F-^-(m+1) (grad F)(x,-y)
  //   Hess u = m(m+1) F+^-(m+2) gF+ gF+^T - m F+^-(m+1) Hess F+
  //   Hess v = m(m+1) F-^-(m+2) gF- gF-^T - m F-^-(m+1) (Hess F)(x,-y)
  double m = static_cast<double>(spec.m);
  double fpm1 = std::pow(fp, -m - 1.0), fpm2 = std::pow(fp, -m - 2.0);
  double fmm1 = std::pow(fm, -m - 1.0), fmm2 = std::pow(fm, -m - 2.0);
  double p = std::pow(fp, -m) + std::pow(fm, -m);
  Vec3 grad_p = -m * fpm1 * gp + m * fmm1 * gm_at;
  Mat3 hess_p = m * (m + 1.0) * fpm2 * gp * gp.transpose() - m * fpm1 * hp +
                m * (m + 1.0) * fmm2 * gm_at * gm_at.transpose() - m * fmm1 * hm_at;
  double c = std::pow(2.0, 1.0 / m);
  double pm1 = std::pow(p, -1.0 / m - 1.0), pm2 = std::pow(p, -1.0 / m - 2.0);
  *grad = c * (-1.0 / m) * pm1 * grad_p;
  Mat3 h = c * (((m + 1.0) / (m * m)) * pm2 * grad_p * grad_p.transpose() -
                (1.0 / m) * pm1 * hess_p);
  *hess = 0.5 * (h + h.transpose());
  return true;
}

bool SymmetrizedFundamentalTensor(const MetricSpec& spec, const Vec3& x,
                                  const Vec3& y, Mat3* g, std::string* error) {
  double f;
  if (!EvalSymmetrized(spec, x, y, &f, error)) return false;
  Vec3 grad;
  Mat3 hess;
  if (!SymmetrizedGradHess(spec, x, y, &grad, &hess, error)) return false;
  Mat3 raw = grad * grad.transpose() + f * hess;
  *g = 0.5 * (raw + raw.transpose());
  return true;
}

double EvalSymmetricPart(const MetricSpec& spec, const Vec3& x, const Vec3& y) {
  return 0.5 * (EvalMetricFast(spec, x, y) + EvalMetricFast(spec, x, -y));
}

double EvalAntisymmetricPart(const MetricSpec& spec, const Vec3& x, const Vec3& y) {
  return 0.5 * (EvalMetricFast(spec, x, y) - EvalMetricFast(spec, x, -y));
}

bool SplitGradHess(const MetricSpec& spec, const Vec3& x, const Vec3& y,
                   Vec3* grad_sym, Mat3* hess_sym, Vec3* grad_asym,
                   Mat3* hess_asym, std::string* error) {
  if (y.norm() == 0.0) {
    if (error) *error = "metric derivatives are undefined at y = 0";
    return false;
  }
  Vec3 gp, gm_at;
  Mat3 hp, hm_at;
  if (!MetricGradHess(spec, x, y, &gp, &hp, error)) return false;
  if (!MetricGradHess(spec, x, -y, &gm_at, &hm_at, error)) return false;
  // d/dy F(x,-y) = -(grad F)(x,-y); d2/dy2 F(x,-y) = (Hess F)(x,-y).
  *grad_sym = 0.5 * (gp - gm_at);
  *hess_sym = 0.5 * (hp + hm_at);
  *grad_asym = 0.5 * (gp + gm_at);
  *hess_asym = 0.5 * (hp - hm_at);
  return true;
}

SymmetrizationPair SplitSymAsym(const MetricSpec& spec) {
  SymmetrizationPair pair;
  pair.sym = [spec](const Vec3& x, const Vec3& y) {
    return EvalSymmetricPart(spec, x, y);
  };
  pair.asym = [spec](const Vec3& x, const Vec3& y) {
    return EvalAntisymmetricPart(spec, x, y);
  };
  pair.m_harmonic = [spec](const Vec3& x, const Vec3& y) {
    return EvalSymmetrizedFast(spec, x, y);
  };
  return pair;
}

}  // namespace finsler
