#include "finsler/cartan.h"

#include <cmath>
#include <limits>

namespace finsler {

namespace {

constexpr double kQuietNan = std::numeric_limits<double>::quiet_NaN();

// Randers closed form: A = |Z| (1 - c^2)^(3/2), c^2 = |b|^2 - (b.Zhat)^2.
double RandersClosedForm(const Vec3& b, const Vec3& z) {
  double zn = z.norm();
  Vec3 zh = z / zn;
  double u = b.dot(zh);
  double c2 = b.squaredNorm() - u * u;
  double d = 1.0 - c2;
  if (!(d > 0.0)) return kQuietNan;
  return zn * d * std::sqrt(d);
}

// Gradient of the Randers closed form.  With u = b.Zhat and
// psi(u) = (1 - |b|^2 + u^2)^(3/2):  A = |Z| psi(u),
// grad A = psi(u) Zhat + psi'(u) (b - u Zhat),  psi' = 3u sqrt(1-|b|^2+u^2).
Vec3 RandersClosedFormGradient(const Vec3& b, const Vec3& z) {
  double zn = z.norm();
  Vec3 zh = z / zn;
  double u = b.dot(zh);
  double d = 1.0 - b.squaredNorm() + u * u;
  if (!(d > 0.0)) return Vec3::Constant(kQuietNan);
  double rd = std::sqrt(d);
  double psi = d * rd;
  double dpsi = 3.0 * u * rd;
  return psi * zh + dpsi * (b - u * zh);
}

}  // namespace

bool HasClosedForm(const MetricSpec& metric) {
  return metric.family == MetricFamily::kEuclidean ||
         metric.family == MetricFamily::kRanders;
}

bool MakeCartanIntegrand(const MetricSpec& metric, int quad_n,
                         CartanIntegrand* out, std::string* error,
                         bool use_closed_form) {
  if (metric.m != 2) {
    if (error) {
      *error = "area integrand supports m = 2 (surfaces in R^3) only, got m = " +
               std::to_string(metric.m);
    }
    return false;
  }
  if (quad_n < 16) {
    if (error) {
      *error = "quadrature order must be >= 16, got " + std::to_string(quad_n);
    }
    return false;
  }
  out->metric = metric;
  out->quad_n = quad_n;
  out->use_closed_form = use_closed_form && HasClosedForm(metric);
  out->nodes = MakeCircleNodes(quad_n);
  return true;
}

bool AreaIntegrandOfCallable(const std::function<double(const Vec3&)>& g, int m,
                             const CircleNodes& nodes, const Vec3& z,
                             double* out, std::string* error) {
  double zn = z.norm();
  if (!(zn > 0.0)) {
    if (error) *error = "area integrand is undefined at Z = 0";
    return false;
  }
  Vec3 f1, f2;
  if (!OrthonormalBasis(z, &f1, &f2, error)) return false;
  KahanSum sum;
  const int n = nodes.Count();
  for (int j = 0; j < n; ++j) {
    Vec3 y = nodes.cosines[static_cast<std::size_t>(j)] * f1 +
             nodes.sines[static_cast<std::size_t>(j)] * f2;
    double f = g(y);
    if (!std::isfinite(f) || !(f > 0.0)) {
      if (error) {
        *error = "metric vanishes or is singular on the plane orthogonal to Z "
                 "(quadrature node " + std::to_string(j) + ")";
      }
      return false;
    }
    sum.Add(std::pow(f, -static_cast<double>(m)));
  }
  *out = zn * static_cast<double>(n) / sum.Value();
  return true;
}

bool AreaIntegrandWithBasis(const CartanIntegrand& ci, const Vec3& x,
                            const Vec3& z, const Vec3& f1, const Vec3& f2,
                            double* out, std::string* error) {
  double zn = z.norm();
  if (!(zn > 0.0)) {
    if (error) *error = "area integrand is undefined at Z = 0";
    return false;
  }
  KahanSum sum;
  const int n = ci.nodes.Count();
  for (int j = 0; j < n; ++j) {
    Vec3 y = ci.nodes.cosines[static_cast<std::size_t>(j)] * f1 +
             ci.nodes.sines[static_cast<std::size_t>(j)] * f2;
    double f = EvalMetricFast(ci.metric, x, y);
    if (!std::isfinite(f) || !(f > 0.0)) {
      if (error) {
        *error = "metric vanishes or is singular on the plane orthogonal to Z "
                 "(quadrature node " + std::to_string(j) + ")";
      }
      return false;
    }
    sum.Add(std::pow(f, -static_cast<double>(ci.metric.m)));
  }
  *out = zn * static_cast<double>(n) / sum.Value();
  return true;
}

bool AreaIntegrand(const CartanIntegrand& ci, const Vec3& x, const Vec3& z,
                   double* out, std::string* error) {
  double zn = z.norm();
  if (!(zn > 0.0)) {
    if (error) *error = "area integrand is undefined at Z = 0";
    return false;
  }
  if (ci.use_closed_form) {
    double v = ci.metric.family == MetricFamily::kEuclidean
                   ? zn
                   : RandersClosedForm(ci.metric.b, z);
    if (!std::isfinite(v)) {
      if (error) {
        *error = "metric vanishes or is singular on the plane orthogonal to Z";
      }
      return false;
    }
    *out = v;
    return true;
  }
  Vec3 f1, f2;
  if (!OrthonormalBasis(z, &f1, &f2, error)) return false;
  return AreaIntegrandWithBasis(ci, x, z, f1, f2, out, error);
}

double AreaIntegrandFast(const CartanIntegrand& ci, const Vec3& x, const Vec3& z) {
  double zn = z.norm();
  if (!(zn > 0.0)) return kQuietNan;
  if (ci.use_closed_form) {
    return ci.metric.family == MetricFamily::kEuclidean
               ? zn
               : RandersClosedForm(ci.metric.b, z);
  }
  Vec3 f1, f2;
  std::string err;
  if (!OrthonormalBasis(z, &f1, &f2, &err)) return kQuietNan;
  KahanSum sum;
  const int n = ci.nodes.Count();
  for (int j = 0; j < n; ++j) {
    Vec3 y = ci.nodes.cosines[static_cast<std::size_t>(j)] * f1 +
             ci.nodes.sines[static_cast<std::size_t>(j)] * f2;
    double f = EvalMetricFast(ci.metric, x, y);
    if (!std::isfinite(f) || !(f > 0.0)) return kQuietNan;
    sum.Add(std::pow(f, -static_cast<double>(ci.metric.m)));
  }
  return zn * static_cast<double>(n) / sum.Value();
}

bool AreaIntegrandDerivs(const CartanIntegrand& ci, const Vec3& x, const Vec3& z,
                         double* value, Vec3* grad, Mat3* hess,
                         std::string* error) {
  double v;
  if (!AreaIntegrand(ci, x, z, &v, error)) return false;
  if (value) *value = v;
  if (!grad && !hess) return true;
  if (ci.use_closed_form) {
    auto g = [&](const Vec3& zz) -> Vec3 {
      return ci.metric.family == MetricFamily::kEuclidean
                 ? Vec3(zz.normalized())
                 : RandersClosedFormGradient(ci.metric.b, zz);
    };
    Vec3 g0 = g(z);
    if (!g0.allFinite()) {
      if (error) *error = "area integrand gradient is singular";
      return false;
    }
    if (grad) *grad = g0;
    if (hess) {
      double h = FdStepGradient(z);
      Mat3 m;
      for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = h;
        m.col(i) = (g(z + e) - g(z - e)) / (2.0 * h);
      }
      if (!m.allFinite()) {
        if (error) *error = "area integrand Hessian is singular";
        return false;
      }
      *hess = 0.5 * (m + m.transpose());
    }
    return true;
  }
  auto f = [&](const Vec3& zz) { return AreaIntegrandFast(ci, x, zz); };
  if (grad) {
    *grad = FdGradient(f, z);
    if (!grad->allFinite()) {
      if (error) *error = "area integrand gradient hit a singular evaluation";
      return false;
    }
  }
  if (hess) {
    *hess = FdHessian(f, z);
    if (!hess->allFinite()) {
      if (error) *error = "area integrand Hessian hit a singular evaluation";
      return false;
    }
  }
  return true;
}

bool AreaIntegrandXGradient(const CartanIntegrand& ci, const Vec3& x,
                            const Vec3& z, Vec3* grad, std::string* error) {
  if (!ci.metric.IsXDependent()) {
    *grad = Vec3::Zero();
    return true;
  }
  double h = FdStepGradient(x);
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    double fp = AreaIntegrandFast(ci, x + e, z);
    double fm = AreaIntegrandFast(ci, x - e, z);
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      if (error) *error = "area integrand x-gradient hit a singular evaluation";
      return false;
    }
    (*grad)[i] = (fp - fm) / (2.0 * h);
  }
  return true;
}

std::vector<Vec3> DefaultXGrid(const MetricSpec& metric) {
  std::vector<Vec3> grid;
  if (!metric.IsXDependent()) {
    grid.push_back(Vec3::Zero());
    return grid;
  }
  const int per_axis = 5;
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      for (int k = 0; k < per_axis; ++k) {
        grid.emplace_back(-1.0 + 2.0 * i / (per_axis - 1),
                          -1.0 + 2.0 * j / (per_axis - 1),
                          -1.0 + 2.0 * k / (per_axis - 1));
      }
    }
  }
  return grid;
}

bool ComputeGrowthBounds(const CartanIntegrand& ci, int sample_count,
                         GrowthBounds* out, std::string* error,
                         const std::vector<Vec3>* x_grid) {
  if (sample_count < 500) sample_count = 500;
  std::vector<Vec3> grid = x_grid ? *x_grid : DefaultXGrid(ci.metric);
  std::vector<Vec3> dirs = FibonacciSphere(sample_count);
  double c1 = std::numeric_limits<double>::infinity();
  double c2 = -std::numeric_limits<double>::infinity();
  for (const Vec3& x : grid) {
    for (const Vec3& d : dirs) {
      double f = EvalMetricFast(ci.metric, x, d);
      if (!std::isfinite(f)) {
        if (error) *error = "metric evaluation is singular during growth scan";
        return false;
      }
      c1 = std::min(c1, f);
      c2 = std::max(c2, f);
    }
  }
  if (!(c1 > 0.0)) {
    if (error) {
      *error = "metric is not positive on the direction sample (min F = " +
               std::to_string(c1) + "); growth bounds require a Finsler metric";
    }
    return false;
  }
  out->c1 = c1;
  out->c2 = c2;
  out->m1 = std::pow(c1, ci.metric.m);
  out->m2 = std::pow(c2, ci.metric.m);
  out->sample_count = sample_count;
  // Probe the sandwich m1*|Z| <= A(x,Z) <= m2*|Z| on a coarse direction set.
  std::vector<Vec3> probes = FibonacciSphere(64);
  double lower = std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (const Vec3& x : grid) {
    for (const Vec3& zh : probes) {
      double a;
      if (!AreaIntegrand(ci, x, zh, &a, error)) return false;
      lower = std::min(lower, a - out->m1);
      upper = std::min(upper, out->m2 - a);
    }
  }
  out->worst_lower_margin = lower;
  out->worst_upper_margin = upper;
  out->sandwich_ok = lower >= -1e-9 && upper >= -1e-9;
  return true;
}

bool CheckSymmetrizationIdentity(const CartanIntegrand& ci, int sample_count,
                                 std::uint64_t seed,
                                 SymmetrizationIdentityReport* out,
                                 std::string* error) {
  SplitMix64 rng(seed ? seed : 0x5ca1ab1eull);
  out->sample_count = sample_count;
  out->max_rel_error = 0.0;
  const MetricSpec& spec = ci.metric;
  for (int i = 0; i < sample_count; ++i) {
    Vec3 zh = RandomUnitVector(&rng);
    double scale = rng.NextInRange(0.5, 2.0);
    Vec3 z = scale * zh;
    Vec3 x = Vec3::Zero();
    if (spec.IsXDependent()) {
      x = Vec3(rng.NextInRange(-1.0, 1.0), rng.NextInRange(-1.0, 1.0),
               rng.NextInRange(-1.0, 1.0));
    }
    double a_f;
    auto base = [&](const Vec3& y) { return EvalMetricFast(spec, x, y); };
    if (!AreaIntegrandOfCallable(base, spec.m, ci.nodes, z, &a_f, error)) {
      return false;
    }
    double a_sym;
    auto sym = [&](const Vec3& y) { return EvalSymmetrizedFast(spec, x, y); };
    if (!AreaIntegrandOfCallable(sym, spec.m, ci.nodes, z, &a_sym, error)) {
      return false;
    }
    double rel = std::abs(a_f - a_sym) / std::max(std::abs(a_f), 1e-300);
    if (rel > out->max_rel_error) {
      out->max_rel_error = rel;
      out->argmax_z = z;
    }
  }
  return true;
}

bool EllipticityScan(const CartanIntegrand& ci, int sample_count,
                     EllipticityReport* out, std::string* error,
                     double tolerance, const std::vector<Vec3>* x_grid,
                     bool refine) {
  std::vector<Vec3> grid = x_grid ? *x_grid : DefaultXGrid(ci.metric);
  std::vector<Vec3> dirs = FibonacciSphere(sample_count);
  out->sample_count = sample_count;
  out->tolerance = tolerance;
  out->lambda_min = std::numeric_limits<double>::infinity();

  // Smallest eigenvalue of the Hessian restricted to the plane orthogonal to
  // Z, evaluated at |Z| = 1 (the restriction scales as 1/|Z|, so this is the
  // |Z|-scaled quantity).  NaN marks singular evaluations.
  auto tangential_min_eig = [&](const Vec3& x, const Vec3& zh) -> double {
    Mat3 hess;
    std::string err;
    if (!AreaIntegrandDerivs(ci, x, zh, nullptr, nullptr, &hess, &err)) {
      return kQuietNan;
    }
    Vec3 f1, f2;
    if (!OrthonormalBasis(zh, &f1, &f2, &err)) return kQuietNan;
    double a = f1.dot(hess * f1);
    double b = f1.dot(hess * f2);
    double c = f2.dot(hess * f2);
    double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    return 0.5 * (a + c - disc);
  };

  for (const Vec3& x : grid) {
    Vec3 best_dir = Vec3::UnitZ();
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& zh : dirs) {
      double lam = tangential_min_eig(x, zh);
      if (!std::isfinite(lam)) {
        if (error) {
          *error = "ellipticity scan hit a singular area-integrand evaluation";
        }
        return false;
      }
      if (lam < best) {
        best = lam;
        best_dir = zh;
      }
    }
    if (refine) {
      auto fn = [&](const Vec3& d) {
        double lam = tangential_min_eig(x, d);
        return std::isfinite(lam) ? lam
                                  : std::numeric_limits<double>::infinity();
      };
      double refined_val;
      Vec3 refined_dir = RefineSphereMinimum(fn, best_dir, &refined_val);
      if (refined_val < best) {
        best = refined_val;
        best_dir = refined_dir;
      }
      out->refined = true;
    }
    if (best < out->lambda_min) {
      out->lambda_min = best;
      out->argmin_z = best_dir;
      out->argmin_x = x;
    }
  }
  out->verdict = out->lambda_min >= -tolerance;
  return true;
}

bool RhoK(const std::function<double(const Vec3&)>& g, int k, int sample_count,
          double* out, std::string* error, std::uint64_t seed) {
  if (k < 0 || k > 2) {
    if (error) {
      *error = "seminorm order k = " + std::to_string(k) +
               " is not supported (k <= 2 required; higher-order finite "
               "differences are too noisy to certify)";
    }
    return false;
  }
  if (sample_count < 100) sample_count = 100;
  std::vector<Vec3> dirs = FibonacciSphere(sample_count, seed);
  double sup = 0.0;
  for (const Vec3& xi : dirs) {
    double v = g(xi);
    if (!std::isfinite(v)) {
      if (error) *error = "seminorm evaluation is not finite";
      return false;
    }
    sup = std::max(sup, std::abs(v));
    if (k >= 1) {
      Vec3 grad = FdGradient(g, xi);
      if (!grad.allFinite()) {
        if (error) *error = "seminorm derivative evaluation is not finite";
        return false;
      }
      for (int i = 0; i < 3; ++i) sup = std::max(sup, std::abs(grad[i]));
    }
    if (k >= 2) {
      Mat3 hess = FdHessian(g, xi);
      if (!hess.allFinite()) {
        if (error) *error = "seminorm derivative evaluation is not finite";
        return false;
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) sup = std::max(sup, std::abs(hess(i, j)));
      }
    }
  }
  *out = sup;
  return true;
}

bool DominanceFeasibility(const CartanIntegrand& ci, DominanceReport* out,
                          std::string* error, int rho_samples, int scan_samples,
                          double delta0, const std::vector<Vec3>* x_grid) {
  std::vector<Vec3> grid = x_grid ? *x_grid : DefaultXGrid(ci.metric);
  out->delta0 = delta0;
  out->sample_count = rho_samples;

  double delta = 0.0;
  double delta0_sup = 0.0;
  for (const Vec3& x : grid) {
    auto shifted_area = [&](const Vec3& z) {
      return AreaIntegrandFast(ci, x, z) - z.norm();
    };
    double r;
    if (!RhoK(shifted_area, 2, rho_samples, &r, error)) return false;
    delta = std::max(delta, r);
    auto shifted_metric = [&](const Vec3& y) {
      return EvalMetricFast(ci.metric, x, y) - y.norm();
    };
    if (!RhoK(shifted_metric, 2, rho_samples, &r, error)) return false;
    delta0_sup = std::max(delta0_sup, r);
  }
  out->delta = delta;
  out->pass_corollary = delta < 0.2;
  out->delta0_sup = delta0_sup;
  out->delta0_pass = delta0_sup < delta0;

  if (delta >= 1.0) {
    out->k0 = std::numeric_limits<double>::infinity();
    out->m1_star = out->m2_star = out->lambda_star = kQuietNan;
    return true;
  }
  const double rescale = (1.0 + 1e-6) / (1.0 - delta);
  // Range of the rescaled shifted integrand R*A - |Z| on the sphere.
  double m1s = std::numeric_limits<double>::infinity();
  double m2s = -std::numeric_limits<double>::infinity();
  std::vector<Vec3> dirs = FibonacciSphere(scan_samples < 500 ? 500 : scan_samples);
  for (const Vec3& x : grid) {
    for (const Vec3& zh : dirs) {
      double a = AreaIntegrandFast(ci, x, zh);
      if (!std::isfinite(a)) {
        if (error) *error = "dominance scan hit a singular evaluation";
        return false;
      }
      double c = rescale * a - 1.0;
      m1s = std::min(m1s, c);
      m2s = std::max(m2s, c);
    }
  }
  EllipticityReport ell;
  if (!EllipticityScan(ci, scan_samples, &ell, error, 1e-6, &grid)) return false;
  out->m1_star = m1s;
  out->m2_star = m2s;
  out->lambda_star = rescale * ell.lambda_min - 1.0;
  out->k0 = 2.0 * (m2s - std::min(out->lambda_star, 0.5 * m1s));
  return true;
}

}  // namespace finsler
