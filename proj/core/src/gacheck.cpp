#include "finsler/gacheck.h"

#include "finsler/cartan.h"
#include "finsler/sampling.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace finsler {

namespace {

MetricSpec AlphaBetaSpec(PhiFamily family, double b) {
  MetricSpec spec;
  spec.family = MetricFamily::kAlphaBeta;
  spec.phi = family;
  spec.b = Vec3(b, 0.0, 0.0);
  spec.m = 2;
  return spec;
}

}  // namespace

bool SufficientCondition(const MetricSpec& spec, SufficientConditionReport* out,
                         std::string* error, int sample_count,
                         const std::vector<Vec3>* x_grid) {
  if (sample_count < 50) sample_count = 50;
  std::vector<Vec3> grid = x_grid ? *x_grid : DefaultXGrid(spec);
  std::vector<Vec3> dirs = FibonacciSphere(sample_count);
  out->sample_count = sample_count;
  out->fs_finsler = true;
  out->cond1_min_eig = std::numeric_limits<double>::infinity();
  out->cond2_max_eig = -std::numeric_limits<double>::infinity();
  out->has_witness = false;
  const double mp1 = static_cast<double>(spec.m) + 1.0;

  for (const Vec3& x : grid) {
    for (const Vec3& y : dirs) {
      Vec3 grad_s, grad_a;
      Mat3 hess_s, hess_a;
      if (!SplitGradHess(spec, x, y, &grad_s, &hess_s, &grad_a, &hess_a, error)) {
        return false;
      }
      double fs = EvalSymmetricPart(spec, x, y);
      double fa = EvalAntisymmetricPart(spec, x, y);
      Mat3 g_fs = grad_s * grad_s.transpose() + fs * hess_s;
      g_fs = 0.5 * (g_fs + g_fs.transpose());
      Eigen::SelfAdjointEigenSolver<Mat3> es_fs(g_fs);
      if (es_fs.eigenvalues()[0] <= 1e-10) out->fs_finsler = false;

      Mat3 m1 = g_fs / mp1 - grad_a * grad_a.transpose();
      Eigen::SelfAdjointEigenSolver<Mat3> es1(0.5 * (m1 + m1.transpose()));
      double lam1 = es1.eigenvalues()[0];
      if (lam1 < out->cond1_min_eig) {
        out->cond1_min_eig = lam1;
        if (lam1 <= 1e-10) {
          out->has_witness = true;
          out->witness_x = x;
          out->witness_y = y;
          out->witness_w = es1.eigenvectors().col(0);
        }
      }

      Mat3 m2 = fa * hess_a;
      Eigen::SelfAdjointEigenSolver<Mat3> es2(0.5 * (m2 + m2.transpose()));
      double lam2 = es2.eigenvalues()[2];
      if (lam2 > out->cond2_max_eig) {
        out->cond2_max_eig = lam2;
        if (lam2 > 1e-10 && !out->has_witness) {
          out->has_witness = true;
          out->witness_x = x;
          out->witness_y = y;
          out->witness_w = es2.eigenvectors().col(2);
        }
      }
    }
  }
  out->holds = out->fs_finsler && out->cond1_min_eig > 1e-10 &&
               out->cond2_max_eig <= 1e-10;
  return true;
}

bool GaDirect(const MetricSpec& spec, GaDirectReport* out, std::string* error,
              int sample_count, const std::vector<Vec3>* x_grid, bool refine) {
  if (sample_count < 100) sample_count = 100;
  std::vector<Vec3> grid = x_grid ? *x_grid : DefaultXGrid(spec);
  std::vector<Vec3> dirs = FibonacciSphere(sample_count);
  out->sample_count = sample_count;
  out->min_eig = std::numeric_limits<double>::infinity();

  auto min_eig_at = [&](const Vec3& x, const Vec3& y) -> double {
    Mat3 g;
    std::string err;
    if (!SymmetrizedFundamentalTensor(spec, x, y, &g, &err)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(g);
    return es.eigenvalues()[0];
  };

  for (const Vec3& x : grid) {
    Vec3 best_dir = Vec3::UnitZ();
    double best = std::numeric_limits<double>::infinity();
    bool singular = false;
    for (const Vec3& y : dirs) {
      double lam = min_eig_at(x, y);
      if (!std::isfinite(lam)) {
        singular = true;
        best = -std::numeric_limits<double>::infinity();
        best_dir = y;
        break;
      }
      if (lam < best) {
        best = lam;
        best_dir = y;
      }
    }
    if (singular) {
      out->min_eig = -std::numeric_limits<double>::infinity();
      out->argmin_x = x;
      out->argmin_y = best_dir;
      out->note = "symmetrized tensor evaluation is singular at a sample";
      break;
    }
    if (refine) {
      auto fn = [&](const Vec3& d) {
        double lam = min_eig_at(x, d);
        return std::isfinite(lam) ? lam : -std::numeric_limits<double>::infinity();
      };
      double refined_val;
      Vec3 refined_dir = RefineSphereMinimum(fn, best_dir, &refined_val);
      if (refined_val < best) {
        best = refined_val;
        best_dir = refined_dir;
      }
      out->refined = true;
    }
    if (best < out->min_eig) {
      out->min_eig = best;
      out->argmin_y = best_dir;
      out->argmin_x = x;
    }
  }
  out->holds = out->min_eig > 1e-10;
  (void)error;
  return true;
}

bool CheckGa(const MetricSpec& spec, GAReport* out, std::string* error,
             int direct_samples, int sufficient_samples) {
  if (!GaDirect(spec, &out->direct, error, direct_samples)) return false;
  return SufficientCondition(spec, &out->sufficient, error, sufficient_samples);
}

namespace {

bool EvaluateThresholdRow(PhiFamily family, double b, int sample_count,
                          ThresholdRow* row, std::string* error) {
  row->b = b;
  MetricSpec spec = AlphaBetaSpec(family, std::abs(b));
  AlphaBetaCheckReport ab;
  if (!CheckAlphaBetaFinsler(spec, std::abs(b), &ab, error)) return false;
  row->finsler = ab.verdict;
  row->finsler_margin = std::min(ab.min_phi, ab.min_criterion);
  if (row->finsler) {
    GaDirectReport direct;
    if (!GaDirect(spec, &direct, error, sample_count)) return false;
    row->ga_direct = direct.holds;
    row->ga_margin = direct.min_eig;
    SufficientConditionReport suff;
    if (!SufficientCondition(spec, &suff, error, sample_count / 2)) return false;
    row->sufficient = suff.holds;
    row->sufficient_margin = std::min(suff.cond1_min_eig, -suff.cond2_max_eig);
  } else {
    // F itself fails; the derived checks are moot and reported as failing.
    row->ga_direct = false;
    row->sufficient = false;
    row->ga_margin = -std::numeric_limits<double>::infinity();
    row->sufficient_margin = -std::numeric_limits<double>::infinity();
  }
  row->verdict = row->finsler && row->ga_direct;
  return true;
}

}  // namespace

bool ThresholdScan(PhiFamily family, double b_lo, double b_hi, double tolerance,
                   ThresholdResult* out, std::string* error, int table_rows,
                   int sample_count) {
  if (!(b_lo >= 0.0) || !(b_hi > b_lo)) {
    if (error) *error = "threshold scan requires 0 <= b_lo < b_hi";
    return false;
  }
  if (!(tolerance > 0.0)) {
    if (error) *error = "threshold scan tolerance must be positive";
    return false;
  }
  if (table_rows < 3) table_rows = 3;
  out->family = PhiName(family);
  out->tolerance = tolerance;
  out->table.clear();
  for (int i = 0; i < table_rows; ++i) {
    double b = b_lo + (b_hi - b_lo) * i / (table_rows - 1);
    ThresholdRow row;
    if (!EvaluateThresholdRow(family, b, sample_count, &row, error)) return false;
    out->table.push_back(row);
  }
  // The verdict sequence must be a single true block followed by a single
  // false block.
  int flips = 0;
  for (std::size_t i = 1; i < out->table.size(); ++i) {
    if (out->table[i].verdict != out->table[i - 1].verdict) ++flips;
  }
  out->monotone = flips == 1 && out->table.front().verdict &&
                  !out->table.back().verdict;
  if (!out->table.front().verdict) {
    if (error) {
      *error = "threshold scan precondition failed: verdict at b_lo = " +
               std::to_string(b_lo) + " is already false";
    }
    return false;
  }
  if (out->table.back().verdict) {
    if (error) {
      *error = "threshold scan precondition failed: verdict at b_hi = " +
               std::to_string(b_hi) + " is still true";
    }
    return false;
  }
  if (!out->monotone) {
    if (error) {
      *error = "threshold scan is inconsistent: the verdict flips more than "
               "once along the table (see attached rows)";
    }
    return false;
  }
  // Bisection between the flip's bracketing pair.
  double lo = b_lo, hi = b_hi;
  for (std::size_t i = 1; i < out->table.size(); ++i) {
    if (out->table[i - 1].verdict && !out->table[i].verdict) {
      lo = out->table[i - 1].b;
      hi = out->table[i].b;
      break;
    }
  }
  while (hi - lo > tolerance) {
    double mid = 0.5 * (lo + hi);
    ThresholdRow row;
    if (!EvaluateThresholdRow(family, mid, sample_count, &row, error)) {
      return false;
    }
    if (row.verdict) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out->bracket_lo = lo;
  out->bracket_hi = hi;
  out->critical_b = 0.5 * (lo + hi);
  return true;
}

double OddEvenBinomialGapAdmissibleLimit(int m) {
  if (m <= 2 || m % 2 == 1) return 1.0;
  return 1.0 / std::sqrt(static_cast<double>(m - 1));
}

namespace {

// Pascal-triangle binomial row in extended precision.
std::vector<__int128> BinomialRow(int m) {
  std::vector<__int128> row(static_cast<std::size_t>(m) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= m; ++i) {
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  }
  return row;
}

}  // namespace

bool OddEvenBinomialGap(double a, int m, double* out, std::string* error) {
  if (m < 1) {
    if (error) *error = "polynomial order m must be >= 1";
    return false;
  }
  double limit = OddEvenBinomialGapAdmissibleLimit(m);
  if (!(a > 0.0) || !(a < limit)) {
    if (error) {
      *error = "argument a = " + std::to_string(a) +
               " is outside the admissible interval (0, " + std::to_string(limit) +
               ") for m = " + std::to_string(m);
    }
    return false;
  }
  std::vector<__int128> row = BinomialRow(m);
  // Horner in a^2 over the exact integer coefficients C(m,2k+1) - C(m,2k).
  double a2 = a * a;
  double acc = 0.0;
  int kmax = m / 2;
  for (int k = kmax; k >= 0; --k) {
    __int128 odd = (2 * k + 1 <= m) ? row[static_cast<std::size_t>(2 * k + 1)] : 0;
    __int128 even = row[static_cast<std::size_t>(2 * k)];
    double coeff = static_cast<double>(odd - even);
    acc = acc * a2 + coeff;
  }
  *out = acc;
  return true;
}

bool OddEvenBinomialGapRational(int m, long long a_num, long long a_den,
                                long long* num, long long* den,
                                std::string* error) {
  if (m < 1) {
    if (error) *error = "polynomial order m must be >= 1";
    return false;
  }
  if (a_den <= 0 || a_num <= 0) {
    if (error) *error = "rational argument must be positive";
    return false;
  }
  double a = static_cast<double>(a_num) / static_cast<double>(a_den);
  double limit = OddEvenBinomialGapAdmissibleLimit(m);
  if (!(a < limit)) {
    if (error) {
      *error = "argument " + std::to_string(a) +
               " is outside the admissible interval (0, " + std::to_string(limit) +
               ") for m = " + std::to_string(m);
    }
    return false;
  }
  std::vector<__int128> row = BinomialRow(m);
  int kmax = m / 2;
  __int128 n2 = static_cast<__int128>(a_num) * a_num;
  __int128 d2 = static_cast<__int128>(a_den) * a_den;
  // f = sum_k coeff_k (n2/d2)^k = N / d2^kmax.
  __int128 acc_num = 0;
  __int128 d_pow = 1;  // d2^(kmax - k) built from the top
  for (int k = kmax; k >= 0; --k) {
    __int128 odd = (2 * k + 1 <= m) ? row[static_cast<std::size_t>(2 * k + 1)] : 0;
    __int128 even = row[static_cast<std::size_t>(2 * k)];
    __int128 coeff = odd - even;
    __int128 n_pow = 1;
    for (int p = 0; p < k; ++p) n_pow *= n2;
    acc_num += coeff * n_pow * d_pow;
    if (k > 0) d_pow *= d2;
  }
  __int128 acc_den = 1;
  for (int p = 0; p < kmax; ++p) acc_den *= d2;
  // Reduce to lowest terms (the denominator is a perfect power, so common
  // factors are routine).
  __int128 g_num = acc_num < 0 ? -acc_num : acc_num;
  __int128 g_den = acc_den;
  while (g_den != 0) {
    __int128 r = g_num % g_den;
    g_num = g_den;
    g_den = r;
  }
  if (g_num > 1) {
    acc_num /= g_num;
    acc_den /= g_num;
  }
  const __int128 ll_max = std::numeric_limits<long long>::max();
  if (acc_num > ll_max || acc_num < -ll_max || acc_den > ll_max) {
    if (error) *error = "rational evaluation overflows 64-bit integers";
    return false;
  }
  *num = static_cast<long long>(acc_num);
  *den = static_cast<long long>(acc_den);
  return true;
}

}  // namespace finsler
