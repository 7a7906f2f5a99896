#pragma once

#include "finsler/metric.h"
#include "finsler/types.h"

#include <string>
#include <vector>

namespace finsler {

// Sufficient criterion for the m-harmonic symmetrization of F to be a Finsler
// metric, checked samplewise via eigen-analysis:
//   (1) g_{F_s}/(m+1) - grad F_a (x) grad F_a  is positive definite, and
//   (2) F_a * Hess F_a                          is negative semidefinite,
// where F = F_s + F_a is the even/odd split.  Condition (1) is equivalent to
// (grad F_a . w)^2 < g_{F_s} w . w / (m+1) for every direction w; eigenvalues
// are examined directly, and w-samples are used only to report a witness.
struct SufficientConditionReport {
  bool holds = false;
  bool fs_finsler = false;     // g_{F_s} positive definite on the sample
  double cond1_min_eig = 0.0;  // min eig of g_{F_s}/(m+1) - grad F_a (x) grad F_a
  double cond2_max_eig = 0.0;  // max eig of F_a * Hess F_a
  int sample_count = 0;
  bool has_witness = false;    // witness filled when the criterion fails
  Vec3 witness_x = Vec3::Zero();
  Vec3 witness_y = Vec3::Zero();
  Vec3 witness_w = Vec3::Zero();
};

bool SufficientCondition(const MetricSpec& spec, SufficientConditionReport* out,
                         std::string* error, int sample_count = 200,
                         const std::vector<Vec3>* x_grid = nullptr);

// Direct check: the fundamental tensor of the m-harmonic symmetrization is
// positive definite (margin 1e-10) at every sampled (x, y).  The coarse
// Fibonacci scan is refined with a deterministic local pattern search so the
// reported minimum eigenvalue is not biased by the lattice spacing.
struct GaDirectReport {
  bool holds = false;
  double min_eig = 0.0;
  Vec3 argmin_y = Vec3::Zero();
  Vec3 argmin_x = Vec3::Zero();
  int sample_count = 0;
  bool refined = false;
  std::string note;  // filled when a sample evaluation was singular
};

bool GaDirect(const MetricSpec& spec, GaDirectReport* out, std::string* error,
              int sample_count = 500, const std::vector<Vec3>* x_grid = nullptr,
              bool refine = true);

// Combined report (direct + sufficient); the sufficient criterion implies the
// direct one, which is exercised as a randomized implication test.
struct GAReport {
  GaDirectReport direct;
  SufficientConditionReport sufficient;
};

bool CheckGa(const MetricSpec& spec, GAReport* out, std::string* error,
             int direct_samples = 500, int sufficient_samples = 200);

// ---------------------------------------------------------------------------
// Critical drift-norm scan for alpha-beta families.

struct ThresholdRow {
  double b = 0.0;
  bool finsler = false;       // dimension-3 alpha-beta positivity criterion
  bool ga_direct = false;
  bool sufficient = false;
  double finsler_margin = 0.0;     // min of the positivity criterion
  double ga_margin = 0.0;          // min eigenvalue of g_{F_sym}
  double sufficient_margin = 0.0;  // min(cond1 min eig, -cond2 max eig)
  bool verdict = false;            // finsler && ga_direct
};

struct ThresholdResult {
  std::string family;
  double critical_b = 0.0;   // midpoint of the final bisection bracket
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double tolerance = 0.0;    // final bracket width target
  std::vector<ThresholdRow> table;
  bool monotone = false;     // single true->false flip along the table
};

// Locates the largest drift norm |b| for which the metric F = alpha*phi(b.y/
// alpha) both satisfies the alpha-beta positivity criterion and has a positive
// definite symmetrized fundamental tensor.  Preconditions: verdict(b_lo) true,
// verdict(b_hi) false.  The verdict table must flip exactly once; otherwise
// the scan fails as inconsistent with the full table attached to *out.
bool ThresholdScan(PhiFamily family, double b_lo, double b_hi, double tolerance,
                   ThresholdResult* out, std::string* error,
                   int table_rows = 13, int sample_count = 500);

// ---------------------------------------------------------------------------
// Auxiliary polynomial with integer binomial coefficients:
//   f(a, m) = sum_{k >= 0} [C(m, 2k+1) - C(m, 2k)] a^(2k).
// f(., 1) vanishes identically; f is even in a.  Admissible range: 0 < a < 1
// for m odd or m <= 2, else 0 < a < 1/sqrt(m-1); outside it the call is a
// domain error.
bool OddEvenBinomialGap(double a, int m, double* out, std::string* error);

// Exact rational evaluation at a = a_num/a_den (binomials and powers in
// extended integer precision; fails on overflow or inadmissible a).
bool OddEvenBinomialGapRational(int m, long long a_num, long long a_den,
                                long long* num, long long* den,
                                std::string* error);

// Upper end of the admissible a-interval for a given m.
double OddEvenBinomialGapAdmissibleLimit(int m);

}  // namespace finsler
