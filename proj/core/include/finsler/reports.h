#pragma once

#include "finsler/cartan.h"
#include "finsler/gacheck.h"
#include "finsler/metric.h"
#include "finsler/plateau.h"

#include <cstdint>
#include <string>

namespace finsler {

// Provenance stamped into every generated document: the canonical
// configuration text, its hash, and the seed driving any sampling.  Stamping
// both lets a reader re-run the exact configuration and byte-compare.
struct ReportContext {
  std::string config_text;
  std::uint64_t seed = 0;
};

// Aggregate outcome of the Radon identity suite: the closed-form transform of
// the inverse-square norm, area/transform reciprocity, and the derivative-rule
// residual.
struct RadonVerifyReport {
  double inverse_square_max_error = 0.0;  // |R[|.|^-2](Z) - 1/|Z||
  double reciprocity_max_error = 0.0;     // |A(x,Z) * R[F^-m](Z) - 1|
  double diff_rule_max_residual = 0.0;
  int sample_count = 0;
  int quad_n = 0;
  double tolerance = 0.0;  // bound applied to the derivative-rule residual
  bool verdict = false;
};

// JSON serializers.  Output is deterministic: fixed key order, no timestamps,
// and shortest round-trip number formatting, so re-running a configuration
// reproduces the files byte for byte.
std::string FinslerReportJson(const FinslerCheckReport& report,
                              const ReportContext& ctx);
std::string GaReportJson(const GAReport& report, const ReportContext& ctx);
std::string EllipticityReportJson(const EllipticityReport& report,
                                  const ReportContext& ctx);
std::string DominanceReportJson(const DominanceReport& report,
                                const ReportContext& ctx);
std::string ThresholdResultJson(const ThresholdResult& result,
                                const ReportContext& ctx);
std::string SolveReportJson(const SolveResult& result, const ReportContext& ctx);
std::string RadonVerifyReportJson(const RadonVerifyReport& report,
                                  const ReportContext& ctx);

// CSV table for a threshold scan: provenance in leading '#' comment lines,
// then columns family,b,finsler,ga_direct,sufficient,finsler_margin,
// ga_margin,sufficient_margin (booleans as 0/1, numbers as %.17g).
std::string ThresholdResultCsv(const ThresholdResult& result,
                               const ReportContext& ctx);

// Writes content to path; false with a message on I/O failure.
bool WriteTextFile(const std::string& path, const std::string& content,
                   std::string* error);

}  // namespace finsler
