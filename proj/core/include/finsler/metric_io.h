#pragma once

#include "finsler/metric.h"

#include <string>

namespace finsler {

// Parses a metric description in key = value form (one pair per line, '#'
// comments, values whitespace- or comma-separated).  Recognized keys:
//   family     euclidean | randers | alpha-beta | perturbed-quartic | composite
//   phi        randers | two-order | matsumoto | polynomial | odd-reciprocal-root
//   phi_coeffs list of reals (polynomial / odd-reciprocal-root families)
//   b          3 reals
//   epsilon    1 real > 0
//   drift_amp  3 reals (composite)
//   drift_freq 3 reals (composite)
//   m          positive integer (default 2)
// `family` is required; unknown keys and malformed values are errors.
bool ParseMetricSpecText(const std::string& text, MetricSpec* spec,
                         std::string* error);

// Same, reading from a file.
bool ParseMetricSpecFile(const std::string& path, MetricSpec* spec,
                         std::string* error);

}  // namespace finsler
