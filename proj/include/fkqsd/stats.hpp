#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace fkqsd {

struct MeanError {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Mean and standard error by shifted-data sums: identical samples give
/// exactly their common value and a zero error.
inline MeanError mean_and_error(std::span<const double> x) {
  MeanError out;
  if (x.empty()) return out;
  const double ref = x[0];
  double s = 0.0;
  double s2 = 0.0;
  for (double v : x) {
    const double y = v - ref;
    s += y;
    s2 += y * y;
  }
  const auto n = static_cast<double>(x.size());
  const double my = s / n;
  out.mean = ref + my;
  if (x.size() > 1) {
    const double var = std::max(0.0, (s2 - n * my * my) / (n - 1.0));
    out.standard_error = std::sqrt(var / n);
  }
  return out;
}

}  // namespace fkqsd
