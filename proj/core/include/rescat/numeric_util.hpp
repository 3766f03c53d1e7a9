#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace rescat {

/// Map x into (-period/2, period/2].
inline double wrap_to_period(double x, double period) {
  double y = std::remainder(x, period);
  if (y <= -period / 2) y += period;
  return y;
}

/// Nearest-branch continuation of a sequence of principal values: each entry
/// is shifted by a multiple of `period` so consecutive entries differ by less
/// than period/2.  The first entry is wrapped toward `anchor`.
inline std::vector<double> unwrap_sequence(std::span<const double> values, double period,
                                           double anchor = 0.0) {
  std::vector<double> out(values.size());
  double prev = anchor;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = prev + wrap_to_period(values[i] - prev, period);
    prev = out[i];
  }
  return out;
}

inline constexpr double kPi = std::numbers::pi;

}  // namespace rescat
