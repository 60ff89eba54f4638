#pragma once

#include <cmath>

namespace gmshadow::detail {

/// std::pow with shortcuts for the small integer and half-integer exponents used by presets.
inline double fast_pow(double x, double m) {
  if (m == 1.0) return x;
  if (m == 2.0) return x * x;
  if (m == 3.0) return x * x * x;
  if (m == 4.0) {
    const double x2 = x * x;
    return x2 * x2;
  }
  if (m == 0.0) return 1.0;
  if (m == 0.5) return std::sqrt(x);
  if (m == -1.0) return 1.0 / x;
  return std::pow(x, m);
}

}  // namespace gmshadow::detail
