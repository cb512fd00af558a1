#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace rmp {

/// log(e^a + e^b), exact for -inf arguments.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

/// log(sum_i e^{x_i}); -inf for an empty or all -inf input.
inline double log_sum(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace rmp
