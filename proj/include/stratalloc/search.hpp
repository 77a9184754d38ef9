#pragma once

#include <cmath>
#include <string>

#include "stratalloc/errors.hpp"

namespace stratalloc {

struct GoldenSectionResult {
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;

  double midpoint() const { return 0.5 * (lower + upper); }
};

/// Golden-section minimization on [a, b] until the bracket is no wider than
/// `width`. Interior points sit at ratio (√5 - 1)/2; on a tie the left end
/// moves. Each step reuses the surviving probe's value.
template <class Objective>
GoldenSectionResult golden_section_minimize(Objective&& f, double a, double b, double width) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x_left = b - ratio * (b - a);
  double x_right = a + ratio * (b - a);
  double f_left = f(x_left);
  double f_right = f(x_right);
  int iterations = 0;
  while (b - a > width) {
    ++iterations;
    if (f_left < f_right) {
      b = x_right;
      x_right = x_left;
      f_right = f_left;
      x_left = b - ratio * (b - a);
      f_left = f(x_left);
    } else {
      a = x_left;
      x_left = x_right;
      f_left = f_right;
      x_right = a + ratio * (b - a);
      f_right = f(x_right);
    }
  }
  return {a, b, iterations};
}

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  ///< |g(root)|
  int iterations = 0;
};

/// Bisection for a sign change of g on [lo, hi], run until the bracket
/// stops shrinking in floating point. Throws RootNotFound without a sign change.
template <class Function>
RootResult bisect_root(Function&& g, double lo, double hi, const std::string& what) {
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0) return {lo, 0.0, 0};
  if (g_hi == 0.0) return {hi, 0.0, 0};
  if (std::signbit(g_lo) == std::signbit(g_hi)) {
    throw RootNotFound(what + ": no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  int iterations = 0;
  while (iterations < 2000) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    ++iterations;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return {mid, 0.0, iterations};
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  const double g_final_hi = g(hi);
  if (std::fabs(g_lo) <= std::fabs(g_final_hi)) return {lo, std::fabs(g_lo), iterations};
  return {hi, std::fabs(g_final_hi), iterations};
}

}  // namespace stratalloc
