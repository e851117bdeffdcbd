#pragma once

#include <cmath>

#include "esdg/error.hpp"

namespace esdg {

inline constexpr double kDefaultLogMeanTolerance = 1e-4;

/// Logarithmic mean (a-b)/(ln a - ln b).
///
/// Written in the Ismail-Roe form (a+b)/(2F) with f = (a-b)/(a+b) and
/// F = ln(a/b)/(2f). When f^2 < eps, F is replaced by its truncated series
/// 1 + f^2/3 + f^4/5 + f^6/7.
inline double log_mean(double a, double b, double eps = kDefaultLogMeanTolerance) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::invalid_state, "log_mean requires positive arguments");
  const double f = (a - b) / (a + b);
  const double u = f * f;
  double F;
  if (u < eps) {
    F = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0)));
  } else {
    F = std::log(a / b) / (2.0 * f);
  }
  return (a + b) / (2.0 * F);
}

}  // namespace esdg
