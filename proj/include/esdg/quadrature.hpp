#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "esdg/detail/triangle_rules.hpp"
#include "esdg/error.hpp"

namespace esdg {

/// Points (one row per point, one column per reference coordinate) and
/// positive weights in reference-measure units.
struct QuadratureRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
  int exactness_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

namespace detail {

// Legendre P_n and its derivative by the three-term recurrence.
inline std::array<double, 2> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  // Valid away from the endpoints; callers only need interior points.
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace detail

inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "gauss_legendre needs n >= 1, got " + std::to_string(n));
  QuadratureRule rule;
  rule.points.resize(n, 1);
  rule.weights.resize(n);
  rule.exactness_degree = 2 * n - 1;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, refined by Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = detail::legendre_with_derivative(n, x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points(i, 0) = -x;
    rule.points(n - 1 - i, 0) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.points(n / 2, 0) = 0.0;
  return rule;
}

inline QuadratureRule gauss_lobatto(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "gauss_lobatto needs n >= 2, got " + std::to_string(n));
  QuadratureRule rule;
  rule.points.resize(n, 1);
  rule.weights.resize(n);
  rule.exactness_degree = 2 * n - 3;
  const int m = n - 1;  // interior nodes are the roots of P'_m
  const double wend = 2.0 / (n * (n - 1.0));
  rule.points(0, 0) = -1.0;
  rule.points(m, 0) = 1.0;
  rule.weights(0) = wend;
  rule.weights(m) = wend;
  for (int i = 1; i < (n + 1) / 2; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      // (1-x^2) P_m'' = 2x P_m' - m(m+1) P_m
      const auto [p, dp] = detail::legendre_with_derivative(m, x);
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = detail::legendre_with_derivative(m, x)[0];
    const double w = wend / (p * p);
    rule.points(i, 0) = x;
    rule.points(m - i, 0) = -x;
    rule.weights(i) = w;
    rule.weights(m - i) = w;
  }
  if (n % 2 == 1) rule.points(m / 2, 0) = 0.0;
  return rule;
}

/// Largest exactness degree available from `triangle_quadrature`.
inline constexpr int kMaxTriangleDegree = 12;

/// Positive-weight symmetric rule on the reference triangle with vertices
/// (-1,-1), (1,-1), (-1,1). Returns the smallest tabulated rule whose
/// exactness is at least `degree`.
inline QuadratureRule triangle_quadrature(int degree) {
  if (degree < 1) throw Error(ErrorKind::invalid_argument, "triangle_quadrature needs degree >= 1");
  if (degree > kMaxTriangleDegree)
    throw Error(ErrorKind::unsupported_degree,
                "no positive-weight triangle rule tabulated for degree " + std::to_string(degree));

  using detail::TriangleOrbit;
  std::span<const TriangleOrbit> orbits;
  int exact = 0;
  switch (degree) {
    case 1: orbits = detail::kDegree1; exact = 1; break;
    case 2: orbits = detail::kDegree2; exact = 2; break;
    case 3:
    case 4: orbits = detail::kDegree4; exact = 4; break;
    case 5: orbits = detail::kDegree5; exact = 5; break;
    case 6: orbits = detail::kDegree6; exact = 6; break;
    case 7:
    case 8: orbits = detail::kDegree8; exact = 8; break;
    case 9: orbits = detail::kDegree9; exact = 9; break;
    case 10: orbits = detail::kDegree10; exact = 10; break;
    default: orbits = detail::kDegree12; exact = 12; break;
  }

  std::vector<std::array<double, 3>> bary;
  std::vector<double> w;
  for (const auto& orb : orbits) {
    switch (orb.kind) {
      case detail::OrbitKind::centroid:
        bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        w.push_back(orb.weight);
        break;
      case detail::OrbitKind::s21: {
        const double a = orb.a, c = 1.0 - 2.0 * orb.a;
        for (auto p : {std::array{a, a, c}, std::array{a, c, a}, std::array{c, a, a}}) {
          bary.push_back(p);
          w.push_back(orb.weight / 3.0);
        }
        break;
      }
      case detail::OrbitKind::s111: {
        const double a = orb.a, b = orb.b, c = 1.0 - orb.a - orb.b;
        for (auto p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                       std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}}) {
          bary.push_back(p);
          w.push_back(orb.weight / 6.0);
        }
        break;
      }
    }
  }

  QuadratureRule rule;
  const int n = static_cast<int>(w.size());
  rule.points.resize(n, 2);
  rule.weights.resize(n);
  rule.exactness_degree = exact;
  for (int i = 0; i < n; ++i) {
    const auto& l = bary[i];
    rule.points(i, 0) = -l[0] + l[1] - l[2];
    rule.points(i, 1) = -l[0] - l[1] + l[2];
    rule.weights(i) = 2.0 * w[i];
  }
  return rule;
}

}  // namespace esdg
