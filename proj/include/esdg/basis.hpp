#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "esdg/error.hpp"

namespace esdg {

enum class ElementType { interval, triangle };

inline int reference_dim(ElementType type) { return type == ElementType::interval ? 1 : 2; }

inline int basis_size(ElementType type, int degree) {
  return type == ElementType::interval ? degree + 1 : (degree + 1) * (degree + 2) / 2;
}

/// Reference measure: 2 for both [-1,1] and the right triangle with legs 2.
inline constexpr double kReferenceMeasure = 2.0;

namespace detail {

// Jacobi polynomial P_n^{(alpha,beta)} normalized to unit L2 norm under the
// weight (1-x)^alpha (1+x)^beta on [-1,1].
inline double jacobi_normalized(double x, double alpha, double beta, int n) {
  const double ab = alpha + beta;
  const double gamma0 = std::pow(2.0, ab + 1.0) / (ab + 1.0) * std::tgamma(alpha + 1.0) *
                        std::tgamma(beta + 1.0) / std::tgamma(ab + 1.0);
  double p_prev = 1.0 / std::sqrt(gamma0);
  if (n == 0) return p_prev;
  const double gamma1 = (alpha + 1.0) * (beta + 1.0) / (ab + 3.0) * gamma0;
  double p = ((ab + 2.0) * x / 2.0 + (alpha - beta) / 2.0) / std::sqrt(gamma1);
  if (n == 1) return p;
  double a_old = 2.0 / (2.0 + ab) * std::sqrt((alpha + 1.0) * (beta + 1.0) / (ab + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + ab;
    const double a_new = 2.0 / (h1 + 2.0) *
                         std::sqrt((i + 1.0) * (i + 1.0 + ab) * (i + 1.0 + alpha) * (i + 1.0 + beta) /
                                   (h1 + 1.0) / (h1 + 3.0));
    const double b_new = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
    const double p_next = (-a_old * p_prev + (x - b_new) * p) / a_new;
    p_prev = p;
    p = p_next;
    a_old = a_new;
  }
  return p;
}

inline double jacobi_normalized_derivative(double x, double alpha, double beta, int n) {
  if (n == 0) return 0.0;
  return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi_normalized(x, alpha + 1.0, beta + 1.0, n - 1);
}

// Collapsed coordinates of the reference triangle.
inline void triangle_to_collapsed(double r, double s, double& a, double& b) {
  a = (std::abs(1.0 - s) > 1e-14) ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
  b = s;
}

inline double dubiner(double a, double b, int i, int j) {
  return std::sqrt(2.0) * jacobi_normalized(a, 0, 0, i) * jacobi_normalized(b, 2.0 * i + 1.0, 0, j) *
         std::pow(1.0 - b, i);
}

inline void dubiner_gradient(double a, double b, int i, int j, double& dr, double& ds) {
  const double fa = jacobi_normalized(a, 0, 0, i);
  const double dfa = jacobi_normalized_derivative(a, 0, 0, i);
  const double gb = jacobi_normalized(b, 2.0 * i + 1.0, 0, j);
  const double dgb = jacobi_normalized_derivative(b, 2.0 * i + 1.0, 0, j);
  const double half_1mb = 0.5 * (1.0 - b);

  dr = dfa * gb;
  if (i > 0) dr *= std::pow(half_1mb, i - 1);

  ds = dfa * (gb * (0.5 * (1.0 + a)));
  if (i > 0) ds *= std::pow(half_1mb, i - 1);
  double tmp = dgb * std::pow(half_1mb, i);
  if (i > 0) tmp -= 0.5 * i * gb * std::pow(half_1mb, i - 1);
  ds += fa * tmp;

  const double scale = std::pow(2.0, i + 0.5);
  dr *= scale;
  ds *= scale;
}

}  // namespace detail

/// Orthonormal modal basis evaluated at `points` (one row per point).
/// Interval: normalized Legendre. Triangle: orthonormal Koornwinder-Dubiner,
/// ordered by (i, j) with i the collapsed-a degree. Points outside the
/// reference element are extrapolated without complaint.
inline Eigen::MatrixXd basis_eval(ElementType type, int degree, const Eigen::MatrixXd& points) {
  const int np = basis_size(type, degree);
  Eigen::MatrixXd V(points.rows(), np);
  for (Eigen::Index p = 0; p < points.rows(); ++p) {
    if (type == ElementType::interval) {
      for (int j = 0; j <= degree; ++j) V(p, j) = detail::jacobi_normalized(points(p, 0), 0, 0, j);
    } else {
      double a, b;
      detail::triangle_to_collapsed(points(p, 0), points(p, 1), a, b);
      int m = 0;
      for (int i = 0; i <= degree; ++i)
        for (int j = 0; j <= degree - i; ++j) V(p, m++) = detail::dubiner(a, b, i, j);
    }
  }
  return V;
}

/// Reference-coordinate derivatives of the basis; entry d holds d/dx̂_d.
inline std::vector<Eigen::MatrixXd> basis_grad_eval(ElementType type, int degree, const Eigen::MatrixXd& points) {
  const int np = basis_size(type, degree);
  const int dim = reference_dim(type);
  std::vector<Eigen::MatrixXd> grads(dim, Eigen::MatrixXd(points.rows(), np));
  for (Eigen::Index p = 0; p < points.rows(); ++p) {
    if (type == ElementType::interval) {
      for (int j = 0; j <= degree; ++j) grads[0](p, j) = detail::jacobi_normalized_derivative(points(p, 0), 0, 0, j);
    } else {
      double a, b;
      detail::triangle_to_collapsed(points(p, 0), points(p, 1), a, b);
      int m = 0;
      for (int i = 0; i <= degree; ++i)
        for (int j = 0; j <= degree - i; ++j) {
          detail::dubiner_gradient(a, b, i, j, grads[0](p, m), grads[1](p, m));
          ++m;
        }
    }
  }
  return grads;
}

}  // namespace esdg
