#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "esdg/diagnostics.hpp"
#include "esdg/euler.hpp"
#include "esdg/mesh.hpp"
#include "esdg/operators.hpp"
#include "esdg/solver.hpp"

namespace esdg::harness {

using Euler1 = EulerModel<1>;
using Euler2 = EulerModel<2>;

struct Discretization {
  int N = 1;
  QuadratureMode quad = QuadratureMode::gauss2;
  FluxMode flux = FluxMode::eclf;
  double gamma = 1.4;
  double log_eps = kDefaultLogMeanTolerance;
  int threads = 1;
  bool entropy_projection = true;
};

template <int Dim>
EulerModel<Dim> euler_model(const Discretization& d) {
  EulerModel<Dim> m;
  m.gamma = d.gamma;
  m.log_eps = d.log_eps;
  return m;
}

inline SolverOptions solver_options(const Discretization& d) {
  SolverOptions o;
  o.flux = d.flux;
  o.entropy_projection = d.entropy_projection;
  o.threads = d.threads;
  return o;
}

inline DGSolver<Euler1> euler_1d(const Discretization& d, int K, double a, double b, bool periodic) {
  return DGSolver<Euler1>(euler_model<1>(d), build_operator_set(ElementType::interval, d.N, d.quad),
                          build_mesh_1d(K, a, b, periodic), solver_options(d));
}

/// Kx x Ky quadrilaterals, each split into two triangles.
inline DGSolver<Euler2> euler_2d(const Discretization& d, int Kx, int Ky, double x0, double x1, double y0, double y1,
                                 bool periodic) {
  return DGSolver<Euler2>(euler_model<2>(d), build_operator_set(ElementType::triangle, d.N, QuadratureMode::tri2n),
                          build_tri_mesh(Kx, Ky, x0, x1, y0, y1, periodic, periodic), solver_options(d));
}

// Initial data --------------------------------------------------------------

/// ρ = 3 for |x| < 1/2 (and |y| < 1/2 in 2D), else 2; u = 0; p = ρ^γ.
template <int Dim>
typename EulerModel<Dim>::State pulse(const EulerModel<Dim>& m, const Eigen::VectorXd& x) {
  bool inside = true;
  for (int i = 0; i < Dim; ++i) inside = inside && std::abs(x(i)) < 0.5;
  const double rho = inside ? 3.0 : 2.0;
  return m.from_primitive(rho, EulerModel<Dim>::Vec::Zero(), std::pow(rho, m.gamma));
}

inline Euler1::State sod_initial(const Euler1& m, double x) {
  return x < 0.0 ? m.from_primitive(1.0, Euler1::Vec(0.0), 1.0) : m.from_primitive(0.125, Euler1::Vec(0.0), 0.1);
}

inline Euler1::State sine_shock_initial(const Euler1& m, double x) {
  if (x < -4.0) return m.from_primitive(3.857143, Euler1::Vec(2.629369), 10.3333);
  return m.from_primitive(1.0 + 0.2 * std::sin(5.0 * x), Euler1::Vec(0.0), 1.0);
}

/// Four-quadrant data, replicated on the enlarged periodic square.
inline Euler2::State riemann_2d_initial(const Euler2& m, double x, double y) {
  if (x >= 0.0 && y >= 0.0) return m.from_primitive(0.5313, Euler2::Vec(0.0, 0.0), 0.4);
  if (x < 0.0 && y >= 0.0) return m.from_primitive(1.0, Euler2::Vec(0.7276, 0.0), 1.0);
  if (x < 0.0 && y < 0.0) return m.from_primitive(0.8, Euler2::Vec(0.0, 0.0), 1.0);
  return m.from_primitive(1.0, Euler2::Vec(0.0, 0.7276), 1.0);
}

/// Smooth data for the entropy projection accuracy study.
inline Euler1::State projection_data_1d(double x, double rho0 = 2.0, double E0 = 2.0) {
  const double pi = std::numbers::pi;
  const double rho = rho0 + std::exp(0.5 * x) * std::sin(pi * x);
  const double m = std::sin(pi * x);
  return Euler1::State(rho, m, E0 + 0.5 * m * m / rho);
}

inline Euler2::State projection_data_2d(double x, double y, double rho0 = 2.0, double E0 = 2.0) {
  const double pi = std::numbers::pi;
  const double s = std::sin(pi * x) * std::sin(pi * y);
  const double rho = rho0 + std::exp(0.5 * (x + y)) * s;
  Euler2::State u;
  u << rho, s, s, E0 + s * s / rho;
  return u;
}

}  // namespace esdg::harness
