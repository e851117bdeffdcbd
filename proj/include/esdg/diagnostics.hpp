#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "esdg/basis.hpp"
#include "esdg/error.hpp"
#include "esdg/euler.hpp"
#include "esdg/quadrature.hpp"
#include "esdg/solver.hpp"

namespace esdg {

struct L2Error {
  double combined = 0.0;     // sqrt of the sum of squared per-field errors
  Eigen::VectorXd fields;    // per conserved variable
};

/// Volume rule used for error evaluation: (N+5)-point Gauss in 1D, degree
/// 2N+2 on triangles (capped at the largest tabulated rule).
inline QuadratureRule error_rule(ElementType type, int N) {
  if (type == ElementType::interval) return gauss_legendre(N + 5);
  return triangle_quadrature(std::min(2 * N + 2, kMaxTriangleDegree));
}

/// L2 error of the modal solution against a pointwise exact solution.
template <class Model>
L2Error l2_error(const DGSolver<Model>& solver, const Field& u,
                 const std::function<typename Model::State(const Eigen::VectorXd&)>& exact,
                 const QuadratureRule& rule) {
  const auto& ops = solver.ops();
  const Eigen::MatrixXd V = basis_eval(ops.elem, rule.points);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(Model::num_vars);
  for (int k = 0; k < solver.num_elements(); ++k) {
    const Eigen::MatrixXd uq = V * u[static_cast<std::size_t>(k)];
    const Eigen::MatrixXd x = solver.mesh().map_points(k, rule.points);
    const double J = solver.mesh().geometry[static_cast<std::size_t>(k)].J;
    for (int a = 0; a < rule.size(); ++a) {
      const typename Model::State ex = exact(x.row(a).transpose());
      const Eigen::VectorXd d = uq.row(a).transpose() - ex;
      sq += (J * rule.weights(a)) * d.cwiseAbs2();
    }
  }
  return {std::sqrt(sq.sum()), sq.cwiseSqrt()};
}

template <class Model>
L2Error l2_error(const DGSolver<Model>& solver, const Field& u,
                 const std::function<typename Model::State(const Eigen::VectorXd&)>& exact) {
  return l2_error(solver, u, exact, error_rule(solver.ops().elem.type, solver.ops().elem.degree));
}

/// ‖u - u(Π_N v)‖ with Π_N the quadrature L2 projection, evaluated with
/// `rule` (independent of the solver's volume rule).
template <class Model>
L2Error entropy_projection_error(const Model& model, const OperatorSet& ops, const Mesh& mesh, const Field& u,
                                 const QuadratureRule& rule) {
  using State = typename Model::State;
  const Eigen::MatrixXd V = basis_eval(ops.elem, rule.points);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(Model::num_vars);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const Eigen::MatrixXd& uk = u[static_cast<std::size_t>(k)];
    const Eigen::MatrixXd uq = ops.Vq * uk;
    Eigen::MatrixXd vq(uq.rows(), Model::num_vars);
    for (int a = 0; a < uq.rows(); ++a) vq.row(a) = model.entropy_vars(State(uq.row(a).transpose())).transpose();
    const Eigen::MatrixXd vh = ops.Pq * vq;
    const Eigen::MatrixXd ue = V * uk, ve = V * vh;
    const double J = mesh.geometry[static_cast<std::size_t>(k)].J;
    for (int a = 0; a < rule.size(); ++a) {
      const State ut = model.from_entropy_vars(State(ve.row(a).transpose()));
      const Eigen::VectorXd d = ue.row(a).transpose() - ut;
      sq += (J * rule.weights(a)) * d.cwiseAbs2();
    }
  }
  return {std::sqrt(sq.sum()), sq.cwiseSqrt()};
}

/// Element averages, one row per element.
inline Eigen::MatrixXd cell_averages(const OperatorSet& ops, const Field& u) {
  const int K = static_cast<int>(u.size());
  Eigen::MatrixXd avg(K, u.empty() ? 0 : u.front().cols());
  for (int k = 0; k < K; ++k)
    avg.row(k) = (ops.W.transpose() * (ops.Vq * u[static_cast<std::size_t>(k)])) / kReferenceMeasure;
  return avg;
}

/// Least-squares slope of log(err) against log(h) over the last `last`
/// samples (all samples when last <= 0).
inline double convergence_rate(const std::vector<double>& h, const std::vector<double>& err, int last = 3) {
  const std::size_t n = h.size();
  if (n != err.size() || n < 2) throw Error(ErrorKind::invalid_argument, "need at least two samples");
  const std::size_t m = (last <= 0) ? n : std::min<std::size_t>(n, static_cast<std::size_t>(last));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double md = static_cast<double>(m);
  return (md * sxy - sx * sy) / (md * sxx - sx * sx);
}

// Exact solutions -----------------------------------------------------------

/// ρ = 2 + sin(π(x - t)), u = 1, p = 1.
inline EulerModel<1>::State exact_entropy_wave(const EulerModel<1>& m, double x, double t) {
  return m.from_primitive(2.0 + std::sin(std::numbers::pi * (x - t)), EulerModel<1>::Vec(1.0), 1.0);
}

struct VortexParams {
  double x0 = 5.0;
  double y0 = 0.0;
  double beta = 5.0;
};

/// Isentropic vortex advected with unit speed in x.
inline EulerModel<2>::State exact_vortex(const EulerModel<2>& m, double x, double y, double t,
                                         const VortexParams& p = {}) {
  const double pi = std::numbers::pi;
  const double g = m.gamma;
  const double dx = x - p.x0 - t, dy = y - p.y0;
  const double e = std::exp(1.0 - (dx * dx + dy * dy));
  const double be = p.beta * e;
  const double rho = std::pow(1.0 - 0.5 * (g - 1.0) * be * be / (8.0 * g * pi * pi), 1.0 / (g - 1.0));
  const double s = p.beta / (2.0 * pi) * e;
  return m.from_primitive(rho, EulerModel<2>::Vec(1.0 - s * dy, s * dx), std::pow(rho, g));
}

struct Primitive1D {
  double rho;
  double u;
  double p;
};

/// Exact solution of the 1D Riemann problem for an ideal gas, by Newton
/// iteration on the star-region pressure.
class ExactRiemannSolver {
 public:
  ExactRiemannSolver(Primitive1D left, Primitive1D right, double gamma = 1.4, double tol = 1e-12)
      : L_(left), R_(right), g_(gamma) {
    cL_ = std::sqrt(g_ * L_.p / L_.rho);
    cR_ = std::sqrt(g_ * R_.p / R_.rho);
    if (2.0 * (cL_ + cR_) / (g_ - 1.0) <= R_.u - L_.u)
      throw Error(ErrorKind::oracle_failure, "Riemann data generate vacuum");
    // Primitive-variable guess, kept positive.
    double p = std::max(1e-8, 0.5 * (L_.p + R_.p) - 0.125 * (R_.u - L_.u) * (L_.rho + R_.rho) * (cL_ + cR_));
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double fl, dl, fr, dr;
      pressure_function(p, L_, cL_, fl, dl);
      pressure_function(p, R_, cR_, fr, dr);
      const double f = fl + fr + (R_.u - L_.u);
      double pn = p - f / (dl + dr);
      if (pn <= 0.0) pn = 0.5 * p;
      const double change = 2.0 * std::abs(pn - p) / (pn + p);
      p = pn;
      if (change < tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorKind::oracle_failure, "star pressure iteration did not converge");
    double fl, dl, fr, dr;
    pressure_function(p, L_, cL_, fl, dl);
    pressure_function(p, R_, cR_, fr, dr);
    p_star_ = p;
    u_star_ = 0.5 * (L_.u + R_.u) + 0.5 * (fr - fl);
  }

  double star_pressure() const { return p_star_; }
  double star_velocity() const { return u_star_; }

  /// Solution at similarity coordinate xi = (x - x0)/t.
  Primitive1D sample(double xi) const {
    const double g = g_;
    const double gm = (g - 1.0) / (g + 1.0);
    if (xi <= u_star_) {
      const auto& W = L_;
      const double c = cL_;
      if (p_star_ > W.p) {
        const double pr = p_star_ / W.p;
        const double s = W.u - c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
        if (xi <= s) return W;
        return {W.rho * (pr + gm) / (gm * pr + 1.0), u_star_, p_star_};
      }
      const double head = W.u - c;
      const double cs = c * std::pow(p_star_ / W.p, (g - 1.0) / (2.0 * g));
      const double tail = u_star_ - cs;
      if (xi <= head) return W;
      if (xi >= tail) return {W.rho * std::pow(p_star_ / W.p, 1.0 / g), u_star_, p_star_};
      const double base = 2.0 / (g + 1.0) + gm / c * (W.u - xi);
      return {W.rho * std::pow(base, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * W.u + xi),
              W.p * std::pow(base, 2.0 * g / (g - 1.0))};
    }
    const auto& W = R_;
    const double c = cR_;
    if (p_star_ > W.p) {
      const double pr = p_star_ / W.p;
      const double s = W.u + c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
      if (xi >= s) return W;
      return {W.rho * (pr + gm) / (gm * pr + 1.0), u_star_, p_star_};
    }
    const double head = W.u + c;
    const double cs = c * std::pow(p_star_ / W.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ + cs;
    if (xi >= head) return W;
    if (xi <= tail) return {W.rho * std::pow(p_star_ / W.p, 1.0 / g), u_star_, p_star_};
    const double base = 2.0 / (g + 1.0) - gm / c * (W.u - xi);
    return {W.rho * std::pow(base, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * W.u + xi),
            W.p * std::pow(base, 2.0 * g / (g - 1.0))};
  }

  Primitive1D sample(double x, double t, double x0 = 0.0) const {
    if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "exact Riemann solution needs t > 0");
    return sample((x - x0) / t);
  }

 private:
  void pressure_function(double p, const Primitive1D& W, double c, double& f, double& df) const {
    const double g = g_;
    if (p > W.p) {
      const double A = 2.0 / ((g + 1.0) * W.rho);
      const double B = (g - 1.0) / (g + 1.0) * W.p;
      const double q = std::sqrt(A / (p + B));
      f = (p - W.p) * q;
      df = q * (1.0 - 0.5 * (p - W.p) / (p + B));
    } else {
      const double pr = p / W.p;
      f = 2.0 * c / (g - 1.0) * (std::pow(pr, (g - 1.0) / (2.0 * g)) - 1.0);
      df = std::pow(pr, -(g + 1.0) / (2.0 * g)) / (W.rho * c);
    }
  }

  Primitive1D L_, R_;
  double g_;
  double cL_ = 0, cR_ = 0;
  double p_star_ = 0, u_star_ = 0;
};

inline const ExactRiemannSolver& sod_solver() {
  static const ExactRiemannSolver s({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 1.4);
  return s;
}

/// Sod shock tube (diaphragm at x = 0).
inline EulerModel<1>::State sod_exact(const EulerModel<1>& m, double x, double t) {
  const Primitive1D w = sod_solver().sample(x, t);
  return m.from_primitive(w.rho, EulerModel<1>::Vec(w.u), w.p);
}

/// Cell-average L1 error of each field against a 1D exact solution; exact
/// averages use composite Gauss quadrature so interior discontinuities are
/// resolved.
template <class Model>
Eigen::VectorXd cell_average_l1_error(const DGSolver<Model>& solver, const Field& u,
                                      const std::function<typename Model::State(double)>& exact,
                                      int subintervals = 64) {
  static_assert(Model::dim == 1);
  const Eigen::MatrixXd avg = cell_averages(solver.ops(), u);
  const QuadratureRule g = gauss_legendre(6);
  Eigen::VectorXd err = Eigen::VectorXd::Zero(Model::num_vars);
  for (int k = 0; k < solver.num_elements(); ++k) {
    const auto& v = solver.mesh().vertices[static_cast<std::size_t>(k)];
    const double a = v(0, 0), b = v(1, 0), len = b - a;
    Eigen::VectorXd ex = Eigen::VectorXd::Zero(Model::num_vars);
    for (int s = 0; s < subintervals; ++s) {
      const double sa = a + len * s / subintervals, sb = a + len * (s + 1) / subintervals;
      for (int q = 0; q < g.size(); ++q) {
        const double x = 0.5 * (sa + sb) + 0.5 * (sb - sa) * g.points(q, 0);
        ex += 0.5 * (sb - sa) * g.weights(q) * exact(x);
      }
    }
    ex /= len;
    err += len * (avg.row(k).transpose() - ex).cwiseAbs();
  }
  return err;
}

}  // namespace esdg
