#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>

namespace esdg {

/// Burgers' equation u_t + Σ_i (u^2/2)_{x_i} = 0 with the square entropy.
template <int Dim>
struct BurgersModel {
  static constexpr int dim = Dim;
  static constexpr int num_vars = 1;
  using State = Eigen::Matrix<double, 1, 1>;
  using Aux = double;

  bool admissible(const State& u) const { return std::isfinite(u(0)); }
  Aux auxiliary(const State& u) const { return u(0); }

  State flux(const State& u, int /*dir*/) const { return State(0.5 * u(0) * u(0)); }
  double entropy(const State& u) const { return 0.5 * u(0) * u(0); }
  double entropy_flux(const State& u, int /*dir*/) const { return u(0) * u(0) * u(0) / 3.0; }
  State entropy_vars(const State& u) const { return u; }
  State from_entropy_vars(const State& v) const { return v; }
  double potential(const State& u, int /*dir*/) const { return u(0) * u(0) * u(0) / 6.0; }

  static double split_flux(double a, double b) { return (a * a + a * b + b * b) / 6.0; }

  std::array<State, Dim> ec_flux(const Aux& a, const Aux& b) const {
    std::array<State, Dim> f;
    f.fill(State(split_flux(a, b)));
    return f;
  }
  std::array<State, Dim> ec_flux(const State& a, const State& b) const { return ec_flux(a(0), b(0)); }

  double max_wavespeed(const State& a, const State& b, const Eigen::Matrix<double, Dim, 1>& n) const {
    return wavespeed(a(0), b(0), n);
  }
  double wavespeed(const Aux& a, const Aux& b, const Eigen::Matrix<double, Dim, 1>& n) const {
    return std::max(std::abs(a), std::abs(b)) * std::abs(n.sum());
  }

  template <class Rng>
  State sample_state(Rng& rng) const {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    return State(d(rng));
  }
};

/// Constant-coefficient advection u_t + a·∇u = 0; the linear-flux test model.
template <int Dim>
struct LinearAdvectionModel {
  static constexpr int dim = Dim;
  static constexpr int num_vars = 1;
  using State = Eigen::Matrix<double, 1, 1>;
  using Aux = double;

  Eigen::Matrix<double, Dim, 1> velocity = Eigen::Matrix<double, Dim, 1>::Ones();

  bool admissible(const State& u) const { return std::isfinite(u(0)); }
  Aux auxiliary(const State& u) const { return u(0); }

  State flux(const State& u, int dir) const { return State(velocity(dir) * u(0)); }
  double entropy(const State& u) const { return 0.5 * u(0) * u(0); }
  double entropy_flux(const State& u, int dir) const { return velocity(dir) * 0.5 * u(0) * u(0); }
  State entropy_vars(const State& u) const { return u; }
  State from_entropy_vars(const State& v) const { return v; }
  double potential(const State& u, int dir) const { return velocity(dir) * 0.5 * u(0) * u(0); }

  std::array<State, Dim> ec_flux(const Aux& a, const Aux& b) const {
    std::array<State, Dim> f;
    for (int i = 0; i < Dim; ++i) f[static_cast<std::size_t>(i)] = State(velocity(i) * 0.5 * (a + b));
    return f;
  }
  std::array<State, Dim> ec_flux(const State& a, const State& b) const { return ec_flux(a(0), b(0)); }

  double max_wavespeed(const State&, const State&, const Eigen::Matrix<double, Dim, 1>& n) const {
    return std::abs(velocity.dot(n));
  }
  double wavespeed(const Aux&, const Aux&, const Eigen::Matrix<double, Dim, 1>& n) const {
    return std::abs(velocity.dot(n));
  }

  template <class Rng>
  State sample_state(Rng& rng) const {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    return State(d(rng));
  }
};

}  // namespace esdg
