#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "esdg/error.hpp"
#include "esdg/log_mean.hpp"

namespace esdg {

/// Compressible Euler equations in Dim = 1 or 2 space dimensions.
/// Conserved variables (ρ, ρu_1, .., ρu_Dim, E); ideal gas p = (γ-1)ρe.
///
/// Entropy U = -ρ s with s = ln(p/ρ^γ); its gradient gives the entropy
/// variables v = ((ρe(γ+1-s) - E)/ρe, ρu_i/ρe, -ρ/ρe), and the matching
/// potentials are ψ_i = (γ-1)ρu_i.
template <int Dim>
struct EulerModel {
  static_assert(Dim == 1 || Dim == 2);
  static constexpr int dim = Dim;
  static constexpr int num_vars = Dim + 2;
  using State = Eigen::Matrix<double, num_vars, 1>;
  using Vec = Eigen::Matrix<double, Dim, 1>;

  double gamma = 1.4;
  double log_eps = kDefaultLogMeanTolerance;

  struct Aux {
    double rho;
    Vec vel;
    double p;
    double beta;
    double vel2;
  };

  double internal_energy(const State& u) const {
    return u(Dim + 1) - 0.5 * u.template segment<Dim>(1).squaredNorm() / u(0);
  }
  double pressure(const State& u) const { return (gamma - 1.0) * internal_energy(u); }

  bool admissible(const State& u) const {
    return std::isfinite(u.sum()) && u(0) > 0.0 && internal_energy(u) > 0.0;
  }

  void require_admissible(const State& u) const {
    if (!admissible(u)) throw Error(ErrorKind::invalid_state, "inadmissible Euler state");
  }

  State from_primitive(double rho, const Vec& vel, double p) const {
    State u;
    u(0) = rho;
    u.template segment<Dim>(1) = rho * vel;
    u(Dim + 1) = p / (gamma - 1.0) + 0.5 * rho * vel.squaredNorm();
    return u;
  }

  Aux auxiliary(const State& u) const {
    Aux a;
    a.rho = u(0);
    a.vel = u.template segment<Dim>(1) / u(0);
    a.vel2 = a.vel.squaredNorm();
    a.p = (gamma - 1.0) * (u(Dim + 1) - 0.5 * a.rho * a.vel2);
    a.beta = a.rho / (2.0 * a.p);
    return a;
  }

  State flux(const State& u, int dir) const {
    const double rho = u(0);
    const Vec vel = u.template segment<Dim>(1) / rho;
    const double p = pressure(u);
    const double un = vel(dir);
    State f = un * u;
    f(1 + dir) += p;
    f(Dim + 1) += un * p;
    return f;
  }

  double physical_entropy(const State& u) const { return std::log(pressure(u) / std::pow(u(0), gamma)); }
  double entropy(const State& u) const { return -u(0) * physical_entropy(u); }
  double entropy_flux(const State& u, int dir) const { return entropy(u) * u(1 + dir) / u(0); }
  double potential(const State& u, int dir) const { return (gamma - 1.0) * u(1 + dir); }

  State entropy_vars(const State& u) const {
    require_admissible(u);
    const double rhoe = internal_energy(u);
    const double s = std::log((gamma - 1.0) * rhoe / std::pow(u(0), gamma));
    State v;
    v(0) = (rhoe * (gamma + 1.0 - s) - u(Dim + 1)) / rhoe;
    v.template segment<Dim>(1) = u.template segment<Dim>(1) / rhoe;
    v(Dim + 1) = -u(0) / rhoe;
    return v;
  }

  State from_entropy_vars(const State& v) const {
    const double vl = v(Dim + 1);
    if (!(vl < 0.0) || !std::isfinite(v.sum()))
      throw Error(ErrorKind::invalid_state, "entropy variables outside the admissible set");
    const double vm2 = v.template segment<Dim>(1).squaredNorm();
    const double s = gamma - v(0) + vm2 / (2.0 * vl);
    const double g1 = gamma - 1.0;
    const double rhoe = std::pow(g1 / std::pow(-vl, gamma), 1.0 / g1) * std::exp(-s / g1);
    State u;
    u(0) = -rhoe * vl;
    u.template segment<Dim>(1) = rhoe * v.template segment<Dim>(1);
    u(Dim + 1) = rhoe * (1.0 - vm2 / (2.0 * vl));
    if (!admissible(u)) throw Error(ErrorKind::invalid_state, "entropy variables map to an inadmissible state");
    return u;
  }

  /// Chandrashekar's entropy conservative and kinetic energy preserving flux,
  /// all directions at once.
  std::array<State, Dim> ec_flux(const Aux& L, const Aux& R) const {
    const double rho_ln = log_mean(L.rho, R.rho, log_eps);
    const double beta_ln = log_mean(L.beta, R.beta, log_eps);
    const double rho_avg = 0.5 * (L.rho + R.rho);
    const double beta_avg = 0.5 * (L.beta + R.beta);
    const Vec vel = 0.5 * (L.vel + R.vel);
    const double p_avg = rho_avg / (2.0 * beta_avg);
    const double vel2_avg = 0.5 * (L.vel2 + R.vel2);
    const double energy = rho_ln / (2.0 * (gamma - 1.0) * beta_ln) + p_avg + rho_ln * (vel.squaredNorm() - 0.5 * vel2_avg);
    std::array<State, Dim> f;
    for (int i = 0; i < Dim; ++i) {
      State& fi = f[static_cast<std::size_t>(i)];
      const double mass = rho_ln * vel(i);
      fi(0) = mass;
      fi.template segment<Dim>(1) = mass * vel;
      fi(1 + i) += p_avg;
      fi(Dim + 1) = vel(i) * energy;
    }
    return f;
  }

  std::array<State, Dim> ec_flux(const State& uL, const State& uR) const {
    require_admissible(uL);
    require_admissible(uR);
    return ec_flux(auxiliary(uL), auxiliary(uR));
  }

  double sound_speed(const State& u) const { return std::sqrt(gamma * pressure(u) / u(0)); }

  /// max over both states of |u·n| + c.
  double max_wavespeed(const State& uL, const State& uR, const Vec& n) const {
    require_admissible(uL);
    require_admissible(uR);
    auto speed = [&](const State& u) {
      return std::abs(u.template segment<Dim>(1).dot(n) / u(0)) + sound_speed(u);
    };
    return std::max(speed(uL), speed(uR));
  }

  double wavespeed(const Aux& L, const Aux& R, const Vec& n) const {
    auto speed = [&](const Aux& a) { return std::abs(a.vel.dot(n)) + std::sqrt(gamma * a.p / a.rho); };
    return std::max(speed(L), speed(R));
  }

  template <class Rng>
  State sample_state(Rng& rng) const {
    std::uniform_real_distribution<double> pos(0.1, 10.0), vel(-3.0, 3.0);
    Vec w;
    for (int i = 0; i < Dim; ++i) w(i) = vel(rng);
    const double rho = pos(rng);
    return from_primitive(rho, w, pos(rng));
  }
};

}  // namespace esdg
