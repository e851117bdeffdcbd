#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace esdg {

/// Interface dissipation -(λ/2)(ũ_R - ũ_L), added to the normal numerical flux.
template <class State>
State lax_friedrichs_penalty(const State& uL, const State& uR, double lambda) {
  return -0.5 * lambda * (uR - uL);
}

/// Max over random admissible pairs and directions of
///   |(v_L - v_R)^T f_{i,S} - (ψ_{i,L} - ψ_{i,R})| / (1 + |ψ_{i,L}| + |ψ_{i,R}|).
/// `potential` overrides the model's ψ (used for negative controls).
template <class Model>
double tadmor_check(const Model& model, int trials, unsigned seed = 2024,
                    std::function<double(const typename Model::State&, int)> potential = {}) {
  using State = typename Model::State;
  if (!potential) potential = [&](const State& u, int dir) { return model.potential(u, dir); };
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const State uL = model.sample_state(rng);
    const State uR = model.sample_state(rng);
    const State dv = model.entropy_vars(uL) - model.entropy_vars(uR);
    const auto f = model.ec_flux(uL, uR);
    for (int i = 0; i < Model::dim; ++i) {
      const double pl = potential(uL, i), pr = potential(uR, i);
      const double r = std::abs(dv.dot(f[static_cast<std::size_t>(i)]) - (pl - pr)) / (1.0 + std::abs(pl) + std::abs(pr));
      worst = std::max(worst, r);
    }
  }
  return worst;
}

/// Max relative |f_S(u_L,u_R) - f_S(u_R,u_L)| over random pairs.
template <class Model>
double symmetry_check(const Model& model, int trials, unsigned seed = 2025) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto uL = model.sample_state(rng), uR = model.sample_state(rng);
    const auto a = model.ec_flux(uL, uR), b = model.ec_flux(uR, uL);
    for (int i = 0; i < Model::dim; ++i) {
      const auto& fa = a[static_cast<std::size_t>(i)];
      worst = std::max(worst, (fa - b[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff() / (1.0 + fa.cwiseAbs().maxCoeff()));
    }
  }
  return worst;
}

/// Max relative |f_S(u,u) - f(u)|.
template <class Model>
double consistency_check(const Model& model, int trials, unsigned seed = 2026) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto u = model.sample_state(rng);
    const auto f = model.ec_flux(u, u);
    for (int i = 0; i < Model::dim; ++i) {
      const auto exact = model.flux(u, i);
      worst = std::max(worst, (f[static_cast<std::size_t>(i)] - exact).cwiseAbs().maxCoeff() /
                                  (1.0 + exact.cwiseAbs().maxCoeff()));
    }
  }
  return worst;
}

/// Max relative |u - u(v(u))|.
template <class Model>
double entropy_roundtrip_check(const Model& model, int trials, unsigned seed = 2027) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto u = model.sample_state(rng);
    const auto back = model.from_entropy_vars(model.entropy_vars(u));
    worst = std::max(worst, (back - u).cwiseAbs().maxCoeff() / u.cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Max relative difference between v(u) and a fourth-order central
/// difference gradient of U(u).
template <class Model>
double entropy_gradient_check(const Model& model, int trials, unsigned seed = 2028) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto u = model.sample_state(rng);
    const auto v = model.entropy_vars(u);
    for (int j = 0; j < Model::num_vars; ++j) {
      const double h = 1e-4 * (1.0 + std::abs(u(j)));
      auto at = [&](double s) {
        auto w = u;
        w(j) += s * h;
        return model.entropy(w);
      };
      const double g = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
      worst = std::max(worst, std::abs(g - v(j)) / (1.0 + std::abs(v(j))));
    }
  }
  return worst;
}

}  // namespace esdg
