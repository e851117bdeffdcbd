#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "esdg/error.hpp"
#include "esdg/solver.hpp"

namespace esdg {

/// Carpenter-Kennedy fourth-order, five-stage, 2N-storage Runge-Kutta.
struct LSRK45 {
  static constexpr std::array<double, 5> a = {
      0.0,
      -567301805773.0 / 1357537059087.0,
      -2404267990393.0 / 2016746695238.0,
      -3550918686646.0 / 2091501179385.0,
      -1275806237668.0 / 842570457699.0,
  };
  static constexpr std::array<double, 5> b = {
      1432997174477.0 / 9575080441755.0,
      5161836677717.0 / 13612068292357.0,
      1720146321549.0 / 2090206949498.0,
      3134564353537.0 / 4481467310338.0,
      2277821191437.0 / 14882151754819.0,
  };
  static constexpr std::array<double, 5> c = {
      0.0,
      1432997174477.0 / 9575080441755.0,
      2526269341429.0 / 6820363962896.0,
      2006345519317.0 / 3224310063776.0,
      2802321613138.0 / 2924317926251.0,
  };
};

namespace detail {

inline void lsrk_update(Field& u, Field& res, const Field& k, double a, double b, double dt) {
  for (std::size_t e = 0; e < u.size(); ++e) {
    res[e] = a * res[e] + dt * k[e];
    u[e] += b * res[e];
  }
}

template <class V>
void lsrk_update(V& u, V& res, const V& k, double a, double b, double dt) {
  res = a * res + dt * k;
  u += b * res;
}

}  // namespace detail

/// One step. `rhs(u, t, out, stage)` writes du/dt; `res` is the second
/// storage register and need not be initialised.
template <class V, class Rhs>
void lsrk45_step(V& u, V& res, V& k, double t, double dt, Rhs&& rhs) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "time step must be positive");
  for (int s = 0; s < 5; ++s) {
    rhs(u, t + LSRK45::c[static_cast<std::size_t>(s)] * dt, k, s);
    if (s == 0) res = k;  // a[0] = 0; resets the register to the right shape
    detail::lsrk_update(u, res, k, s == 0 ? 0.0 : LSRK45::a[static_cast<std::size_t>(s)],
                        LSRK45::b[static_cast<std::size_t>(s)], dt);
  }
}

struct DiagnosticsRow {
  double t = 0;
  double total_entropy = 0;
  double delta_U = 0;
  double delta = 0;  // entropy residual Σ_k v_h^T J M du_h/dt
  double conservation_residual = 0;
  double min_density = 0;
  double min_pressure = 0;
};

struct RunOptions {
  double final_time = 0.0;
  double cfl = 0.125;
  int output_every = 1;  // diagnostics row every this many steps (plus the final time)
  std::function<void(const Field&, double)> on_output;
};

struct RunResult {
  Field u;
  double t = 0.0;
  double dt = 0.0;
  int steps = 0;
  std::vector<DiagnosticsRow> rows;
  double max_delta = 0.0;
  double max_conservation_residual = 0.0;
  Eigen::VectorXd initial_totals;
  Eigen::VectorXd final_totals;
  bool blew_up = false;
  std::string message;
  double blowup_time = 0.0;
  int blowup_element = -1;
};

/// Advances u0 to final_time with Δt = CFL h / C_N, shortening the last step
/// to land on final_time. Diagnostics use the first-stage RHS of each step.
/// A blow-up stops the run; the result keeps the last completed state.
template <class Model>
RunResult run(DGSolver<Model>& solver, Field u0, const RunOptions& opt) {
  if (!(opt.cfl > 0.0)) throw Error(ErrorKind::invalid_argument, "CFL must be positive");
  if (opt.final_time < 0.0) throw Error(ErrorKind::invalid_argument, "final time must be non-negative");
  RunResult out;
  out.u = std::move(u0);
  out.dt = stable_time_step(opt.cfl, solver.mesh().h, solver.ops().elem.degree);
  out.initial_totals = solver.conserved_totals(out.u);
  const int every = std::max(1, opt.output_every);
  double U0 = 0.0;
  bool have_U0 = false;

  auto record = [&](const Field& u, const Field& du, double t) {
    DiagnosticsRow row;
    row.t = t;
    row.total_entropy = solver.total_entropy(u);
    if (!have_U0) {
      U0 = row.total_entropy;
      have_U0 = true;
    }
    row.delta_U = std::abs(row.total_entropy - U0);
    row.delta = solver.entropy_residual(du);
    row.conservation_residual = solver.local_conservation_residuals(du).maxCoeff();
    const auto [rmin, pmin] = solver.min_density_pressure(u);
    row.min_density = rmin;
    row.min_pressure = pmin;
    out.rows.push_back(row);
    if (opt.on_output) opt.on_output(u, t);
  };
  auto track = [&](const Field& du) {
    out.max_delta = std::max(out.max_delta, solver.entropy_residual(du));
    out.max_conservation_residual =
        std::max(out.max_conservation_residual, solver.local_conservation_residuals(du).maxCoeff());
  };

  Field res = solver.zeros(), k = solver.zeros();
  const double T = opt.final_time;
  try {
    while (out.t < T) {
      double dt = std::min(out.dt, T - out.t);
      // Avoid a sliver step from round-off in the accumulated time.
      if (T - (out.t + dt) < 1e-12 * std::max(1.0, T)) dt = T - out.t;
      Field u = out.u;
      const double t0 = out.t;
      lsrk45_step(u, res, k, t0, dt, [&](const Field& x, double ts, Field& kx, int stage) {
        solver.rhs(x, ts, kx);
        if (stage == 0) {
          track(kx);
          if (out.steps % every == 0) record(x, kx, ts);
        }
      });
      out.u = std::move(u);
      out.t = (dt == T - t0) ? T : t0 + dt;
      ++out.steps;
    }
    solver.rhs(out.u, out.t, k);
    track(k);
    record(out.u, k, out.t);
  } catch (const BlowUpError& e) {
    out.blew_up = true;
    out.message = e.what();
    out.blowup_time = e.time();
    out.blowup_element = e.element();
  }
  out.final_totals = solver.conserved_totals(out.u);
  return out;
}

}  // namespace esdg
