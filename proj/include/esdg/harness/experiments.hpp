#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "esdg/burgers.hpp"
#include "esdg/diagnostics.hpp"
#include "esdg/flux_checks.hpp"
#include "esdg/harness/burgers_split.hpp"
#include "esdg/harness/config.hpp"
#include "esdg/harness/csv.hpp"
#include "esdg/harness/plot.hpp"
#include "esdg/harness/problems.hpp"
#include "esdg/operators.hpp"
#include "esdg/time_integration.hpp"

namespace esdg::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitConfig = 2,
  kExitBlowUp = 3,
  kExitOracle = 4,
};

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::config_error: return kExitConfig;
    case ErrorKind::blow_up: return kExitBlowUp;
    case ErrorKind::oracle_failure: return kExitOracle;
    default: return kExitError;
  }
}

struct Outcome {
  int exit_code = kExitOk;
  std::vector<std::string> log;

  void note(const std::string& s) { log.push_back(s); }
  /// Keeps the most severe code; blow-up outranks oracle failures.
  void fail(int code, const std::string& s) {
    log.push_back(s);
    if (exit_code == kExitOk || code == kExitBlowUp) exit_code = code;
  }
};

// Typed cases ---------------------------------------------------------------

template <class Model>
struct Case {
  DGSolver<Model> solver;
  RunResult run;
};

inline RunOptions run_options(double T, double cfl, int every) {
  RunOptions o;
  o.final_time = T;
  o.cfl = cfl;
  o.output_every = every;
  return o;
}

/// Relative drift of the conserved totals over a run.
inline double conservation_drift(const RunResult& r) {
  const Eigen::VectorXd d = r.final_totals - r.initial_totals;
  return (d.array().abs() / r.initial_totals.array().abs().max(1.0)).maxCoeff();
}

struct EntropyWaveResult {
  Case<Euler1> c;
  double h = 0.0;  // reported as 1/K to line up with published data on [-1,1]
  L2Error error;
};

inline EntropyWaveResult entropy_wave_case(const Discretization& d, int K, double cfl, double T, int every = 1000000) {
  auto s = euler_1d(d, K, -1.0, 1.0, true);
  const auto& m = s.model();
  Field u0 = s.project([&](const Eigen::VectorXd& x) { return exact_entropy_wave(m, x(0), 0.0); });
  RunResult r = run(s, std::move(u0), run_options(T, cfl, every));
  L2Error e;
  if (!r.blew_up) {
    const double t = r.t;
    e = l2_error<Euler1>(s, r.u, [&](const Eigen::VectorXd& x) { return exact_entropy_wave(m, x(0), t); });
  }
  return {{std::move(s), std::move(r)}, 1.0 / K, e};
}

template <int Dim>
Case<EulerModel<Dim>> pulse_case(const Discretization& d, int K, double cfl, double T, int every) {
  auto s = [&] {
    if constexpr (Dim == 1) return euler_1d(d, K, -1.0, 1.0, true);
    else return euler_2d(d, K, K, -1.0, 1.0, -1.0, 1.0, true);
  }();
  const auto& m = s.model();
  Field u0 = s.project([&](const Eigen::VectorXd& x) { return pulse<Dim>(m, x); });
  RunResult r = run(s, std::move(u0), run_options(T, cfl, every));
  return {std::move(s), std::move(r)};
}

struct SodResult {
  Case<Euler1> c;
  Eigen::VectorXd l1;  // cell-average L1 error per conserved variable
};

inline SodResult sod_case(const Discretization& d, int K, double cfl, double T, int every = 1000000) {
  auto s = euler_1d(d, K, -0.5, 0.5, false);
  const auto& m = s.model();
  auto ic = [&](const Eigen::VectorXd& x) { return sod_initial(m, x(0)); };
  s.set_exterior_state(ic);
  RunResult r = run(s, s.project(ic), run_options(T, cfl, every));
  Eigen::VectorXd l1;
  if (!r.blew_up && r.t > 0.0) {
    const double t = r.t;
    l1 = cell_average_l1_error<Euler1>(s, r.u, [&](double x) { return sod_exact(m, x, t); });
  }
  return {{std::move(s), std::move(r)}, l1};
}

inline Case<Euler1> sine_shock_case(const Discretization& d, int K, double cfl, double T, int every = 1000000) {
  auto s = euler_1d(d, K, -5.0, 5.0, false);
  const auto& m = s.model();
  auto ic = [&](const Eigen::VectorXd& x) { return sine_shock_initial(m, x(0)); };
  s.set_exterior_state(ic);
  RunResult r = run(s, s.project(ic), run_options(T, cfl, every));
  return {std::move(s), std::move(r)};
}

struct VortexResult {
  Case<Euler2> c;
  double h = 0.0;  // quadrilateral edge length
  L2Error error;
};

/// Vortex on [0,20]x[-5,5] with 2K x K quadrilaterals.
inline VortexResult vortex_case(const Discretization& d, int K, double cfl, double T, int every = 1000000) {
  auto s = euler_2d(d, 2 * K, K, 0.0, 20.0, -5.0, 5.0, true);
  const auto& m = s.model();
  Field u0 = s.project([&](const Eigen::VectorXd& x) { return exact_vortex(m, x(0), x(1), 0.0); });
  RunResult r = run(s, std::move(u0), run_options(T, cfl, every));
  L2Error e;
  if (!r.blew_up) {
    const double t = r.t;
    e = l2_error<Euler2>(s, r.u, [&](const Eigen::VectorXd& x) { return exact_vortex(m, x(0), x(1), t); });
  }
  return {{std::move(s), std::move(r)}, 10.0 / K, e};
}

inline Case<Euler2> riemann_2d_case(const Discretization& d, int K, double cfl, double T, int every = 1000000) {
  auto s = euler_2d(d, K, K, -1.0, 1.0, -1.0, 1.0, true);
  const auto& m = s.model();
  Field u0 = s.project([&](const Eigen::VectorXd& x) { return riemann_2d_initial(m, x(0), x(1)); });
  RunResult r = run(s, std::move(u0), run_options(T, cfl, every));
  return {std::move(s), std::move(r)};
}

/// ‖u - u(Π_N v)‖ for projected smooth data; error rule two degrees above
/// the volume rule. Returns {h, error}; 1D h is 1/K, 2D h the quad edge.
inline std::pair<double, double> projection_case(int dim, int N, int K, double rho0 = 2.0, double E0 = 2.0) {
  Discretization d;
  d.N = N;
  if (dim == 1) {
    auto s = euler_1d(d, K, -1.0, 1.0, true);
    Field u = s.project([&](const Eigen::VectorXd& x) { return projection_data_1d(x(0), rho0, E0); });
    const auto e = entropy_projection_error(s.model(), s.ops(), s.mesh(), u, gauss_legendre(N + 3));
    return {1.0 / K, e.combined};
  }
  auto s = euler_2d(d, K, K, -1.0, 1.0, -1.0, 1.0, true);
  Field u = s.project([&](const Eigen::VectorXd& x) { return projection_data_2d(x(0), x(1), rho0, E0); });
  const auto e = entropy_projection_error(s.model(), s.ops(), s.mesh(), u,
                                          triangle_quadrature(std::min(2 * N + 2, kMaxTriangleDegree)));
  return {2.0 / K, e.combined};
}

/// Max difference between the flux-differencing Burgers RHS and the split
/// form, over random modal states on a periodic K-element mesh.
inline double burgers_equivalence_case(int N, QuadratureMode quad, int K, int trials, unsigned seed = 7) {
  DGSolver<BurgersModel<1>> s(BurgersModel<1>{}, build_operator_set(ElementType::interval, N, quad),
                              build_mesh_1d(K, -1.0, 1.0, true), SolverOptions{FluxMode::ec, true, 1});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  Field du;
  for (int t = 0; t < trials; ++t) {
    Field u = s.zeros();
    for (auto& uk : u)
      for (Eigen::Index i = 0; i < uk.rows(); ++i) uk(i, 0) = coef(rng);
    s.rhs(u, 0.0, du);
    const Field ref = split_form_burgers_rhs(s.ops(), s.mesh(), s.connectivity(), u);
    for (std::size_t k = 0; k < u.size(); ++k) worst = std::max(worst, (du[k] - ref[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

// Output helpers ---------------------------------------------------------------

inline std::string prepare_output(const ExperimentSpec& spec) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(spec.out) / spec.experiment;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::config_error, "out: cannot create '" + dir.string() + "': " + ec.message());
  std::ofstream(dir / "config.echo") << emit_config(spec);
  std::error_code rm;
  fs::remove(dir / "status.txt", rm);
  return dir.string();
}

inline void write_status(const std::string& dir, const std::string& text) {
  std::ofstream(std::filesystem::path(dir) / "status.txt") << text << "\n";
}

inline std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline Table entropy_table(const std::vector<std::string>& keys) {
  std::vector<std::string> cols = keys;
  for (const char* c : {"t", "total_entropy", "delta_U", "delta", "conservation_residual", "min_density", "min_pressure"})
    cols.emplace_back(c);
  return Table(cols);
}

template <class... Keys>
void add_entropy_rows(Table& t, const RunResult& r, const Keys&... keys) {
  for (const auto& row : r.rows)
    t.add(keys..., row.t, row.total_entropy, row.delta_U, row.delta, row.conservation_residual, row.min_density,
          row.min_pressure);
}

template <int Dim>
Eigen::VectorXd primitive(const EulerModel<Dim>& m, const typename EulerModel<Dim>::State& u) {
  Eigen::VectorXd w(Dim + 2);
  w(0) = u(0);
  w.segment(1, Dim) = u.template segment<Dim>(1) / u(0);
  w(Dim + 1) = m.pressure(u);
  return w;
}

/// Point values on an equispaced per-element sample and, optionally, an
/// exact solution alongside.
inline Table snapshot_points_1d(const DGSolver<Euler1>& s, const Field& u, int per_element,
                                const std::function<Euler1::State(double)>& exact = {}) {
  Table t(exact ? std::vector<std::string>{"x", "rho", "u", "p", "rho_exact", "u_exact", "p_exact"}
                : std::vector<std::string>{"x", "rho", "u", "p"});
  Eigen::MatrixXd r(per_element, 1);
  for (int i = 0; i < per_element; ++i) r(i, 0) = -1.0 + 2.0 * i / (per_element - 1);
  const Eigen::MatrixXd V = basis_eval(s.ops().elem, r);
  for (int k = 0; k < s.num_elements(); ++k) {
    const Eigen::MatrixXd x = s.mesh().map_points(k, r);
    const Eigen::MatrixXd uv = V * u[static_cast<std::size_t>(k)];
    for (int i = 0; i < per_element; ++i) {
      const Euler1::State st = uv.row(i).transpose();
      const Eigen::VectorXd w = primitive<1>(s.model(), st);
      if (exact) {
        const Eigen::VectorXd we = primitive<1>(s.model(), exact(x(i, 0)));
        t.add(x(i, 0), w(0), w(1), w(2), we(0), we(1), we(2));
      } else {
        t.add(x(i, 0), w(0), w(1), w(2));
      }
    }
  }
  return t;
}

template <int Dim>
Table snapshot_cells(const DGSolver<EulerModel<Dim>>& s, const Field& u) {
  std::vector<std::string> cols = Dim == 1 ? std::vector<std::string>{"x", "rho", "u", "p"}
                                           : std::vector<std::string>{"x", "y", "rho", "u", "v", "p"};
  Table t(cols);
  const Eigen::MatrixXd avg = cell_averages(s.ops(), u);
  for (int k = 0; k < s.num_elements(); ++k) {
    const Eigen::RowVectorXd c = s.mesh().vertices[static_cast<std::size_t>(k)].colwise().mean();
    const Eigen::VectorXd w = primitive<Dim>(s.model(), avg.row(k).transpose());
    if constexpr (Dim == 1) t.add(c(0), w(0), w(1), w(2));
    else t.add(c(0), c(1), w(0), w(1), w(2), w(3));
  }
  return t;
}

/// Filled triangles colored by cell-average density.
inline std::string density_map_svg(const DGSolver<Euler2>& s, const Field& u, const std::string& title) {
  const Eigen::MatrixXd avg = cell_averages(s.ops(), u);
  const double lo = avg.col(0).minCoeff(), hi = avg.col(0).maxCoeff();
  const auto& m = s.mesh();
  const double W = 520, pad = 30;
  const double sx = (W - 2 * pad) / (m.hi(0) - m.lo(0)), sy = (W - 2 * pad) / (m.hi(1) - m.lo(1));
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << W + 20
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">" << detail::esc(title) << " (rho "
     << detail::num(lo) << " to " << detail::num(hi) << ")</text>\n";
  for (int k = 0; k < m.num_elements(); ++k) {
    const double f = hi > lo ? (avg(k, 0) - lo) / (hi - lo) : 0.5;
    const int R = static_cast<int>(255 * f), B = static_cast<int>(255 * (1 - f)), G = static_cast<int>(255 * (1 - std::abs(2 * f - 1)));
    const auto& v = m.vertices[static_cast<std::size_t>(k)];
    os << "<polygon fill=\"rgb(" << R << "," << G << "," << B << ")\" stroke=\"none\" points=\"";
    for (int i = 0; i < 3; ++i)
      os << pad + (v(i, 0) - m.lo(0)) * sx << "," << 20 + W - pad - (v(i, 1) - m.lo(1)) * sy << " ";
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

inline Table errors_table() { return Table({"N", "quadrature", "flux", "h", "L2_error", "rate", "K"}); }

/// Appends a row with the local rate against the previous row of the same
/// (N, quadrature, flux) group.
inline void add_error_row(Table& t, int N, const std::string& quad, const std::string& flux, double h, double err,
                          int K) {
  std::string rate;
  for (auto it = t.rows.rbegin(); it != t.rows.rend(); ++it) {
    if ((*it)[0] == std::to_string(N) && (*it)[1] == quad && (*it)[2] == flux) {
      const double h0 = std::stod((*it)[3]), e0 = std::stod((*it)[4]);
      rate = fmt(std::log(e0 / err) / std::log(h0 / h));
      break;
    }
  }
  t.add(N, quad, flux, h, err, rate, K);
}

/// Writes the convergence plot for an errors.csv; returns the slopes.
inline std::vector<SlopeAnnotation> emit_convergence_plot(const std::string& csv, const std::string& svg,
                                                          const std::string& title) {
  PlotSpec p;
  p.title = title;
  p.xlabel = "h";
  p.ylabel = "L2 error";
  const auto slopes = convergence_plot(read_csv(csv), "h", "L2_error", {"N", "quadrature", "flux"}, p);
  write_svg(svg, p);
  return slopes;
}

inline void emit_series_plot(const std::string& csv, const std::string& svg, const std::string& title,
                             const std::string& x, const std::vector<std::string>& ys, const std::string& group,
                             bool logy) {
  const Table t = read_csv(csv);
  PlotSpec p;
  p.title = title;
  p.logy = logy;
  series_plot(t, x, ys, group, p);
  write_svg(svg, p);
}

/// Line plot of point values with cell averages as markers.
inline void emit_snapshot_plot(const std::string& points_csv, const std::string& cells_csv, const std::string& svg,
                               const std::string& field, const std::string& title) {
  const Table pts = read_csv(points_csv), cells = read_csv(cells_csv);
  PlotSpec p;
  p.title = title;
  p.xlabel = "x";
  p.ylabel = field;
  series_plot(pts, "x", {field}, "", p);
  if (pts.column(field + "_exact") >= 0) {
    PlotSpec q;
    series_plot(pts, "x", {field + "_exact"}, "", q);
    p.series.push_back(q.series.front());
  }
  Series c{"cell averages", cells.numbers("x"), cells.numbers(field), true};
  p.series.push_back(c);
  write_svg(svg, p);
}

inline void check_conservation(Outcome& out, const RunResult& r, const std::string& label, bool periodic) {
  if (r.max_conservation_residual >= 1e-12)
    out.fail(kExitOracle, label + ": local conservation residual " + fmt(r.max_conservation_residual));
  if (periodic && !r.blew_up) {
    const double drift = conservation_drift(r);
    if (drift >= 1e-10) out.fail(kExitOracle, label + ": global conservation drift " + fmt(drift));
  }
}

inline std::string label_of(const Discretization& d, int K) {
  std::ostringstream os;
  os << "N=" << d.N << " K=" << K << " " << to_string(d.quad) << " " << to_string(d.flux);
  return os.str();
}

inline Discretization discretization(const ExperimentSpec& s, int N, double log_eps) {
  Discretization d;
  d.N = N;
  d.quad = s.quad;
  d.flux = s.flux;
  d.gamma = s.gamma;
  d.log_eps = log_eps;
  d.threads = s.threads;
  return d;
}

// Experiments -------------------------------------------------------------------

inline Outcome run_ops_check(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table t({"element", "quadrature", "N", "lemma", "sbp", "nullspace", "projection", "recovery", "weighted", "max"});
  struct Item {
    ElementType type;
    QuadratureMode mode;
    int N;
  };
  std::vector<Item> items;
  for (auto mode : {QuadratureMode::gll, QuadratureMode::gauss1, QuadratureMode::gauss2})
    for (int N : spec.N) items.push_back({ElementType::interval, mode, N});
  for (int N : spec.N)
    if (2 * N <= kMaxTriangleDegree) items.push_back({ElementType::triangle, QuadratureMode::tri2n, N});
  if (spec.dump) std::filesystem::create_directories(join_path(dir, "matrices"));
  for (const auto& it : items) {
    const OperatorSet ops = build_operator_set(it.type, it.N, it.mode);
    const SbpResidualReport r = verify_sbp(ops);
    const std::string et = it.type == ElementType::interval ? "interval" : "triangle";
    t.add(et, to_string(it.mode), it.N, r.lemma, r.sbp, r.nullspace, r.projection, r.recovery, r.weighted,
          r.max_identity());
    if (r.max_identity() >= 1e-12)
      out.fail(kExitOracle, et + " " + to_string(it.mode) + " N=" + std::to_string(it.N) + ": residual " +
                                fmt(r.max_identity()));
    if (spec.dump) {
      const std::string base = join_path(dir, "matrices/" + et + "_" + to_string(it.mode) + "_N" + std::to_string(it.N) + "_");
      write_matrix_csv(base + "W.csv", ops.W);
      write_matrix_csv(base + "Wf.csv", ops.Wf);
      write_matrix_csv(base + "Vq.csv", ops.Vq);
      write_matrix_csv(base + "Vf.csv", ops.Vf);
      write_matrix_csv(base + "M.csv", ops.M);
      write_matrix_csv(base + "Pq.csv", ops.Pq);
      write_matrix_csv(base + "Lq.csv", ops.Lq);
      for (int d = 0; d < ops.dim(); ++d) {
        const std::string s = std::to_string(d);
        write_matrix_csv(base + "D" + s + ".csv", ops.D[static_cast<std::size_t>(d)]);
        write_matrix_csv(base + "DN" + s + ".csv", ops.DN[static_cast<std::size_t>(d)]);
        write_matrix_csv(base + "QN" + s + ".csv", ops.QN[static_cast<std::size_t>(d)]);
        write_matrix_csv(base + "BN" + s + ".csv", ops.BN[static_cast<std::size_t>(d)]);
      }
    }
  }
  write_csv(join_path(dir, "residuals.csv"), t);
  emit_series_plot(join_path(dir, "residuals.csv"), join_path(dir, "residuals.svg"), "operator identity residuals",
                   "N", {"max"}, "quadrature", true);
  out.note("checked " + std::to_string(items.size()) + " operator sets");
  return out;
}

struct FluxCheckRow {
  std::string model, check;
  double value, tolerance;
};

inline std::vector<FluxCheckRow> flux_checks(int trials) {
  std::vector<FluxCheckRow> rows;
  const BurgersModel<1> b;
  const EulerModel<1> e1;
  const EulerModel<2> e2;
  rows.push_back({"burgers", "tadmor", tadmor_check(b, 10 * trials), 1e-13});
  rows.push_back({"burgers", "symmetry", symmetry_check(b, trials), 1e-15});
  rows.push_back({"burgers", "consistency", consistency_check(b, trials), 1e-15});
  auto euler = [&](const auto& m, const std::string& name) {
    rows.push_back({name, "tadmor", tadmor_check(m, trials), 1e-11});
    rows.push_back({name, "symmetry", symmetry_check(m, trials), 1e-14});
    rows.push_back({name, "consistency", consistency_check(m, trials), 1e-13});
    rows.push_back({name, "entropy_roundtrip", entropy_roundtrip_check(m, trials), 1e-10});
    rows.push_back({name, "entropy_gradient", entropy_gradient_check(m, trials), 1e-6});
  };
  euler(e1, "euler1d");
  euler(e2, "euler2d");
  return rows;
}

inline Outcome run_flux_check(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table t({"model", "check", "value", "tolerance", "pass"});
  for (const auto& r : flux_checks(spec.trials)) {
    const bool ok = r.value < r.tolerance;
    t.add(r.model, r.check, r.value, r.tolerance, ok ? "yes" : "no");
    if (!ok) out.fail(kExitOracle, r.model + " " + r.check + ": " + fmt(r.value) + " >= " + fmt(r.tolerance));
  }
  write_csv(join_path(dir, "flux_checks.csv"), t);
  return out;
}

inline Outcome run_entropy_wave(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table err = errors_table();
  Table fields({"N", "K", "h", "rho_error", "momentum_error", "energy_error"});
  for (int N : spec.N)
    for (int K : spec.K) {
      const Discretization d = discretization(spec, N, spec.log_eps.front());
      auto r = entropy_wave_case(d, K, spec.cfl.front(), spec.final_time);
      const std::string label = label_of(d, K);
      if (r.c.run.blew_up) {
        out.fail(kExitBlowUp, label + ": " + r.c.run.message);
        continue;
      }
      add_error_row(err, N, to_string(d.quad), to_string(d.flux), r.h, r.error.combined, K);
      fields.add(N, K, r.h, r.error.fields(0), r.error.fields(1), r.error.fields(2));
      check_conservation(out, r.c.run, label, true);
      out.note(label + ": L2 error " + fmt(r.error.combined));
    }
  write_csv(join_path(dir, "errors.csv"), err);
  write_csv(join_path(dir, "field_errors.csv"), fields);
  if (!err.empty())
    for (const auto& s : emit_convergence_plot(join_path(dir, "errors.csv"), join_path(dir, "convergence.svg"),
                                               "entropy wave"))
      out.note(s.group + ": least-squares rate " + fmt(s.slope));
  if (out.exit_code == kExitBlowUp) write_status(dir, "blow-up; partial results");
  return out;
}

template <int Dim>
Outcome run_pulse(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table ent = entropy_table({"log_eps", "cfl", "dt"});
  Table fin({"log_eps", "cfl", "dt", "delta_U_final", "max_delta", "max_conservation_residual", "rate"});
  bool snap = false;
  for (double eps : spec.log_eps) {
    std::vector<double> dts, dus;
    for (double cfl : spec.cfl) {
      const Discretization d = discretization(spec, spec.N.front(), eps);
      const int K = spec.K.front();
      auto c = pulse_case<Dim>(d, K, cfl, spec.final_time, spec.output_every);
      const auto& r = c.run;
      add_entropy_rows(ent, r, eps, cfl, r.dt);
      const std::string label = label_of(d, K) + " cfl=" + fmt(cfl) + " eps=" + fmt(eps);
      if (r.blew_up) {
        out.fail(kExitBlowUp, label + ": " + r.message);
        continue;
      }
      check_conservation(out, r, label, true);
      const double dU = r.rows.back().delta_U;
      std::string rate;
      if (!dts.empty()) rate = fmt(std::log(dus.back() / dU) / std::log(dts.back() / r.dt));
      dts.push_back(r.dt);
      dus.push_back(dU);
      fin.add(eps, cfl, r.dt, dU, r.max_delta, r.max_conservation_residual, rate);
      out.note(label + ": dU(T) " + fmt(dU) + ", max delta " + fmt(r.max_delta));
      if (!snap) {
        snap = true;
        if constexpr (Dim == 1) {
          write_csv(join_path(dir, "snapshot_T.csv"), snapshot_points_1d(c.solver, r.u, 12));
          write_csv(join_path(dir, "snapshot_T_cells.csv"), snapshot_cells<1>(c.solver, r.u));
        } else {
          write_csv(join_path(dir, "snapshot_T_cells.csv"), snapshot_cells<2>(c.solver, r.u));
          write_text(join_path(dir, "snapshot_T.svg"), density_map_svg(c.solver, r.u, "density at T"));
        }
      }
    }
  }
  write_csv(join_path(dir, "entropy.csv"), ent);
  write_csv(join_path(dir, "entropy_final.csv"), fin);
  if (!ent.empty())
    emit_series_plot(join_path(dir, "entropy.csv"), join_path(dir, "entropy.svg"), "entropy change", "t", {"delta_U"},
                     "cfl", true);
  if (fin.rows.size() >= 2) {
    PlotSpec p;
    p.title = "dU(T) against time step";
    const auto slopes = convergence_plot(read_csv(join_path(dir, "entropy_final.csv")), "dt", "delta_U_final",
                                         {"log_eps"}, p);
    write_svg(join_path(dir, "entropy_rate.svg"), p);
    for (const auto& s : slopes) out.note(s.group + ": dU(T) order in dt " + fmt(s.slope));
  }
  if constexpr (Dim == 1)
    if (snap)
      emit_snapshot_plot(join_path(dir, "snapshot_T.csv"), join_path(dir, "snapshot_T_cells.csv"),
                         join_path(dir, "snapshot_T.svg"), "rho", "density at T");
  if (out.exit_code == kExitBlowUp) write_status(dir, "blow-up; partial results");
  return out;
}

inline Outcome run_sod(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table l1({"N", "K", "quadrature", "flux", "L1_rho", "L1_momentum", "L1_energy", "blew_up", "blowup_time"});
  Table ent = entropy_table({"N", "K"});
  const bool expect_blowup = spec.flux == FluxMode::ec;
  for (int N : spec.N)
    for (int K : spec.K) {
      const Discretization d = discretization(spec, N, spec.log_eps.front());
      auto r = sod_case(d, K, spec.cfl.front(), spec.final_time, spec.output_every);
      const auto& run = r.c.run;
      const std::string label = label_of(d, K);
      add_entropy_rows(ent, run, N, K);
      if (run.blew_up) {
        l1.add(N, K, to_string(d.quad), to_string(d.flux), "", "", "", "yes", run.blowup_time);
        if (expect_blowup) out.note(label + ": diverged as expected (" + run.message + ")");
        else out.fail(kExitBlowUp, label + ": " + run.message);
        continue;
      }
      l1.add(N, K, to_string(d.quad), to_string(d.flux), r.l1(0), r.l1(1), r.l1(2), "no", "");
      check_conservation(out, run, label, false);
      if (expect_blowup) out.fail(kExitOracle, label + ": entropy conservative run did not diverge");
      out.note(label + ": cell-average L1 density error " + fmt(r.l1(0)));
      const double t = run.t;
      const auto& m = r.c.solver.model();
      const std::string tag = "N" + std::to_string(N) + "_K" + std::to_string(K);
      write_csv(join_path(dir, "snapshot_" + tag + ".csv"),
                snapshot_points_1d(r.c.solver, run.u, 12, [&](double x) { return sod_exact(m, x, t); }));
      write_csv(join_path(dir, "snapshot_" + tag + "_cells.csv"), snapshot_cells<1>(r.c.solver, run.u));
      emit_snapshot_plot(join_path(dir, "snapshot_" + tag + ".csv"), join_path(dir, "snapshot_" + tag + "_cells.csv"),
                         join_path(dir, "snapshot_" + tag + "_rho.svg"), "rho", "Sod density");
      emit_snapshot_plot(join_path(dir, "snapshot_" + tag + ".csv"), join_path(dir, "snapshot_" + tag + "_cells.csv"),
                         join_path(dir, "snapshot_" + tag + "_p.svg"), "p", "Sod pressure");
    }
  write_csv(join_path(dir, "l1_errors.csv"), l1);
  write_csv(join_path(dir, "entropy.csv"), ent);
  if (!ent.empty())
    emit_series_plot(join_path(dir, "entropy.csv"), join_path(dir, "entropy.svg"), "total entropy", "t",
                     {"total_entropy"}, "K", false);
  if (out.exit_code == kExitBlowUp) write_status(dir, "blow-up; partial results");
  if (expect_blowup && out.exit_code == kExitOk) write_status(dir, "expected divergence observed");
  return out;
}

inline Outcome run_sine_shock(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table ent = entropy_table({"N", "K", "cfl"});
  for (int N : spec.N)
    for (int K : spec.K)
      for (double cfl : spec.cfl) {
        const Discretization d = discretization(spec, N, spec.log_eps.front());
        auto c = sine_shock_case(d, K, cfl, spec.final_time, spec.output_every);
        const auto& r = c.run;
        const std::string label = label_of(d, K) + " cfl=" + fmt(cfl);
        add_entropy_rows(ent, r, N, K, cfl);
        if (r.blew_up) {
          out.fail(kExitBlowUp, label + ": " + r.message);
          continue;
        }
        check_conservation(out, r, label, false);
        out.note(label + ": completed, min density " + fmt(r.rows.back().min_density));
        const std::string tag = "N" + std::to_string(N) + "_K" + std::to_string(K) + "_cfl" + fmt(cfl);
        write_csv(join_path(dir, "snapshot_" + tag + ".csv"), snapshot_points_1d(c.solver, r.u, 12));
        write_csv(join_path(dir, "snapshot_" + tag + "_cells.csv"), snapshot_cells<1>(c.solver, r.u));
        emit_snapshot_plot(join_path(dir, "snapshot_" + tag + ".csv"), join_path(dir, "snapshot_" + tag + "_cells.csv"),
                           join_path(dir, "snapshot_" + tag + ".svg"), "rho", "sine-shock density");
      }
  write_csv(join_path(dir, "entropy.csv"), ent);
  if (out.exit_code == kExitBlowUp) write_status(dir, "blow-up; partial results");
  return out;
}

inline Outcome run_vortex(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table err = errors_table();
  for (int N : spec.N)
    for (int K : spec.K) {
      const Discretization d = discretization(spec, N, spec.log_eps.front());
      auto r = vortex_case(d, K, spec.cfl.front(), spec.final_time, spec.output_every);
      const std::string label = label_of(d, K);
      if (r.c.run.blew_up) {
        out.fail(kExitBlowUp, label + ": " + r.c.run.message);
        continue;
      }
      add_error_row(err, N, "tri2n", to_string(d.flux), r.h, r.error.combined, K);
      check_conservation(out, r.c.run, label, true);
      out.note(label + ": L2 error " + fmt(r.error.combined));
      write_csv(join_path(dir, "errors.csv"), err);  // keep partial sweeps
    }
  write_csv(join_path(dir, "errors.csv"), err);
  if (!err.empty())
    for (const auto& s :
         emit_convergence_plot(join_path(dir, "errors.csv"), join_path(dir, "convergence.svg"), "isentropic vortex"))
      out.note(s.group + ": least-squares rate " + fmt(s.slope));
  if (out.exit_code == kExitBlowUp) write_status(dir, "blow-up; partial results");
  return out;
}

inline Outcome run_riemann_2d(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table ent = entropy_table({"N", "K"});
  for (int N : spec.N)
    for (int K : spec.K) {
      const Discretization d = discretization(spec, N, spec.log_eps.front());
      auto c = riemann_2d_case(d, K, spec.cfl.front(), spec.final_time, spec.output_every);
      const auto& r = c.run;
      const std::string label = label_of(d, K);
      add_entropy_rows(ent, r, N, K);
      if (r.blew_up) {
        out.fail(kExitBlowUp, label + ": " + r.message);
        continue;
      }
      check_conservation(out, r, label, true);
      const auto [rmin, pmin] = c.solver.min_density_pressure(r.u);
      out.note(label + ": completed, min density " + fmt(rmin) + ", min pressure " + fmt(pmin));
      const std::string tag = "N" + std::to_string(N) + "_K" + std::to_string(K);
      write_csv(join_path(dir, "snapshot_" + tag + "_cells.csv"), snapshot_cells<2>(c.solver, r.u));
      write_text(join_path(dir, "snapshot_" + tag + ".svg"), density_map_svg(c.solver, r.u, "density at T"));
    }
  write_csv(join_path(dir, "entropy.csv"), ent);
  if (!ent.empty())
    emit_series_plot(join_path(dir, "entropy.csv"), join_path(dir, "entropy.svg"), "total entropy", "t",
                     {"total_entropy"}, "K", false);
  if (out.exit_code == kExitBlowUp) write_status(dir, "blow-up; partial results");
  return out;
}

inline Outcome run_projection_study(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table err = errors_table();
  for (int dim : {1, 2})
    for (int N : spec.N) {
      if (dim == 2 && 2 * N + 2 > kMaxTriangleDegree) continue;
      for (int K : spec.K) {
        const auto [h, e] = projection_case(dim, N, K);
        add_error_row(err, N, dim == 1 ? "gauss2" : "tri2n", "none", h, e, K);
      }
    }
  write_csv(join_path(dir, "errors.csv"), err);
  for (const auto& s : emit_convergence_plot(join_path(dir, "errors.csv"), join_path(dir, "convergence.svg"),
                                             "entropy projection error"))
    out.note(s.group + ": least-squares rate " + fmt(s.slope));
  return out;
}

inline Outcome run_burgers_equivalence(const ExperimentSpec& spec) {
  Outcome out;
  const std::string dir = prepare_output(spec);
  Table t({"N", "quadrature", "K", "trials", "max_difference"});
  for (auto mode : {QuadratureMode::gll, QuadratureMode::gauss1})
    for (int N : spec.N) {
      const double diff = burgers_equivalence_case(N, mode, spec.K.front(), spec.trials);
      t.add(N, to_string(mode), spec.K.front(), spec.trials, diff);
      if (diff >= 1e-12)
        out.fail(kExitOracle, std::string(to_string(mode)) + " N=" + std::to_string(N) + ": difference " + fmt(diff));
    }
  write_csv(join_path(dir, "equivalence.csv"), t);
  return out;
}

inline Outcome run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const std::string& e = spec.experiment;
  if (e == "ops-check") return run_ops_check(spec);
  if (e == "flux-check") return run_flux_check(spec);
  if (e == "entropy-wave") return run_entropy_wave(spec);
  if (e == "pulse-1d") return run_pulse<1>(spec);
  if (e == "sod") return run_sod(spec);
  if (e == "sine-shock") return run_sine_shock(spec);
  if (e == "pulse-2d") return run_pulse<2>(spec);
  if (e == "vortex") return run_vortex(spec);
  if (e == "riemann-2d") return run_riemann_2d(spec);
  if (e == "projection-study") return run_projection_study(spec);
  if (e == "burgers-equivalence") return run_burgers_equivalence(spec);
  throw Error(ErrorKind::config_error, "unknown experiment '" + e + "'");
}

}  // namespace esdg::harness
