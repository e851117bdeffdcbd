#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "esdg/detail/parallel.hpp"
#include "esdg/error.hpp"
#include "esdg/flux_checks.hpp"
#include "esdg/mesh.hpp"
#include "esdg/operators.hpp"

namespace esdg {

enum class FluxMode { ec, eclf };

inline const char* to_string(FluxMode m) { return m == FluxMode::ec ? "ec" : "eclf"; }

inline FluxMode flux_mode_from_string(const std::string& s) {
  if (s == "ec") return FluxMode::ec;
  if (s == "eclf" || s == "lf") return FluxMode::eclf;
  throw Error(ErrorKind::invalid_argument, "unknown flux mode '" + s + "'");
}

/// Modal coefficients, one Np x nvar block per element.
using Field = std::vector<Eigen::MatrixXd>;

struct SolverOptions {
  FluxMode flux = FluxMode::ec;
  // When false the two-point fluxes see the interpolated conservative
  // variables instead of u(Π_N v). Only useful as a negative control.
  bool entropy_projection = true;
  int threads = 1;
};

/// Trace-inequality constant used in the time step restriction.
inline double trace_constant(int N) { return 0.5 * (N + 1) * (N + 1); }

inline double stable_time_step(double cfl, double h, int N) { return cfl * h / trace_constant(N); }

namespace detail {

template <class State>
using StateVector = std::vector<State, Eigen::aligned_allocator<State>>;

/// Adds Σ_i (2 Q^i ∘ F_i) 1 to r, where Q^i = Σ_j JG(i,j) Q̂_N^j.
template <class Model>
void accumulate_volume(const Model& model, const OperatorSet& ops,
                       const Eigen::Matrix<double, Model::dim, Model::dim>& JG, const typename Model::State* ut,
                       const typename Model::Aux* aux, typename Model::State* r) {
  using State = typename Model::State;
  constexpr int D = Model::dim;
  const int nh = ops.num_hybrid_points();
  for (int a = 0; a < nh; ++a) {
    State acc = State::Zero();
    for (int i = 0; i < D; ++i) {
      double q = 0.0;
      for (int j = 0; j < D; ++j) q += JG(i, j) * ops.QN_diag(a, j);
      if (q != 0.0) acc += (2.0 * q) * model.flux(ut[a], i);
    }
    r[a] += acc;
  }
  for (const auto& p : ops.pairs) {
    std::array<double, D> qab{}, qba{};
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) {
        qab[static_cast<std::size_t>(i)] += JG(i, j) * p.qab[static_cast<std::size_t>(j)];
        qba[static_cast<std::size_t>(i)] += JG(i, j) * p.qba[static_cast<std::size_t>(j)];
      }
    }
    const auto F = model.ec_flux(aux[p.a], aux[p.b]);
    State fa = (2.0 * qab[0]) * F[0];
    State fb = (2.0 * qba[0]) * F[0];
    for (int i = 1; i < D; ++i) {
      fa += (2.0 * qab[static_cast<std::size_t>(i)]) * F[static_cast<std::size_t>(i)];
      fb += (2.0 * qba[static_cast<std::size_t>(i)]) * F[static_cast<std::size_t>(i)];
    }
    r[p.a] += fa;
    r[p.b] += fb;
  }
}

/// Normal numerical flux f*·n at one surface point (stored in fstar) and the
/// returned difference f*·n - f(ũ)·n.
template <class Model>
typename Model::State surface_flux_difference(const Model& model, const typename Model::State& u,
                                              const typename Model::Aux& a, const typename Model::State& up,
                                              const typename Model::Aux& ap,
                                              const Eigen::Matrix<double, Model::dim, 1>& n, FluxMode mode,
                                              typename Model::State& fstar) {
  using State = typename Model::State;
  const auto F = model.ec_flux(ap, a);
  State fs = State::Zero(), fi = State::Zero();
  for (int i = 0; i < Model::dim; ++i) {
    fs += n(i) * F[static_cast<std::size_t>(i)];
    fi += n(i) * model.flux(u, i);
  }
  if (mode == FluxMode::eclf) fs += lax_friedrichs_penalty(u, up, model.wavespeed(a, ap, n));
  fstar = fs;
  return fs - fi;
}

/// -(1/J) M^{-1} [Vq; Vf]^T R for hybrid-point residual rows r.
template <class State>
Eigen::MatrixXd lift(const OperatorSet& ops, double J, const State* r) {
  constexpr int nv = State::RowsAtCompileTime;
  Eigen::Map<const Eigen::Matrix<double, nv, Eigen::Dynamic>> R(r->data(), nv, ops.num_hybrid_points());
  return (-1.0 / J) * (ops.Minv_VNt * R.transpose());
}

}  // namespace detail

/// Volume contribution for one element from entropy-projected values ũ at
/// the hybrid (volume + surface) points.
template <class Model>
Eigen::MatrixXd volume_rhs(const Model& model, const OperatorSet& ops, const ElementGeometry& geom,
                           const detail::StateVector<typename Model::State>& ut) {
  using State = typename Model::State;
  std::vector<typename Model::Aux> aux;
  aux.reserve(ut.size());
  for (const auto& u : ut) aux.push_back(model.auxiliary(u));
  detail::StateVector<State> r(ut.size(), State::Zero());
  const Eigen::Matrix<double, Model::dim, Model::dim> JG = geom.JG;
  detail::accumulate_volume(model, ops, JG, ut.data(), aux.data(), r.data());
  return detail::lift(ops, geom.J, r.data());
}

/// Interface contribution for one element given interior traces ũ_f and
/// exterior traces ũ_f^+ at its surface points.
template <class Model>
Eigen::MatrixXd interface_rhs(const Model& model, const OperatorSet& ops, const ElementGeometry& geom,
                              const detail::StateVector<typename Model::State>& uf,
                              const detail::StateVector<typename Model::State>& uplus, FluxMode mode) {
  using State = typename Model::State;
  const int nq = ops.num_volume_points(), nf = ops.num_surface_points();
  detail::StateVector<State> r(static_cast<std::size_t>(nq + nf), State::Zero());
  for (int f = 0; f < nf; ++f) {
    const int face = ops.elem.face_of_point[static_cast<std::size_t>(f)];
    const Eigen::Matrix<double, Model::dim, 1> n = geom.face_normals.row(face).transpose();
    State fstar;
    const auto& u = uf[static_cast<std::size_t>(f)];
    const auto& up = uplus[static_cast<std::size_t>(f)];
    r[static_cast<std::size_t>(nq + f)] =
        ops.Wf(f) * geom.face_scale(face) *
        detail::surface_flux_difference(model, u, model.auxiliary(u), up, model.auxiliary(up), n, mode, fstar);
  }
  return detail::lift(ops, geom.J, r.data());
}

/// Multi-element DG discretization on an affine mesh.
///
/// rhs() runs in two phases: every element first computes its entropy
/// projected values at volume and surface points, then every element
/// assembles volume and interface terms reading its neighbours' traces.
template <class Model>
class DGSolver {
 public:
  using State = typename Model::State;
  using Aux = typename Model::Aux;
  using Vec = Eigen::Matrix<double, Model::dim, 1>;
  static constexpr int nv = Model::num_vars;
  using Initial = std::function<State(const Eigen::VectorXd&)>;

  DGSolver(Model model, OperatorSet ops, Mesh mesh, SolverOptions opt = {})
      : model_(std::move(model)), ops_(std::move(ops)), mesh_(std::move(mesh)), opt_(opt) {
    if (mesh_.dim != Model::dim || ops_.elem.type != mesh_.type)
      throw Error(ErrorKind::invalid_argument, "model, operators and mesh dimensions differ");
    conn_ = connect_faces(mesh_, ops_.elem);
    const int K = mesh_.num_elements();
    const int nf = ops_.num_surface_points(), nh = ops_.num_hybrid_points();
    normals_.resize(static_cast<std::size_t>(K * nf));
    scale_.resize(static_cast<std::size_t>(K * nf));
    for (int k = 0; k < K; ++k) {
      const auto& g = mesh_.geometry[static_cast<std::size_t>(k)];
      for (int f = 0; f < nf; ++f) {
        const int face = ops_.elem.face_of_point[static_cast<std::size_t>(f)];
        normals_[static_cast<std::size_t>(k * nf + f)] = g.face_normals.row(face).transpose();
        scale_[static_cast<std::size_t>(k * nf + f)] = g.face_scale(face);
      }
      volume_points_.push_back(mesh_.map_points(k, ops_.elem.volume.points));
    }
    ut_.assign(static_cast<std::size_t>(K * nh), State::Zero());
    aux_.resize(static_cast<std::size_t>(K * nh));
    fstar_.assign(static_cast<std::size_t>(K * nf), State::Zero());
    vh_.assign(static_cast<std::size_t>(K), Eigen::MatrixXd::Zero(ops_.num_basis(), nv));
    exterior_.assign(static_cast<std::size_t>(K * nf), State::Zero());
    exterior_aux_.resize(static_cast<std::size_t>(K * nf));
  }

  const Model& model() const { return model_; }
  const OperatorSet& ops() const { return ops_; }
  const Mesh& mesh() const { return mesh_; }
  const Connectivity& connectivity() const { return conn_; }
  const SolverOptions& options() const { return opt_; }
  SolverOptions& options() { return opt_; }
  int num_elements() const { return mesh_.num_elements(); }
  const Eigen::MatrixXd& volume_points(int k) const { return volume_points_[static_cast<std::size_t>(k)]; }

  /// Fixes the exterior state at domain-boundary points (Dirichlet data
  /// imposed only through the numerical flux).
  void set_exterior_state(const Initial& g) {
    for (std::size_t p = 0; p < conn_.boundary.size(); ++p) {
      if (!conn_.boundary[p]) continue;
      exterior_[p] = g(conn_.coords.row(static_cast<Eigen::Index>(p)).transpose());
      if (!model_.admissible(exterior_[p])) throw Error(ErrorKind::invalid_state, "inadmissible exterior state");
      exterior_aux_[p] = model_.auxiliary(exterior_[p]);
    }
    has_exterior_ = true;
  }

  Field zeros() const {
    return Field(static_cast<std::size_t>(num_elements()), Eigen::MatrixXd::Zero(ops_.num_basis(), nv));
  }

  /// Quadrature L2 projection of a pointwise function.
  Field project(const Initial& f) const {
    Field u = zeros();
    const int nq = ops_.num_volume_points();
    for (int k = 0; k < num_elements(); ++k) {
      Eigen::MatrixXd uq(nq, nv);
      const auto& x = volume_points(k);
      for (int a = 0; a < nq; ++a) uq.row(a) = f(x.row(a).transpose()).transpose();
      u[static_cast<std::size_t>(k)] = ops_.Pq * uq;
    }
    return u;
  }

  /// du_h/dt for every element.
  void rhs(const Field& u, double t, Field& du) {
    if (conn_.num_boundary() > 0 && !has_exterior_)
      throw Error(ErrorKind::invalid_argument, "mesh has boundary points but no exterior state was set");
    const int K = num_elements();
    if (static_cast<int>(du.size()) != K) du = zeros();
    detail::parallel_for(K, opt_.threads, [&](int k) { project_element(u, t, k); });
    detail::parallel_for(K, opt_.threads, [&](int k) { assemble_element(k, du); });
  }

  // Diagnostics that reuse data from the most recent rhs() call.

  /// Σ_k J v_h^T M du_h/dt with v_h the projected entropy variables.
  double entropy_residual(const Field& du) const {
    double s = 0.0;
    for (int k = 0; k < num_elements(); ++k) {
      const double J = mesh_.geometry[static_cast<std::size_t>(k)].J;
      s += J * (vh_[static_cast<std::size_t>(k)].cwiseProduct(ops_.M * du[static_cast<std::size_t>(k)])).sum();
    }
    return std::abs(s);
  }

  /// Per element: max over components of |1^T W J du_q/dt + 1^T W_f J_f (f*·n)|.
  Eigen::VectorXd local_conservation_residuals(const Field& du) const {
    const int K = num_elements(), nf = ops_.num_surface_points();
    Eigen::VectorXd res(K);
    for (int k = 0; k < K; ++k) {
      const double J = mesh_.geometry[static_cast<std::size_t>(k)].J;
      Eigen::RowVectorXd sum = J * (ops_.W.transpose() * (ops_.Vq * du[static_cast<std::size_t>(k)]));
      for (int f = 0; f < nf; ++f) {
        const std::size_t p = static_cast<std::size_t>(k * nf + f);
        sum += ops_.Wf(f) * scale_[p] * fstar_[p].transpose();
      }
      res(k) = sum.cwiseAbs().maxCoeff();
    }
    return res;
  }

  /// Global integrals Σ_k J 1^T W u_q of each conserved variable.
  Eigen::VectorXd conserved_totals(const Field& u) const {
    Eigen::VectorXd tot = Eigen::VectorXd::Zero(nv);
    for (int k = 0; k < num_elements(); ++k) {
      const double J = mesh_.geometry[static_cast<std::size_t>(k)].J;
      tot += J * (ops_.Vq * u[static_cast<std::size_t>(k)]).transpose() * ops_.W;
    }
    return tot;
  }

  /// Σ_k J 1^T W U(u_q).
  double total_entropy(const Field& u) const {
    double s = 0.0;
    for (int k = 0; k < num_elements(); ++k) {
      const double J = mesh_.geometry[static_cast<std::size_t>(k)].J;
      const Eigen::MatrixXd uq = ops_.Vq * u[static_cast<std::size_t>(k)];
      for (int a = 0; a < uq.rows(); ++a) {
        const State st = uq.row(a).transpose();
        if (!model_.admissible(st)) throw Error(ErrorKind::invalid_state, "inadmissible state in entropy sum");
        s += J * ops_.W(a) * model_.entropy(st);
      }
    }
    return s;
  }

  /// Minimum density and pressure over volume quadrature points (NaN for
  /// models without those quantities).
  std::pair<double, double> min_density_pressure(const Field& u) const {
    double rmin = std::numeric_limits<double>::quiet_NaN(), pmin = rmin;
    if constexpr (requires(const Model& m, const State& s) { m.pressure(s); }) {
      rmin = pmin = std::numeric_limits<double>::infinity();
      for (int k = 0; k < num_elements(); ++k) {
        const Eigen::MatrixXd uq = ops_.Vq * u[static_cast<std::size_t>(k)];
        for (int a = 0; a < uq.rows(); ++a) {
          const State st = uq.row(a).transpose();
          rmin = std::min(rmin, st(0));
          pmin = std::min(pmin, model_.pressure(st));
        }
      }
    }
    return {rmin, pmin};
  }

  /// Entropy-projected values ũ at the hybrid points of element k, from
  /// the most recent rhs() call.
  detail::StateVector<State> projected_values(int k) const {
    const int nh = ops_.num_hybrid_points();
    return detail::StateVector<State>(ut_.begin() + k * nh, ut_.begin() + (k + 1) * nh);
  }

 private:
  [[noreturn]] void blow_up(double t, int k, int a, const char* what) const {
    std::ostringstream os;
    os << what << " at t=" << t << " element " << k << " point " << a;
    throw BlowUpError(os.str(), t, k, a);
  }

  void project_element(const Field& u, double t, int k) {
    const int nq = ops_.num_volume_points(), nh = ops_.num_hybrid_points();
    const auto& uk = u[static_cast<std::size_t>(k)];
    const Eigen::MatrixXd uq = ops_.Vq * uk;
    Eigen::MatrixXd vq(nq, nv);
    for (int a = 0; a < nq; ++a) {
      const State s = uq.row(a).transpose();
      if (!model_.admissible(s)) blow_up(t, k, a, "inadmissible state");
      vq.row(a) = model_.entropy_vars(s).transpose();
    }
    vh_[static_cast<std::size_t>(k)] = ops_.Pq * vq;
    State* ut = ut_.data() + static_cast<std::size_t>(k * nh);
    Aux* aux = aux_.data() + static_cast<std::size_t>(k * nh);
    if (opt_.entropy_projection) {
      const Eigen::MatrixXd vt = ops_.VN_Pq * vq;
      for (int a = 0; a < nh; ++a) {
        try {
          ut[a] = model_.from_entropy_vars(vt.row(a).transpose());
        } catch (const Error&) {
          blow_up(t, k, a, "entropy projection left the admissible set");
        }
      }
    } else {
      const Eigen::MatrixXd raw = ops_.VN * uk;
      for (int a = 0; a < nh; ++a) {
        ut[a] = raw.row(a).transpose();
        if (!model_.admissible(ut[a])) blow_up(t, k, a, "inadmissible trace");
      }
    }
    for (int a = 0; a < nh; ++a) aux[a] = model_.auxiliary(ut[a]);
  }

  void assemble_element(int k, Field& du) {
    const int nq = ops_.num_volume_points(), nf = ops_.num_surface_points(), nh = nq + nf;
    const auto& g = mesh_.geometry[static_cast<std::size_t>(k)];
    const State* ut = ut_.data() + static_cast<std::size_t>(k * nh);
    const Aux* aux = aux_.data() + static_cast<std::size_t>(k * nh);
    detail::StateVector<State> r(static_cast<std::size_t>(nh), State::Zero());
    const Eigen::Matrix<double, Model::dim, Model::dim> JG = g.JG;
    detail::accumulate_volume(model_, ops_, JG, ut, aux, r.data());
    for (int f = 0; f < nf; ++f) {
      const std::size_t p = static_cast<std::size_t>(k * nf + f);
      const State* up;
      const Aux* ap;
      if (conn_.boundary[p]) {
        up = &exterior_[p];
        ap = &exterior_aux_[p];
      } else {
        const int e = conn_.exterior[p];
        const std::size_t idx = static_cast<std::size_t>((e / nf) * nh + nq + e % nf);
        up = &ut_[idx];
        ap = &aux_[idx];
      }
      r[static_cast<std::size_t>(nq + f)] +=
          (ops_.Wf(f) * scale_[p]) *
          detail::surface_flux_difference(model_, ut[nq + f], aux[nq + f], *up, *ap, normals_[p], opt_.flux, fstar_[p]);
    }
    du[static_cast<std::size_t>(k)] = detail::lift(ops_, g.J, r.data());
  }

  Model model_;
  OperatorSet ops_;
  Mesh mesh_;
  SolverOptions opt_;
  Connectivity conn_;
  std::vector<Vec, Eigen::aligned_allocator<Vec>> normals_;
  std::vector<double> scale_;
  std::vector<Eigen::MatrixXd> volume_points_;
  detail::StateVector<State> ut_;
  std::vector<Aux, Eigen::aligned_allocator<Aux>> aux_;
  detail::StateVector<State> fstar_;
  std::vector<Eigen::MatrixXd> vh_;
  detail::StateVector<State> exterior_;
  std::vector<Aux, Eigen::aligned_allocator<Aux>> exterior_aux_;
  bool has_exterior_ = false;
};

}  // namespace esdg
