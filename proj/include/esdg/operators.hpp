#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "esdg/basis.hpp"
#include "esdg/error.hpp"
#include "esdg/reference_element.hpp"

namespace esdg {

/// All quadrature-based matrices for one reference element. Immutable once
/// built; safe to share read-only.
///
/// Naming follows the block layout over the combined set of volume points
/// followed by surface points ("hybrid" points, Nh = Nq + Nf).
struct OperatorSet {
  ReferenceElement elem;

  Eigen::VectorXd W;   // volume weights (diagonal)
  Eigen::VectorXd Wf;  // surface weights (diagonal), reference face Jacobian included
  Eigen::VectorXd WN;  // [W; Wf]
  Eigen::MatrixXd Vq, Vf, VN;
  Eigen::MatrixXd M, Minv;
  Eigen::MatrixXd Pq, Lq;
  std::vector<Eigen::MatrixXd> D;   // modal derivative, Np x Np
  std::vector<Eigen::MatrixXd> Dq;  // Vq D Pq
  std::vector<Eigen::MatrixXd> DN;  // decoupled operator, Nh x Nh
  std::vector<Eigen::MatrixXd> QN;  // WN DN
  std::vector<Eigen::MatrixXd> BN;  // diag(0, Wf n̂)

  Eigen::MatrixXd VN_Pq;     // hybrid-point evaluation of the projection, Nh x Nq
  Eigen::MatrixXd Minv_VNt;  // M^{-1} VN^T, Np x Nh

  /// Nonzero off-diagonal pattern of the QN family, stored once per
  /// unordered pair (a < b). `qab[d]` = QN[d](a,b), `qba[d]` = QN[d](b,a).
  struct Pair {
    int a;
    int b;
    std::array<double, 2> qab{};
    std::array<double, 2> qba{};
  };
  std::vector<Pair> pairs;
  Eigen::MatrixXd QN_diag;  // Nh x dim diagonal entries

  int dim() const { return elem.dim(); }
  int num_basis() const { return elem.num_basis; }
  int num_volume_points() const { return static_cast<int>(W.size()); }
  int num_surface_points() const { return static_cast<int>(Wf.size()); }
  int num_hybrid_points() const { return num_volume_points() + num_surface_points(); }
};

namespace detail {

inline Eigen::MatrixXd decoupled_operator(const Eigen::MatrixXd& Dq, const Eigen::MatrixXd& Vq,
                                          const Eigen::MatrixXd& Vf, const Eigen::MatrixXd& Pq,
                                          const Eigen::MatrixXd& Lq, const Eigen::VectorXd& nhat) {
  const Eigen::Index nq = Vq.rows(), nf = Vf.rows();
  Eigen::MatrixXd DN(nq + nf, nq + nf);
  const Eigen::MatrixXd VqLqN = Vq * Lq * nhat.asDiagonal();
  const Eigen::MatrixXd NVfPq = nhat.asDiagonal() * Vf * Pq;
  DN.topLeftCorner(nq, nq) = Dq - 0.5 * VqLqN * Vf * Pq;
  DN.topRightCorner(nq, nf) = 0.5 * VqLqN;
  DN.bottomLeftCorner(nf, nq) = -0.5 * NVfPq;
  DN.bottomRightCorner(nf, nf) = 0.5 * Eigen::MatrixXd(nhat.asDiagonal());
  return DN;
}

inline double max_abs(const Eigen::MatrixXd& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace detail

/// Largest condition number of M accepted by `build_operator_set`.
inline constexpr double kMaxMassCondition = 1e8;

inline OperatorSet build_operator_set(const ReferenceElement& elem) {
  OperatorSet ops;
  ops.elem = elem;
  const int dim = elem.dim();
  const int nq = elem.num_volume_points();
  const int nf = elem.num_surface_points();

  ops.W = elem.volume.weights;
  ops.Wf = elem.face_weights;
  ops.WN.resize(nq + nf);
  ops.WN << ops.W, ops.Wf;

  ops.Vq = basis_eval(elem, elem.volume.points);
  ops.Vf = basis_eval(elem, elem.face_points);
  ops.VN.resize(nq + nf, elem.num_basis);
  ops.VN << ops.Vq, ops.Vf;

  ops.M = ops.Vq.transpose() * ops.W.asDiagonal() * ops.Vq;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ops.M);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxMassCondition)
    throw Error(ErrorKind::ill_conditioned_basis, "mass matrix condition number " + std::to_string(hi / lo));
  ops.Minv = ops.M.llt().solve(Eigen::MatrixXd::Identity(elem.num_basis, elem.num_basis));
  ops.Pq = ops.Minv * ops.Vq.transpose() * ops.W.asDiagonal();
  ops.Lq = ops.Minv * ops.Vf.transpose() * ops.Wf.asDiagonal();

  const auto grads = basis_grad_eval(elem, elem.volume.points);
  for (int d = 0; d < dim; ++d) {
    ops.D.push_back(ops.Pq * grads[d]);
    ops.Dq.push_back(ops.Vq * ops.D[d] * ops.Pq);
    const Eigen::VectorXd nhat = elem.face_normals.col(d);
    ops.DN.push_back(detail::decoupled_operator(ops.Dq[d], ops.Vq, ops.Vf, ops.Pq, ops.Lq, nhat));
    ops.QN.push_back(ops.WN.asDiagonal() * ops.DN[d]);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nq + nf, nq + nf);
    B.bottomRightCorner(nf, nf) = (ops.Wf.array() * nhat.array()).matrix().asDiagonal();
    ops.BN.push_back(std::move(B));
  }

  ops.VN_Pq = ops.VN * ops.Pq;
  ops.Minv_VNt = ops.Minv * ops.VN.transpose();

  const int nh = nq + nf;
  ops.QN_diag.resize(nh, dim);
  for (int a = 0; a < nh; ++a)
    for (int d = 0; d < dim; ++d) ops.QN_diag(a, d) = ops.QN[d](a, a);
  for (int a = 0; a < nh; ++a) {
    for (int b = a + 1; b < nh; ++b) {
      OperatorSet::Pair p{a, b, {}, {}};
      bool nonzero = false;
      for (int d = 0; d < dim; ++d) {
        p.qab[d] = ops.QN[d](a, b);
        p.qba[d] = ops.QN[d](b, a);
        nonzero = nonzero || p.qab[d] != 0.0 || p.qba[d] != 0.0;
      }
      if (nonzero) ops.pairs.push_back(p);
    }
  }
  return ops;
}

inline OperatorSet build_operator_set(ElementType type, int degree, QuadratureMode mode) {
  return build_operator_set(make_reference_element(type, degree, mode));
}

/// Max-abs residuals of the operator identities (max over directions).
struct SbpResidualReport {
  double lemma = 0;       // W Dq + (W Dq)^T - Pq^T Vf^T Wf diag(n̂) Vf Pq
  double sbp = 0;         // QN + QN^T - BN
  double nullspace = 0;   // QN 1
  double projection = 0;  // Pq Vq - I
  double recovery = 0;    // [Pq Lq] DN [Vq; Vf] - D
  double weighted = 0;    // matrix weighted derivative vs expanded projection/lift form

  double max_identity() const { return std::max({lemma, sbp, nullspace, projection, recovery}); }
};

/// Weighted derivative [Pq Lq] diag(w) DN u for data at hybrid points.
inline Eigen::VectorXd weighted_derivative(const OperatorSet& ops, int dir, const Eigen::VectorXd& w_hybrid,
                                           const Eigen::VectorXd& u_hybrid) {
  Eigen::MatrixXd PL(ops.num_basis(), ops.num_hybrid_points());
  PL << ops.Pq, ops.Lq;
  return PL * (w_hybrid.asDiagonal() * (ops.DN[dir] * u_hybrid));
}

/// Recomputes every derived matrix from the primitive data (W, Wf, Vq, Vf,
/// D, n̂) and checks the identities; a corrupted weight therefore shows up.
inline SbpResidualReport verify_sbp(const OperatorSet& ops) {
  SbpResidualReport rep;
  const int dim = ops.dim();
  const int np = ops.num_basis();
  const int nq = ops.num_volume_points();
  const int nf = ops.num_surface_points();
  const int nh = nq + nf;

  const Eigen::MatrixXd M = ops.Vq.transpose() * ops.W.asDiagonal() * ops.Vq;
  const Eigen::MatrixXd Minv = M.llt().solve(Eigen::MatrixXd::Identity(np, np));
  const Eigen::MatrixXd Pq = Minv * ops.Vq.transpose() * ops.W.asDiagonal();
  const Eigen::MatrixXd Lq = Minv * ops.Vf.transpose() * ops.Wf.asDiagonal();
  Eigen::VectorXd WN(nh);
  WN << ops.W, ops.Wf;
  Eigen::MatrixXd VN(nh, np);
  VN << ops.Vq, ops.Vf;
  Eigen::MatrixXd PL(np, nh);
  PL << Pq, Lq;

  rep.projection = detail::max_abs(Pq * ops.Vq - Eigen::MatrixXd::Identity(np, np));

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  // Smooth non-polynomial data at hybrid points.
  Eigen::MatrixXd xh(nh, ops.elem.dim());
  xh << ops.elem.volume.points, ops.elem.face_points;
  const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
  Eigen::VectorXd uh(nh), wh(nh);
  for (int i = 0; i < nh; ++i) {
    const double s = xh.row(i).sum();
    uh(i) = std::exp(c1 * s) + std::sin(2.0 + c2 * xh(i, 0));
    wh(i) = 1.5 + std::cos(c3 * s);
  }

  for (int d = 0; d < dim; ++d) {
    const Eigen::VectorXd nhat = ops.elem.face_normals.col(d);
    const Eigen::MatrixXd Dq = ops.Vq * ops.D[d] * Pq;
    const Eigen::MatrixXd WDq = ops.W.asDiagonal() * Dq;
    const Eigen::MatrixXd bnd =
        Pq.transpose() * ops.Vf.transpose() * (ops.Wf.array() * nhat.array()).matrix().asDiagonal() * ops.Vf * Pq;
    rep.lemma = std::max(rep.lemma, detail::max_abs(WDq + WDq.transpose() - bnd));

    const Eigen::MatrixXd DN = detail::decoupled_operator(Dq, ops.Vq, ops.Vf, Pq, Lq, nhat);
    const Eigen::MatrixXd QN = WN.asDiagonal() * DN;
    Eigen::MatrixXd BN = Eigen::MatrixXd::Zero(nh, nh);
    BN.bottomRightCorner(nf, nf) = (ops.Wf.array() * nhat.array()).matrix().asDiagonal();
    rep.sbp = std::max(rep.sbp, detail::max_abs(QN + QN.transpose() - BN));
    rep.nullspace = std::max(rep.nullspace, (QN * Eigen::VectorXd::Ones(nh)).cwiseAbs().maxCoeff());
    rep.recovery = std::max(rep.recovery, detail::max_abs(PL * DN * VN - ops.D[d]));

    // Projection/lift form of the weighted derivative:
    //   Pq diag(w_q) (Vq D Pq u_q + 1/2 Vq Lq diag(n̂)(u_f - Vf Pq u_q))
    //     + 1/2 Lq diag(w_f n̂)(u_f - Vf Pq u_q)
    const Eigen::VectorXd uq = uh.head(nq), uf = uh.tail(nf);
    const Eigen::VectorXd wq = wh.head(nq), wf = wh.tail(nf);
    const Eigen::VectorXd jump = uf - ops.Vf * (Pq * uq);
    const Eigen::VectorXd inner = ops.Vq * (ops.D[d] * (Pq * uq)) + 0.5 * ops.Vq * (Lq * nhat.cwiseProduct(jump));
    const Eigen::VectorXd expanded =
        Pq * wq.cwiseProduct(inner) + 0.5 * Lq * (wf.cwiseProduct(nhat).cwiseProduct(jump));
    const Eigen::VectorXd matrix_form = PL * (wh.asDiagonal() * (DN * uh));
    rep.weighted = std::max(rep.weighted, (matrix_form - expanded).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace esdg
