#pragma once

#include <Eigen/Dense>

#include "esdg/mesh.hpp"
#include "esdg/operators.hpp"
#include "esdg/solver.hpp"

namespace esdg::harness {

/// 1D Burgers in split form on a periodic mesh, written with plain matrix
/// products (no two-point fluxes):
///   du/dt = -(1/J) [ (D P_q u_q^2 + P_q diag(u_q) D_q u_q)/3
///                  + L_q diag(n̂) ((u_f^+ u_f + (u_f^+)^2)/6 - V_f P_q u_q^2 / 3) ].
inline Field split_form_burgers_rhs(const OperatorSet& ops, const Mesh& mesh, const Connectivity& conn,
                                    const Field& u) {
  if (mesh.type != ElementType::interval) throw Error(ErrorKind::invalid_argument, "split form oracle is 1D only");
  if (conn.num_boundary() > 0) throw Error(ErrorKind::invalid_argument, "split form oracle needs a periodic mesh");
  const int K = mesh.num_elements(), nf = ops.num_surface_points();
  const Eigen::VectorXd nhat = ops.elem.face_normals.col(0);
  Eigen::MatrixXd uf_all(nf, K);
  for (int k = 0; k < K; ++k) uf_all.col(k) = ops.Vf * u[static_cast<std::size_t>(k)].col(0);
  Field du(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd uk = u[static_cast<std::size_t>(k)].col(0);
    const Eigen::VectorXd uq = ops.Vq * uk;
    const Eigen::VectorXd uq2 = uq.cwiseAbs2();
    const Eigen::VectorXd uf = uf_all.col(k);
    Eigen::VectorXd up(nf);
    for (int f = 0; f < nf; ++f) {
      const int g = conn.exterior[static_cast<std::size_t>(k * nf + f)];
      up(f) = uf_all(g % nf, g / nf);
    }
    const Eigen::VectorXd vol = (ops.D[0] * (ops.Pq * uq2) + ops.Pq * uq.cwiseProduct(ops.Dq[0] * uq)) / 3.0;
    const Eigen::VectorXd surf =
        (up.cwiseProduct(uf) + up.cwiseAbs2()) / 6.0 - (ops.Vf * (ops.Pq * uq2)) / 3.0;
    const double J = mesh.geometry[static_cast<std::size_t>(k)].J;
    du[static_cast<std::size_t>(k)] = -(vol + ops.Lq * nhat.cwiseProduct(surf)) / J;
  }
  return du;
}

}  // namespace esdg::harness
