#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "esdg/basis.hpp"
#include "esdg/error.hpp"
#include "esdg/quadrature.hpp"

namespace esdg {

/// Volume/surface quadrature pairings supported by the solver.
///   gll    : (N+1)-point Gauss-Lobatto on the interval
///   gauss1 : (N+1)-point Gauss on the interval
///   gauss2 : (N+2)-point Gauss on the interval
///   tri2n  : degree-2N triangle rule, (N+1)-point Gauss on each edge
enum class QuadratureMode { gll, gauss1, gauss2, tri2n };

inline const char* to_string(QuadratureMode mode) {
  switch (mode) {
    case QuadratureMode::gll: return "gll";
    case QuadratureMode::gauss1: return "gauss1";
    case QuadratureMode::gauss2: return "gauss2";
    case QuadratureMode::tri2n: return "tri2n";
  }
  return "?";
}

inline QuadratureMode quadrature_mode_from_string(const std::string& s) {
  if (s == "gll") return QuadratureMode::gll;
  if (s == "gauss1") return QuadratureMode::gauss1;
  if (s == "gauss2") return QuadratureMode::gauss2;
  if (s == "tri2n") return QuadratureMode::tri2n;
  throw Error(ErrorKind::invalid_argument, "unknown quadrature mode '" + s + "'");
}

struct ReferenceElement {
  ElementType type = ElementType::interval;
  int degree = 0;
  int num_basis = 0;

  QuadratureRule volume;

  // Surface quadrature, grouped face by face. Weights already include the
  // reference face Jacobian; normals are the constant per-face n̂.
  Eigen::MatrixXd face_points;
  Eigen::VectorXd face_weights;
  Eigen::MatrixXd face_normals;
  Eigen::VectorXd face_jacobian;
  std::vector<int> face_of_point;
  int num_faces = 0;
  int points_per_face = 0;
  int surface_exactness = 0;

  int dim() const { return reference_dim(type); }
  int num_volume_points() const { return volume.size(); }
  int num_surface_points() const { return static_cast<int>(face_weights.size()); }
};

/// Interval element with an explicit volume rule. The surface rule is the two
/// endpoints with unit weights.
inline ReferenceElement make_interval_element(int degree, QuadratureRule volume) {
  if (degree < 1) throw Error(ErrorKind::invalid_argument, "polynomial degree must be >= 1");
  if (volume.exactness_degree < 2 * degree - 1)
    throw Error(ErrorKind::invalid_argument, "volume rule too weak for degree " + std::to_string(degree));
  ReferenceElement e;
  e.type = ElementType::interval;
  e.degree = degree;
  e.num_basis = degree + 1;
  e.volume = std::move(volume);
  e.num_faces = 2;
  e.points_per_face = 1;
  e.face_points.resize(2, 1);
  e.face_points << -1.0, 1.0;
  e.face_weights = Eigen::VectorXd::Ones(2);
  e.face_normals.resize(2, 1);
  e.face_normals << -1.0, 1.0;
  e.face_jacobian = Eigen::VectorXd::Ones(2);
  e.face_of_point = {0, 1};
  e.surface_exactness = 1 << 20;  // point evaluation is exact
  return e;
}

/// Triangle element on (-1,-1), (1,-1), (-1,1) with an explicit volume rule
/// and a 1D rule mapped to each edge.
inline ReferenceElement make_triangle_element(int degree, QuadratureRule volume, const QuadratureRule& edge) {
  if (degree < 1) throw Error(ErrorKind::invalid_argument, "polynomial degree must be >= 1");
  if (volume.exactness_degree < 2 * degree - 1)
    throw Error(ErrorKind::invalid_argument, "volume rule too weak for degree " + std::to_string(degree));
  if (edge.exactness_degree < 2 * degree)
    throw Error(ErrorKind::invalid_argument, "edge rule too weak for degree " + std::to_string(degree));
  ReferenceElement e;
  e.type = ElementType::triangle;
  e.degree = degree;
  e.num_basis = basis_size(ElementType::triangle, degree);
  e.volume = std::move(volume);
  e.num_faces = 3;
  e.points_per_face = edge.size();
  e.surface_exactness = edge.exactness_degree;

  const int nfp = edge.size();
  const int nf = 3 * nfp;
  e.face_points.resize(nf, 2);
  e.face_weights.resize(nf);
  e.face_normals.resize(nf, 2);
  e.face_jacobian.resize(nf);
  e.face_of_point.resize(nf);
  const double rt2 = std::sqrt(2.0);
  for (int f = 0; f < 3; ++f) {
    for (int k = 0; k < nfp; ++k) {
      const int i = f * nfp + k;
      const double t = edge.points(k, 0);
      double jf = 1.0;
      switch (f) {
        case 0:  // s = -1, outward (0,-1)
          e.face_points.row(i) << t, -1.0;
          e.face_normals.row(i) << 0.0, -1.0;
          break;
        case 1:  // r + s = 0, outward (1,1)/sqrt(2)
          e.face_points.row(i) << -t, t;
          e.face_normals.row(i) << 1.0 / rt2, 1.0 / rt2;
          jf = rt2;
          break;
        default:  // r = -1, outward (-1,0)
          e.face_points.row(i) << -1.0, -t;
          e.face_normals.row(i) << -1.0, 0.0;
          break;
      }
      e.face_jacobian(i) = jf;
      e.face_weights(i) = edge.weights(k) * jf;
      e.face_of_point[i] = f;
    }
  }
  return e;
}

inline ReferenceElement make_reference_element(ElementType type, int degree, QuadratureMode mode) {
  if (degree < 1) throw Error(ErrorKind::invalid_argument, "polynomial degree must be >= 1");
  if (type == ElementType::interval) {
    switch (mode) {
      case QuadratureMode::gll: return make_interval_element(degree, gauss_lobatto(degree + 1));
      case QuadratureMode::gauss1: return make_interval_element(degree, gauss_legendre(degree + 1));
      case QuadratureMode::gauss2: return make_interval_element(degree, gauss_legendre(degree + 2));
      case QuadratureMode::tri2n: break;
    }
    throw Error(ErrorKind::invalid_argument, "tri2n quadrature requires a triangle element");
  }
  if (mode != QuadratureMode::tri2n)
    throw Error(ErrorKind::invalid_argument, "triangle elements use the tri2n quadrature mode");
  return make_triangle_element(degree, triangle_quadrature(2 * degree), gauss_legendre(degree + 1));
}

inline Eigen::MatrixXd basis_eval(const ReferenceElement& elem, const Eigen::MatrixXd& points) {
  return basis_eval(elem.type, elem.degree, points);
}

inline std::vector<Eigen::MatrixXd> basis_grad_eval(const ReferenceElement& elem, const Eigen::MatrixXd& points) {
  return basis_grad_eval(elem.type, elem.degree, points);
}

}  // namespace esdg
