#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "esdg/error.hpp"
#include "esdg/reference_element.hpp"

namespace esdg {

/// Affine geometry of one element. Face quantities are constant per face,
/// since faces are planar and the map is affine.
struct ElementGeometry {
  Eigen::MatrixXd A;   // dx/dr̂, columns are the reference directions
  Eigen::MatrixXd G;   // G(i,j) = ∂r̂_j/∂x_i
  Eigen::MatrixXd JG;  // J * G, the factor folded into the physical Q operators
  double J = 0.0;
  Eigen::VectorXd face_scale;      // |J G n̂| per face, so J_f = face_scale * Ĵ_f
  Eigen::VectorXd face_jacobian;   // physical J_f per face
  Eigen::MatrixXd face_normals;    // unit outward normal per face (row = face)
};

/// Geometric factors of the affine map x = v0 + (r̂+1)/2 (v1-v0) [+ (ŝ+1)/2 (v2-v0)].
/// `vertices` holds one vertex per row. Reference normals and face Jacobians
/// come from `ref_normals` / `ref_face_jacobian` (one row/entry per face).
inline ElementGeometry geometric_factors(const Eigen::MatrixXd& vertices, const Eigen::MatrixXd& ref_normals,
                                         const Eigen::VectorXd& ref_face_jacobian) {
  const Eigen::Index d = vertices.cols();
  if (vertices.rows() != d + 1) throw Error(ErrorKind::invalid_mesh, "simplex needs dim+1 vertices");
  ElementGeometry g;
  g.A.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) g.A.col(j) = 0.5 * (vertices.row(j + 1) - vertices.row(0)).transpose();
  g.J = g.A.determinant();
  if (!(g.J > 0.0) || !std::isfinite(g.J)) throw Error(ErrorKind::invalid_mesh, "inverted or degenerate element");
  g.G = g.A.inverse().transpose();
  g.JG = g.J * g.G;
  const Eigen::Index nfaces = ref_normals.rows();
  g.face_scale.resize(nfaces);
  g.face_jacobian.resize(nfaces);
  g.face_normals.resize(nfaces, d);
  for (Eigen::Index f = 0; f < nfaces; ++f) {
    const Eigen::VectorXd m = g.JG * ref_normals.row(f).transpose();
    const double s = m.norm();
    g.face_scale(f) = s;
    g.face_jacobian(f) = s * ref_face_jacobian(f);
    g.face_normals.row(f) = (m / s).transpose();
  }
  return g;
}

inline Eigen::MatrixXd reference_face_normals(ElementType type) {
  Eigen::MatrixXd n;
  if (type == ElementType::interval) {
    n.resize(2, 1);
    n << -1.0, 1.0;
  } else {
    const double r = 1.0 / std::sqrt(2.0);
    n.resize(3, 2);
    n << 0.0, -1.0, r, r, -1.0, 0.0;
  }
  return n;
}

inline Eigen::VectorXd reference_face_jacobians(ElementType type) {
  if (type == ElementType::interval) return Eigen::VectorXd::Ones(2);
  Eigen::VectorXd j(3);
  j << 1.0, std::sqrt(2.0), 1.0;
  return j;
}

struct Mesh {
  ElementType type = ElementType::interval;
  int dim = 1;
  std::vector<Eigen::MatrixXd> vertices;  // per element, one vertex per row
  std::vector<ElementGeometry> geometry;
  Eigen::VectorXd lo, hi;
  std::vector<bool> periodic;
  double h = 0.0;  // CFL length scale: min over elements of 2J / max J_f

  int num_elements() const { return static_cast<int>(vertices.size()); }

  /// Physical coordinates of reference points (one per row) on element k.
  Eigen::MatrixXd map_points(int k, const Eigen::MatrixXd& ref) const {
    const auto& v = vertices[static_cast<std::size_t>(k)];
    const auto& A = geometry[static_cast<std::size_t>(k)].A;
    Eigen::MatrixXd x(ref.rows(), dim);
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
      const Eigen::VectorXd shifted = (ref.row(i).array() + 1.0).matrix().transpose();
      x.row(i) = v.row(0) + (A * shifted).transpose();
    }
    return x;
  }

  double total_measure() const {
    double s = 0.0;
    for (const auto& g : geometry) s += g.J * kReferenceMeasure;
    return s;
  }
};

namespace detail {

inline void finish_mesh(Mesh& m) {
  const Eigen::MatrixXd nref = reference_face_normals(m.type);
  const Eigen::VectorXd jref = reference_face_jacobians(m.type);
  m.geometry.clear();
  m.h = std::numeric_limits<double>::infinity();
  for (const auto& v : m.vertices) {
    m.geometry.push_back(geometric_factors(v, nref, jref));
    const auto& g = m.geometry.back();
    m.h = std::min(m.h, 2.0 * g.J / g.face_jacobian.maxCoeff());
  }
}

}  // namespace detail

/// Uniform 1D mesh of K intervals on [a,b].
inline Mesh build_mesh_1d(int K, double a, double b, bool periodic) {
  if (K < 1) throw Error(ErrorKind::invalid_argument, "element count must be >= 1");
  if (!(a < b)) throw Error(ErrorKind::invalid_argument, "interval must satisfy a < b");
  Mesh m;
  m.type = ElementType::interval;
  m.dim = 1;
  m.lo = Eigen::VectorXd::Constant(1, a);
  m.hi = Eigen::VectorXd::Constant(1, b);
  m.periodic = {periodic};
  const double dx = (b - a) / K;
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXd v(2, 1);
    v << a + k * dx, (k + 1 == K) ? b : a + (k + 1) * dx;
    m.vertices.push_back(v);
  }
  detail::finish_mesh(m);
  return m;
}

/// Kx x Ky uniform quadrilaterals on [x0,x1] x [y0,y1], each split into a
/// lower-left and an upper-right right triangle.
inline Mesh build_tri_mesh(int Kx, int Ky, double x0, double x1, double y0, double y1, bool periodic_x,
                           bool periodic_y) {
  if (Kx < 1 || Ky < 1) throw Error(ErrorKind::invalid_argument, "quad counts must be >= 1");
  if (!(x0 < x1) || !(y0 < y1)) throw Error(ErrorKind::invalid_argument, "degenerate box");
  Mesh m;
  m.type = ElementType::triangle;
  m.dim = 2;
  m.lo = Eigen::Vector2d(x0, y0);
  m.hi = Eigen::Vector2d(x1, y1);
  m.periodic = {periodic_x, periodic_y};
  const double hx = (x1 - x0) / Kx, hy = (y1 - y0) / Ky;
  for (int iy = 0; iy < Ky; ++iy) {
    const double ya = y0 + iy * hy, yb = (iy + 1 == Ky) ? y1 : y0 + (iy + 1) * hy;
    for (int ix = 0; ix < Kx; ++ix) {
      const double xa = x0 + ix * hx, xb = (ix + 1 == Kx) ? x1 : x0 + (ix + 1) * hx;
      Eigen::MatrixXd lower(3, 2), upper(3, 2);
      lower << xa, ya, xb, ya, xa, yb;
      upper << xb, yb, xa, yb, xb, ya;
      m.vertices.push_back(lower);
      m.vertices.push_back(upper);
    }
  }
  detail::finish_mesh(m);
  return m;
}

/// Face-point matching. Surface points are indexed globally as k*Nf + i.
struct Connectivity {
  int points_per_element = 0;
  std::vector<int> exterior;  // matching global index; the point itself on a boundary
  std::vector<char> boundary;
  Eigen::MatrixXd coords;     // physical coordinates of every surface point

  int num_boundary() const { return static_cast<int>(std::count(boundary.begin(), boundary.end(), 1)); }
};

inline Connectivity connect_faces(const Mesh& mesh, const ReferenceElement& elem) {
  if (elem.type != mesh.type) throw Error(ErrorKind::invalid_argument, "element type does not match mesh");
  const int K = mesh.num_elements();
  const int nf = elem.num_surface_points();
  const int d = mesh.dim;
  const int total = K * nf;
  Connectivity c;
  c.points_per_element = nf;
  c.exterior.assign(static_cast<std::size_t>(total), -1);
  c.boundary.assign(static_cast<std::size_t>(total), 0);
  c.coords.resize(total, d);
  for (int k = 0; k < K; ++k) c.coords.middleRows(k * nf, nf) = mesh.map_points(k, elem.face_points);

  const double tol = 1e-10 * mesh.h;
  const Eigen::VectorXd period = mesh.hi - mesh.lo;
  Eigen::MatrixXd canon = c.coords;
  for (int p = 0; p < total; ++p)
    for (int j = 0; j < d; ++j)
      if (mesh.periodic[static_cast<std::size_t>(j)] && canon(p, j) > mesh.hi(j) - tol) canon(p, j) -= period(j);

  // Hash cells much larger than the tolerance; neighbours are probed so that
  // points straddling a cell boundary are still found.
  const double cell = 1e-6 * mesh.h;
  auto key_of = [&](const std::array<std::int64_t, 2>& q) {
    return static_cast<std::uint64_t>(q[0]) * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(q[1]);
  };
  auto quantize = [&](int p) {
    std::array<std::int64_t, 2> q{0, 0};
    for (int j = 0; j < d; ++j) q[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::floor(canon(p, j) / cell));
    return q;
  };
  std::unordered_multimap<std::uint64_t, int> table;
  table.reserve(static_cast<std::size_t>(total));
  for (int p = 0; p < total; ++p) table.emplace(key_of(quantize(p)), p);

  auto normal_of = [&](int p) -> Eigen::VectorXd {
    const int k = p / nf, i = p % nf;
    const int face = elem.face_of_point[static_cast<std::size_t>(i)];
    return mesh.geometry[static_cast<std::size_t>(k)].face_normals.row(face).transpose();
  };

  for (int p = 0; p < total; ++p) {
    if (c.exterior[static_cast<std::size_t>(p)] >= 0) continue;
    const auto q = quantize(p);
    const Eigen::VectorXd np = normal_of(p);
    int found = -1;
    for (int dx = -1; dx <= 1 && found < 0; ++dx) {
      for (int dy = (d > 1 ? -1 : 0); dy <= (d > 1 ? 1 : 0) && found < 0; ++dy) {
        const std::array<std::int64_t, 2> qq{q[0] + dx, q[1] + dy};
        auto range = table.equal_range(key_of(qq));
        for (auto it = range.first; it != range.second; ++it) {
          const int r = it->second;
          if (r == p) continue;
          if ((canon.row(r) - canon.row(p)).cwiseAbs().maxCoeff() > tol) continue;
          if (np.dot(normal_of(r)) > -1.0 + 1e-12) continue;
          found = r;
          break;
        }
      }
    }
    if (found >= 0) {
      c.exterior[static_cast<std::size_t>(p)] = found;
      c.exterior[static_cast<std::size_t>(found)] = p;
      continue;
    }
    bool on_boundary = false;
    for (int j = 0; j < d; ++j) {
      if (mesh.periodic[static_cast<std::size_t>(j)]) continue;
      if (std::abs(c.coords(p, j) - mesh.lo(j)) <= tol || std::abs(c.coords(p, j) - mesh.hi(j)) <= tol)
        on_boundary = true;
    }
    if (!on_boundary) {
      std::ostringstream os;
      os << "unmatched surface point " << p << " at (" << c.coords.row(p) << ")";
      throw Error(ErrorKind::nonconforming_mesh, os.str());
    }
    c.exterior[static_cast<std::size_t>(p)] = p;
    c.boundary[static_cast<std::size_t>(p)] = 1;
  }
  return c;
}

inline std::string mesh_summary(const Mesh& m) {
  double jmin = std::numeric_limits<double>::infinity(), jmax = 0.0;
  for (const auto& g : m.geometry) {
    jmin = std::min(jmin, g.J);
    jmax = std::max(jmax, g.J);
  }
  std::ostringstream os;
  os << "elements " << m.num_elements() << "\n"
     << "type " << (m.type == ElementType::interval ? "interval" : "triangle") << "\n"
     << "h " << m.h << "\n"
     << "J_min " << jmin << "\n"
     << "J_max " << jmax << "\n"
     << "measure " << m.total_measure() << "\n";
  return os.str();
}

}  // namespace esdg
