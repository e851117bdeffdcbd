#include <gtest/gtest.h>

#include <cmath>

#include "esdg/mesh.hpp"
#include "esdg/reference_element.hpp"

using namespace esdg;

TEST(Mesh, IntervalGeometry) {
  const Mesh m = build_mesh_1d(8, -1.0, 1.0, true);
  ASSERT_EQ(m.num_elements(), 8);
  for (const auto& g : m.geometry) {
    EXPECT_NEAR(g.J, 0.125, 1e-15);      // half the element length
    EXPECT_NEAR(g.G(0, 0), 8.0, 1e-12);  // dr/dx
  }
  EXPECT_NEAR(m.total_measure(), 2.0, 1e-14);
  EXPECT_NEAR(m.h, 0.25, 1e-14);
}

TEST(Mesh, TriangleGeometry) {
  const Mesh m = build_tri_mesh(4, 2, 0.0, 2.0, 0.0, 1.0, false, false);
  ASSERT_EQ(m.num_elements(), 16);
  EXPECT_NEAR(m.total_measure(), 2.0, 1e-13);
  for (const auto& g : m.geometry) {
    // each triangle has area 0.125 and the reference area is 2
    EXPECT_NEAR(std::abs(g.J), 0.0625, 1e-14);
    EXPECT_GT(g.J, 0.0) << "elements must be positively oriented";
    EXPECT_LT((g.A * g.G.transpose() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-13);
    for (int f = 0; f < 3; ++f) EXPECT_NEAR(g.face_normals.row(f).norm(), 1.0, 1e-14);
  }
  // legs 0.5; hypotenuse sqrt(0.5^2+0.5^2); h = min 2J / max J_f
  EXPECT_NEAR(m.h, 2.0 * 0.0625 / (0.5 * std::sqrt(0.5)), 1e-13);
}

TEST(Mesh, RejectsBadInput) {
  EXPECT_THROW(build_mesh_1d(0, 0.0, 1.0, false), Error);
  EXPECT_THROW(build_mesh_1d(4, 1.0, 0.0, false), Error);
  EXPECT_THROW(build_tri_mesh(2, 0, 0.0, 1.0, 0.0, 1.0, true, true), Error);
}

namespace {

void check_connectivity(const Mesh& m, const ReferenceElement& e, int expected_boundary) {
  const Connectivity c = connect_faces(m, e);
  const int total = m.num_elements() * e.num_surface_points();
  ASSERT_EQ(static_cast<int>(c.exterior.size()), total);
  EXPECT_EQ(c.num_boundary(), expected_boundary);
  for (int p = 0; p < total; ++p) {
    const int q = c.exterior[static_cast<std::size_t>(p)];
    if (c.boundary[static_cast<std::size_t>(p)]) {
      EXPECT_EQ(q, p);
      continue;
    }
    EXPECT_EQ(c.exterior[static_cast<std::size_t>(q)], p) << "matching must be an involution";
    EXPECT_NE(q / e.num_surface_points(), p / e.num_surface_points());
    const int kp = p / e.num_surface_points(), kq = q / e.num_surface_points();
    const int fp = e.face_of_point[static_cast<std::size_t>(p % e.num_surface_points())];
    const int fq = e.face_of_point[static_cast<std::size_t>(q % e.num_surface_points())];
    const Eigen::VectorXd np = m.geometry[static_cast<std::size_t>(kp)].face_normals.row(fp);
    const Eigen::VectorXd nq = m.geometry[static_cast<std::size_t>(kq)].face_normals.row(fq);
    EXPECT_LT((np + nq).norm(), 1e-13) << "neighbour normals must be opposite";
  }
}

}  // namespace

TEST(Connectivity, PeriodicInterval) {
  check_connectivity(build_mesh_1d(6, -1.0, 1.0, true), make_reference_element(ElementType::interval, 2, QuadratureMode::gll), 0);
}

TEST(Connectivity, BoundedInterval) {
  check_connectivity(build_mesh_1d(6, -1.0, 1.0, false), make_reference_element(ElementType::interval, 2, QuadratureMode::gll), 2);
}

TEST(Connectivity, PeriodicAndBoundedTriangles) {
  const auto e = make_reference_element(ElementType::triangle, 3, QuadratureMode::tri2n);
  check_connectivity(build_tri_mesh(3, 4, -1.0, 1.0, -1.0, 1.0, true, true), e, 0);
  // boundary: perimeter edges (2*3 + 2*4) times points per edge
  check_connectivity(build_tri_mesh(3, 4, -1.0, 1.0, -1.0, 1.0, false, false), e, 14 * e.points_per_face);
  check_connectivity(build_tri_mesh(3, 4, -1.0, 1.0, -1.0, 1.0, true, false), e, 6 * e.points_per_face);
}

TEST(Connectivity, MatchedPointsCoincide) {
  const auto e = make_reference_element(ElementType::triangle, 2, QuadratureMode::tri2n);
  const Mesh m = build_tri_mesh(3, 3, 0.0, 1.0, 0.0, 1.0, false, false);
  const Connectivity c = connect_faces(m, e);
  for (std::size_t p = 0; p < c.exterior.size(); ++p)
    EXPECT_LT((c.coords.row(static_cast<Eigen::Index>(p)) - c.coords.row(c.exterior[p])).norm(), 1e-13);
}
