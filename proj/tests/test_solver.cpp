#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "esdg/burgers.hpp"
#include "esdg/diagnostics.hpp"
#include "esdg/euler.hpp"
#include "esdg/harness/burgers_split.hpp"
#include "esdg/harness/problems.hpp"
#include "esdg/solver.hpp"
#include "esdg/time_integration.hpp"

using namespace esdg;

namespace {

DGSolver<BurgersModel<1>> burgers_solver(int N, QuadratureMode q, int K, FluxMode flux = FluxMode::ec, int threads = 1) {
  return DGSolver<BurgersModel<1>>(BurgersModel<1>{}, build_operator_set(ElementType::interval, N, q),
                                   build_mesh_1d(K, -1.0, 1.0, true), SolverOptions{flux, true, threads});
}

Field random_field(const DGSolver<BurgersModel<1>>& s, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  Field u = s.zeros();
  for (auto& uk : u)
    for (Eigen::Index i = 0; i < uk.rows(); ++i) uk(i, 0) = c(rng);
  return u;
}

// Burgers with a volume flux that is consistent but not symmetric.
struct SkewedBurgers : BurgersModel<1> {
  std::array<State, 1> ec_flux(const Aux& a, const Aux& b) const {
    return {State(BurgersModel<1>::split_flux(a, b) + 0.05 * (a - b))};
  }
  std::array<State, 1> ec_flux(const State& a, const State& b) const { return ec_flux(a(0), b(0)); }
};

}  // namespace

TEST(TimeIntegration, FourthOrderOnLinearDecay) {
  // u' = -u, u(0) = 1, integrated to t = 1
  auto solve = [](int steps) {
    Eigen::VectorXd u = Eigen::VectorXd::Ones(1), res, k;
    const double dt = 1.0 / steps;
    for (int n = 0; n < steps; ++n)
      lsrk45_step(u, res, k, n * dt, dt, [](const Eigen::VectorXd& x, double, Eigen::VectorXd& out, int) { out = -x; });
    return std::abs(u(0) - std::exp(-1.0));
  };
  const double e1 = solve(10), e2 = solve(20), e3 = solve(40);
  EXPECT_GE(std::log2(e1 / e2), 3.9);
  EXPECT_GE(std::log2(e2 / e3), 3.9);
}

TEST(TimeIntegration, StageTimesAreIncreasingAndInsideStep) {
  for (std::size_t s = 1; s < 5; ++s) EXPECT_GT(LSRK45::c[s], LSRK45::c[s - 1]);
  EXPECT_LT(LSRK45::c[4], 1.0);
  // sum of b weighted by the 2N-storage recurrence reproduces order-1 condition
  Eigen::VectorXd u = Eigen::VectorXd::Zero(1), res, k;
  lsrk45_step(u, res, k, 0.0, 0.5, [](const Eigen::VectorXd&, double, Eigen::VectorXd& out, int) { out = Eigen::VectorXd::Ones(1); });
  EXPECT_NEAR(u(0), 0.5, 1e-15);
  EXPECT_THROW(lsrk45_step(u, res, k, 0.0, 0.0, [](const Eigen::VectorXd& x, double, Eigen::VectorXd& out, int) { out = x; }),
               Error);
}

TEST(Solver, BurgersMatchesSplitForm) {
  for (auto q : {QuadratureMode::gll, QuadratureMode::gauss1})
    for (int N = 1; N <= 5; ++N) {
      auto s = burgers_solver(N, q, 8);
      for (unsigned seed = 1; seed <= 5; ++seed) {
        const Field u = random_field(s, seed);
        Field du;
        s.rhs(u, 0.0, du);
        const Field ref = harness::split_form_burgers_rhs(s.ops(), s.mesh(), s.connectivity(), u);
        for (std::size_t k = 0; k < u.size(); ++k)
          EXPECT_LT((du[k] - ref[k]).cwiseAbs().maxCoeff(), 1e-12) << to_string(q) << " N=" << N;
      }
    }
}

TEST(Solver, ConstantStateIsSteady) {
  harness::Discretization d;
  d.N = 3;
  auto s = harness::euler_2d(d, 3, 3, -1.0, 1.0, -1.0, 1.0, true);
  const auto c = s.model().from_primitive(1.2, EulerModel<2>::Vec(0.3, -0.2), 0.9);
  Field du;
  s.rhs(s.project([&](const Eigen::VectorXd&) { return c; }), 0.0, du);
  for (const auto& d : du) EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Solver, EntropyConservativeResidualVanishes) {
  harness::Discretization d;
  d.N = 4;
  d.flux = FluxMode::ec;
  auto s = harness::euler_1d(d, 8, -1.0, 1.0, true);
  const auto& m = s.model();
  Field du;
  s.rhs(s.project([&](const Eigen::VectorXd& x) { return harness::pulse<1>(m, x); }), 0.0, du);
  EXPECT_LT(s.entropy_residual(du), 1e-12);
  EXPECT_LT(s.local_conservation_residuals(du).maxCoeff(), 1e-12);

  // with interface dissipation the entropy rate is negative
  d.flux = FluxMode::eclf;
  auto lf = harness::euler_1d(d, 8, -1.0, 1.0, true);
  const Field u = lf.project([&](const Eigen::VectorXd& x) { return harness::pulse<1>(m, x); });
  lf.rhs(u, 0.0, du);
  double rate = 0.0;
  const auto& ops = lf.ops();
  for (int k = 0; k < lf.num_elements(); ++k) {
    const Eigen::MatrixXd uq = ops.Vq * u[static_cast<std::size_t>(k)];
    Eigen::MatrixXd vq(uq.rows(), uq.cols());
    for (Eigen::Index a = 0; a < uq.rows(); ++a) vq.row(a) = m.entropy_vars(uq.row(a).transpose()).transpose();
    const Eigen::MatrixXd vh = ops.Pq * vq;
    rate += lf.mesh().geometry[static_cast<std::size_t>(k)].J * (vh.transpose() * ops.M * du[static_cast<std::size_t>(k)]).trace();
  }
  EXPECT_LT(rate, -1e-6);
}

TEST(Solver, TwoDimensionalEntropyConservation) {
  harness::Discretization d;
  d.N = 3;
  d.flux = FluxMode::ec;
  auto s = harness::euler_2d(d, 4, 4, -1.0, 1.0, -1.0, 1.0, true);
  const auto& m = s.model();
  Field du;
  s.rhs(s.project([&](const Eigen::VectorXd& x) { return harness::pulse<2>(m, x); }), 0.0, du);
  EXPECT_LT(s.entropy_residual(du), 1e-12);
  EXPECT_LT(s.local_conservation_residuals(du).maxCoeff(), 1e-12);
}

TEST(Solver, ConservationChecksHaveTeeth) {
  auto global = [](const auto& s, const Field& du) {
    double sum = 0.0;
    for (int k = 0; k < s.num_elements(); ++k)
      sum += s.mesh().geometry[static_cast<std::size_t>(k)].J * (s.ops().W.transpose() * (s.ops().Vq * du[static_cast<std::size_t>(k)]))(0);
    return std::abs(sum);
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  auto ops = build_operator_set(ElementType::interval, 3, QuadratureMode::gauss2);
  DGSolver<BurgersModel<1>> good(BurgersModel<1>{}, ops, build_mesh_1d(6, -1.0, 1.0, true), SolverOptions{FluxMode::ec, true, 1});
  DGSolver<SkewedBurgers> skew(SkewedBurgers{}, ops, build_mesh_1d(6, -1.0, 1.0, true), SolverOptions{FluxMode::ec, true, 1});
  Field u = good.zeros();
  for (auto& uk : u)
    for (Eigen::Index i = 0; i < uk.rows(); ++i) uk(i, 0) = c(rng);
  Field du;
  good.rhs(u, 0.0, du);
  EXPECT_LT(global(good, du), 1e-13);
  EXPECT_LT(good.local_conservation_residuals(du).maxCoeff(), 1e-13);
  // the element residual sees a perturbed update
  du[2](0, 0) += 1e-3;
  EXPECT_GT(good.local_conservation_residuals(du)(2), 1e-6);
  // a non-symmetric two-point flux disagrees across interfaces, so the
  // periodic total is no longer conserved
  skew.rhs(u, 0.0, du);
  EXPECT_GT(global(skew, du), 1e-6);
}

TEST(Solver, TotalEntropyOfConstantBurgers) {
  // U = u^2/2 over [-1,1] gives c^2
  auto s = burgers_solver(3, QuadratureMode::gauss2, 5);
  const double c = 1.7;
  const Field u = s.project([&](const Eigen::VectorXd&) { return BurgersModel<1>::State(c); });
  EXPECT_NEAR(s.total_entropy(u), c * c, 1e-13);
  EXPECT_NEAR(s.conserved_totals(u)(0), 2.0 * c, 1e-13);
}

TEST(Solver, ThreadedRhsIsBitIdentical) {
  harness::Discretization d;
  d.N = 3;
  auto serial = harness::euler_2d(d, 4, 4, -1.0, 1.0, -1.0, 1.0, true);
  d.threads = 3;
  auto threaded = harness::euler_2d(d, 4, 4, -1.0, 1.0, -1.0, 1.0, true);
  const auto& m = serial.model();
  const Field u = serial.project([&](const Eigen::VectorXd& x) { return exact_vortex(m, 5 * x(0) + 5, 5 * x(1), 0.0); });
  Field a, b;
  serial.rhs(u, 0.0, a);
  threaded.rhs(u, 0.0, b);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ((a[k] - b[k]).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Solver, MissingExteriorStateIsAnError) {
  harness::Discretization d;
  auto s = harness::euler_1d(d, 4, 0.0, 1.0, false);
  Field du;
  const auto& m = s.model();
  EXPECT_THROW(s.rhs(s.project([&](const Eigen::VectorXd&) { return m.from_primitive(1.0, EulerModel<1>::Vec(0.0), 1.0); }),
                     0.0, du),
               Error);
}

TEST(Solver, BlowUpReportsTimeAndElement) {
  harness::Discretization d;
  d.N = 2;
  auto s = harness::euler_1d(d, 4, -1.0, 1.0, true);
  Field u = s.project([&](const Eigen::VectorXd&) { return s.model().from_primitive(1.0, EulerModel<1>::Vec(0.0), 1.0); });
  u[2](0, 2) = -5.0;  // negative density inside element 2
  Field du;
  try {
    s.rhs(u, 0.25, du);
    FAIL() << "expected a blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.element(), 2);
    EXPECT_DOUBLE_EQ(e.time(), 0.25);
  }
}

TEST(Run, PeriodicRunConservesTotals) {
  harness::Discretization d;
  d.N = 3;
  auto s = harness::euler_1d(d, 8, -1.0, 1.0, true);
  const auto& m = s.model();
  RunOptions o;
  o.final_time = 0.2;
  o.cfl = 0.25;
  const RunResult r = run(s, s.project([&](const Eigen::VectorXd& x) { return exact_entropy_wave(m, x(0), 0.0); }), o);
  ASSERT_FALSE(r.blew_up);
  EXPECT_DOUBLE_EQ(r.t, 0.2);
  EXPECT_NEAR(r.dt, 0.25 * 0.25 / 8.0, 1e-15);  // CFL h / ((N+1)^2/2)
  EXPECT_LT((r.final_totals - r.initial_totals).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(r.max_conservation_residual, 1e-12);
}
