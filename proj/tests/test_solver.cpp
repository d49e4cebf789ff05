#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"

#include "conicopf/conic_program.hpp"
#include "conicopf/conic_solver.hpp"
#include "conicopf/solve.hpp"

using namespace conicopf;

namespace {

StandardProblem make_problem(int n_free, int n_nonneg,
                             std::vector<int> soc, std::vector<int> psd,
                             const std::vector<Eigen::Triplet<double>>& trip,
                             int m, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c) {
  StandardProblem p;
  p.cones.n_free = n_free;
  p.cones.n_nonneg = n_nonneg;
  p.cones.soc = std::move(soc);
  p.cones.psd = std::move(psd);
  p.A.resize(m, p.cones.total_dim());
  p.A.setFromTriplets(trip.begin(), trip.end());
  p.b = b;
  p.c = c;
  return p;
}

}  // namespace

TEST_CASE("svec round trip preserves inner products") {
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  for (int side : {1, 2, 3, 5}) {
    Eigen::MatrixXd A(side, side), B(side, side);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        A(i, j) = g(rng);
        B(i, j) = g(rng);
      }
    A = (A + A.transpose()).eval();
    B = (B + B.transpose()).eval();
    CHECK(svec_of_mat(A).dot(svec_of_mat(B)) ==
          doctest::Approx((A * B).trace()).epsilon(1e-12));
    CHECK((mat_of_svec(svec_of_mat(A), side) - A).norm() ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("trivial LP: min x subject to x >= 1") {
  // x = slack + 1, minimize x  ->  variables: x (free), s (nonneg)
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.0}, {0, 1, -1.0}};
  Eigen::VectorXd b(1), c(2);
  b << 1.0;
  c << 1.0, 0.0;
  auto p = make_problem(1, 1, {}, {}, trip, 1, b, c);
  IpmSettings st;
  st.verify_directions = true;
  auto res = solve_standard(p, st);
  CHECK(res.status == IpmStatus::Optimal);
  CHECK(res.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("infeasible box: x >= 2 and x <= 1") {
  // x - s1 = 2, x + s2 = 1, s1, s2 >= 0
  std::vector<Eigen::Triplet<double>> trip{
      {0, 0, 1.0}, {0, 1, -1.0}, {1, 0, 1.0}, {1, 2, 1.0}};
  Eigen::VectorXd b(2), c(3);
  b << 2.0, 1.0;
  c << 1.0, 0.0, 0.0;
  auto p = make_problem(1, 2, {}, {}, trip, 2, b, c);
  auto res = solve_standard(p, {});
  CHECK(res.status == IpmStatus::PrimalInfeasible);
}

TEST_CASE("unbounded LP is flagged dual-infeasible") {
  // min -x with x - s = 1, s >= 0: x can grow without bound.
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.0}, {0, 1, -1.0}};
  Eigen::VectorXd b(1), c(2);
  b << 1.0;
  c << -1.0, 0.0;
  auto p = make_problem(1, 1, {}, {}, trip, 1, b, c);
  auto res = solve_standard(p, {});
  CHECK(res.status == IpmStatus::DualInfeasible);
}

TEST_CASE("small second-order cone problem") {
  // min t s.t. (t, 3, 4) in SOC  ->  t = 5; fix x1 = 3, x2 = 4.
  std::vector<Eigen::Triplet<double>> trip{{0, 1, 1.0}, {1, 2, 1.0}};
  Eigen::VectorXd b(2), c(3);
  b << 3.0, 4.0;
  c << 1.0, 0.0, 0.0;
  auto p = make_problem(0, 0, {3}, {}, trip, 2, b, c);
  IpmSettings st;
  st.verify_directions = true;
  auto res = solve_standard(p, st);
  CHECK(res.status == IpmStatus::Optimal);
  CHECK(res.primal_objective == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("small SDP with fixed entries") {
  // min tr(X) s.t. X11 = 1, X12 = 1, X22 = 2; the entries pin X, so the
  // optimum is 3 and the solve just certifies PSD membership.
  const double s2 = std::sqrt(2.0);
  std::vector<Eigen::Triplet<double>> trip{
      {0, 0, 1.0}, {1, 1, 1.0 / s2}, {2, 2, 1.0}};
  Eigen::VectorXd b(3), c(3);
  b << 1.0, 1.0, 2.0;
  c << 1.0, 0.0, 1.0;
  auto p = make_problem(0, 0, {}, {2}, trip, 3, b, c);
  IpmSettings st;
  st.verify_directions = true;
  auto res = solve_standard(p, st);
  CHECK(res.status == IpmStatus::Optimal);
  CHECK(res.primal_objective == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("SDP with a free minimizing entry") {
  // min X22 s.t. X11 = 1, X12 = 0.8, X psd -> X22 = 0.64 at rank one.
  const double s2 = std::sqrt(2.0);
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.0}, {1, 1, 1.0 / s2}};
  Eigen::VectorXd b(2), c(3);
  b << 1.0, 0.8;
  c << 0.0, 0.0, 1.0;
  auto p = make_problem(0, 0, {}, {2}, trip, 2, b, c);
  IpmSettings st;
  st.verify_directions = true;
  auto res = solve_standard(p, st);
  CHECK(res.status == IpmStatus::Optimal);
  CHECK(res.primal_objective == doctest::Approx(0.64).epsilon(1e-6));
}

TEST_CASE("random feasible mixed-cone problems solve to high accuracy") {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    // Layout: 2 free, 3 nonneg, one SOC(3), one PSD(3).
    ConeLayout K;
    K.n_free = 2;
    K.n_nonneg = 3;
    K.soc = {3};
    K.psd = {3};
    const int n = K.total_dim();
    const int m = 6;
    Eigen::MatrixXd Ad(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) Ad(i, j) = g(rng);
    Eigen::VectorXd x0(n);
    x0[0] = g(rng);
    x0[1] = g(rng);
    for (int i = 0; i < 3; ++i) x0[2 + i] = 1.0 + g(rng) * g(rng);
    Eigen::Vector2d soc_x(g(rng), g(rng));
    x0[5] = soc_x.norm() + 1.0;
    x0[6] = soc_x[0];
    x0[7] = soc_x[1];
    Eigen::MatrixXd L(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) L(i, j) = g(rng);
    Eigen::MatrixXd X = L * L.transpose() + Eigen::MatrixXd::Identity(3, 3);
    x0.segment(8, 6) = svec_of_mat(X);
    // Interior dual pair (y0, z0) and the matching objective c = A'y + z.
    Eigen::VectorXd z0(n - K.n_free);
    for (int i = 0; i < 3; ++i) z0[i] = 1.0 + g(rng) * g(rng);
    Eigen::Vector2d zx(g(rng), g(rng));
    z0[3] = zx.norm() + 0.5;
    z0[4] = zx[0];
    z0[5] = zx[1];
    Eigen::MatrixXd Lz(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) Lz(i, j) = 0.5 * g(rng);
    z0.segment(6, 6) =
        svec_of_mat(Lz * Lz.transpose() + Eigen::MatrixXd::Identity(3, 3));
    Eigen::VectorXd y0(m);
    for (int i = 0; i < m; ++i) y0[i] = g(rng);
    Eigen::VectorXd zfull = Eigen::VectorXd::Zero(n);
    zfull.tail(n - K.n_free) = z0;
    StandardProblem p;
    p.cones = K;
    p.A = Ad.sparseView();
    p.b = Ad * x0;
    p.c = Ad.transpose() * y0 + zfull;
    IpmSettings st;
    st.verify_directions = true;
    auto res = solve_standard(p, st);
    REQUIRE(res.status == IpmStatus::Optimal);
    // Weak duality sandwich between the constructed feasible pair.
    double primal_at_x0 = p.c.dot(x0);
    double dual_at_y0 = p.b.dot(y0);
    CHECK(res.primal_objective <= primal_at_x0 + 1e-6);
    CHECK(res.primal_objective >= dual_at_y0 - 1e-6);
    CHECK(res.primal_residual < 1e-7);
    CHECK(res.dual_residual < 1e-7);
  }
}
