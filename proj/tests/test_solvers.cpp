#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "trayplan/solvers/conelp.hpp"
#include "trayplan/solvers/qp.hpp"
#include "trayplan/solvers/sdp.hpp"

using namespace trayplan::solvers;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd random_vec(std::mt19937& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

MatrixXd random_mat(std::mt19937& rng, int r, int c, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  MatrixXd M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = g(rng);
  return M;
}

}  // namespace

TEST_CASE("svec/smat round trip preserves inner products") {
  std::mt19937 rng(7);
  for (int k : {1, 2, 4, 7}) {
    MatrixXd A = random_mat(rng, k, k);
    A = (A + A.transpose()).eval();
    MatrixXd B = random_mat(rng, k, k);
    B = (B + B.transpose()).eval();
    CHECK(smat(svec(A), k).isApprox(A, 1e-14));
    CHECK(svec(A).dot(svec(B)) == doctest::Approx((A * B).trace()).epsilon(1e-12));
  }
}

TEST_CASE("lp: max x1 subject to x1+x2<=1, x>=0") {
  LinearProgram lp;
  lp.c = VectorXd(2);
  lp.c << -1, 0;
  lp.Ain = MatrixXd(3, 2);
  lp.Ain << 1, 1, -1, 0, 0, -1;
  lp.bin = VectorXd(3);
  lp.bin << 1, 0, 0;
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.obj == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("lp: infeasible box is certified") {
  LinearProgram lp;
  lp.c = VectorXd::Zero(1);
  lp.Ain = MatrixXd(2, 1);
  lp.Ain << 1, -1;
  lp.bin = VectorXd(2);
  lp.bin << -1, -1;  // x <= -1 and x >= 1
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::PrimalInfeasible);
  // Farkas: z >= 0, Ain'z = 0, bin'z < 0
  CHECK(sol.z.minCoeff() >= -1e-9);
  CHECK(std::abs(lp.Ain.transpose().cwiseProduct(sol.z.transpose()).sum()) < 1e-7);
  CHECK(lp.bin.dot(sol.z) < -0.5);
}

TEST_CASE("lp: unbounded is reported") {
  LinearProgram lp;
  lp.c = VectorXd(1);
  lp.c << -1;
  lp.Ain = MatrixXd(1, 1);
  lp.Ain << -1;
  lp.bin = VectorXd::Zero(1);  // x >= 0, minimize -x
  auto sol = solve_lp(lp);
  CHECK(sol.status == SolveStatus::DualInfeasible);
}

TEST_CASE("lp: random instances match vertex enumeration oracle") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> ndist(2, 3);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = ndist(rng);
    const int m = n + 3;
    MatrixXd A = random_mat(rng, m, n);
    // bounded feasible region around a random interior point
    VectorXd x0 = random_vec(rng, n, 0.3);
    VectorXd b = A * x0 + VectorXd::Ones(m);
    MatrixXd Abox(2 * n, n);
    Abox << MatrixXd::Identity(n, n), -MatrixXd::Identity(n, n);
    MatrixXd Afull(m + 2 * n, n);
    Afull << A, Abox;
    VectorXd bfull(m + 2 * n);
    bfull << b, VectorXd::Constant(2 * n, 10.0);
    VectorXd c = random_vec(rng, n);

    LinearProgram lp{c, MatrixXd(0, n), VectorXd(0), Afull, bfull};
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);

    // brute force: all vertices from n-subsets of active rows
    double best = std::numeric_limits<double>::infinity();
    const int rows = static_cast<int>(bfull.size());
    std::vector<int> idx(n);
    std::function<void(int, int)> rec = [&](int start, int k) {
      if (k == n) {
        MatrixXd B(n, n);
        VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
          B.row(i) = Afull.row(idx[i]);
          rhs(i) = bfull(idx[i]);
        }
        Eigen::FullPivLU<MatrixXd> lu(B);
        if (!lu.isInvertible()) return;
        VectorXd v = lu.solve(rhs);
        if (((Afull * v - bfull).array() <= 1e-8).all())
          best = std::min(best, c.dot(v));
        return;
      }
      for (int i = start; i < rows; ++i) {
        idx[k] = i;
        rec(i + 1, k + 1);
      }
    };
    rec(0, 0);
    REQUIRE(std::isfinite(best));
    CHECK(sol.obj == doctest::Approx(best).epsilon(1e-8));
    ++solved;
  }
  CHECK(solved == 40);
}

TEST_CASE("qp: min ||x||^2 with x1 = 1") {
  QuadProgram qp;
  qp.P = 2.0 * MatrixXd::Identity(4, 4);
  qp.q = VectorXd::Zero(4);
  qp.Aeq = MatrixXd::Zero(1, 4);
  qp.Aeq(0, 0) = 1;
  qp.beq = VectorXd::Ones(1);
  qp.Ain = MatrixXd(0, 4);
  qp.bin = VectorXd(0);
  auto sol = solve_qp(qp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.x.tail(3).norm() < 1e-8);
}

TEST_CASE("qp: projection of (2,2) onto x <= 1") {
  QuadProgram qp;
  qp.P = 2.0 * MatrixXd::Identity(2, 2);
  qp.q = VectorXd::Constant(2, -4.0);
  qp.Aeq = MatrixXd(0, 2);
  qp.beq = VectorXd(0);
  qp.Ain = MatrixXd(0, 2);
  qp.bin = VectorXd(0);
  qp.ub = VectorXd::Ones(2);
  auto sol = solve_qp(qp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.x(1) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("qp: random strictly convex problems with constructed KKT solutions") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 6;
    MatrixXd M = random_mat(rng, n, n);
    MatrixXd P = M.transpose() * M + MatrixXd::Identity(n, n);
    VectorXd xstar = random_vec(rng, n);
    MatrixXd Aeq = random_mat(rng, 2, n);
    VectorXd ystar = random_vec(rng, 2);
    MatrixXd Ain = random_mat(rng, 4, n);
    // two active rows with positive multipliers, two inactive
    VectorXd zstar(4);
    zstar << 0.5 + trial * 0.01, 1.0, 0.0, 0.0;
    VectorXd bin(4);
    bin(0) = Ain.row(0) * xstar;
    bin(1) = Ain.row(1) * xstar;
    bin(2) = Ain.row(2) * xstar + 1.0;
    bin(3) = Ain.row(3) * xstar + 2.0;
    VectorXd q = -(P * xstar + Aeq.transpose() * ystar +
                   Ain.transpose() * zstar);
    QuadProgram qp{P, q, Aeq, Aeq * xstar, Ain, bin, VectorXd(), VectorXd()};
    auto sol = solve_qp(qp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK((sol.x - xstar).lpNorm<Eigen::Infinity>() < 1e-6);

    SparseQp sp{P.sparseView(), q, Aeq.sparseView(), qp.beq,
                Ain.sparseView(), bin};
    CHECK(qp_kkt_residual(sp, sol) < 1e-6);
  }
}

TEST_CASE("qp: infeasible constraints give a Farkas certificate") {
  QuadProgram qp;
  qp.P = MatrixXd::Identity(1, 1);
  qp.q = VectorXd::Zero(1);
  qp.Aeq = MatrixXd(0, 1);
  qp.beq = VectorXd(0);
  qp.Ain = MatrixXd(2, 1);
  qp.Ain << 1, -1;
  qp.bin = VectorXd(2);
  qp.bin << -2, -2;
  auto sol = solve_qp(qp);
  CHECK(sol.status == SolveStatus::PrimalInfeasible);
  CHECK(qp.bin.dot(sol.z) < -1e-8);
}

TEST_CASE("sdp: max t with [[1,t],[t,1]] psd") {
  SdpProblem p;
  p.num_vars = 1;
  p.c = VectorXd::Constant(1, -1.0);  // maximize t
  PsdBlock blk;
  blk.F0 = MatrixXd::Identity(2, 2);
  MatrixXd Ft(2, 2);
  Ft << 0, 1, 1, 0;
  blk.terms.push_back({0, Ft});
  p.psd_blocks.push_back(blk);
  auto sol = solve_sdp(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("sdp: min trace(X) with X psd and X11 = 1") {
  // variables: svec-style entries of a 3x3 symmetric X
  const int n = 6;
  SdpProblem p;
  p.num_vars = n;
  p.c = VectorXd::Zero(n);
  // entries: (0,0),(1,0),(2,0),(1,1),(2,1),(2,2)
  p.c(0) = 1; p.c(3) = 1; p.c(5) = 1;
  p.Aeq = MatrixXd::Zero(1, n);
  p.Aeq(0, 0) = 1;
  p.beq = VectorXd::Ones(1);
  PsdBlock blk;
  blk.F0 = MatrixXd::Zero(3, 3);
  int var = 0;
  for (int j = 0; j < 3; ++j)
    for (int i = j; i < 3; ++i) {
      MatrixXd E = MatrixXd::Zero(3, 3);
      E(i, j) = E(j, i) = 1.0;
      blk.terms.push_back({var++, E});
    }
  p.psd_blocks.push_back(blk);
  auto sol = solve_sdp(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.obj == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sdp_primal_violation(p, sol.x) < 1e-7);
}

TEST_CASE("sdp: infeasible block is certified") {
  SdpProblem p;
  p.num_vars = 1;
  p.Gl = MatrixXd::Constant(1, 1, 1.0);
  p.hl = VectorXd::Constant(1, -1.0);  // x <= -1
  PsdBlock blk;
  blk.F0 = MatrixXd::Zero(1, 1);
  blk.terms.push_back({0, MatrixXd::Ones(1, 1)});  // x >= 0
  p.psd_blocks.push_back(blk);
  auto sol = solve_sdp(p);
  CHECK(sol.status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("conelp: random sdps with constructed complementary optima") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5, p = 2, k = 4;
    const int d = k * (k + 1) / 2;
    ConeLpProblem prob;
    prob.dims.nonneg = 3;
    prob.dims.psd = {k};
    const int m = 3 + d;
    prob.A = random_mat(rng, p, n);
    prob.G = random_mat(rng, m, n);
    VectorXd xstar = random_vec(rng, n);
    VectorXd ystar = random_vec(rng, p);

    // complementary pair on the orthant part
    VectorXd s_lin(3), z_lin(3);
    s_lin << 0.7, 0.0, 1.3;
    z_lin << 0.0, 0.9, 0.0;
    // complementary pair on the PSD part via a shared eigenbasis
    MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(random_mat(rng, k, k))
                     .householderQ();
    VectorXd es(k), ez(k);
    es << 1.2, 0.8, 0.0, 0.0;
    ez << 0.0, 0.0, 0.5, 1.5;
    MatrixXd S = Q * es.asDiagonal() * Q.transpose();
    MatrixXd Z = Q * ez.asDiagonal() * Q.transpose();

    VectorXd sstar(m), zstar(m);
    sstar << s_lin, svec(S);
    zstar << z_lin, svec(Z);

    prob.b = prob.A * xstar;
    prob.h = prob.G * xstar + sstar;
    prob.c = -(prob.A.transpose() * ystar + prob.G.transpose() * zstar);

    auto sol = solve_conelp(prob);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const double expected = prob.c.dot(xstar);
    CHECK(std::abs(sol.obj - expected) <=
          1e-6 * std::max(1.0, std::abs(expected)));
    CHECK(sol.gap <= 1e-6 * std::max(1.0, std::abs(expected)));
    CHECK(conelp_kkt_residual(prob, sol) < 1e-5);
  }
}

TEST_CASE("conelp: deterministic across repeated solves") {
  std::mt19937 rng(5);
  ConeLpProblem prob;
  prob.dims.nonneg = 4;
  prob.A = MatrixXd(0, 3);
  prob.b = VectorXd(0);
  prob.G = random_mat(rng, 4, 3);
  VectorXd x0 = random_vec(rng, 3);
  prob.h = prob.G * x0 + VectorXd::Ones(4);
  prob.c = random_vec(rng, 3);
  // make it bounded
  prob.G.conservativeResize(10, 3);
  prob.G.bottomRows(6) << MatrixXd::Identity(3, 3), -MatrixXd::Identity(3, 3);
  prob.h.conservativeResize(10);
  prob.h.tail(6).setConstant(50.0);
  prob.dims.nonneg = 10;
  auto s1 = solve_conelp(prob);
  auto s2 = solve_conelp(prob);
  REQUIRE(s1.status == SolveStatus::Optimal);
  CHECK(s1.x == s2.x);
  CHECK(s1.iterations == s2.iterations);
}
