#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "trayplan/solvers/conelp.hpp"

namespace trayplan::solvers {

/// minimize    0.5 x'Px + q'x
/// subject to  Aeq x = beq
///             Ain x <= bin
///             lb <= x <= ub     (optional; empty means unbounded)
struct QuadProgram {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  Eigen::MatrixXd Aeq;
  Eigen::VectorXd beq;
  Eigen::MatrixXd Ain;
  Eigen::VectorXd bin;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;
};

/// Sparse variant used for large structured problems (no box bounds; fold
/// them into Ain).
struct SparseQp {
  Eigen::SparseMatrix<double> P;
  Eigen::VectorXd q;
  Eigen::SparseMatrix<double> Aeq;
  Eigen::VectorXd beq;
  Eigen::SparseMatrix<double> Ain;
  Eigen::VectorXd bin;
};

struct QpSettings {
  int max_iterations = 100;
  double tol = 1e-9;
  double step_fraction = 0.99;
  double regularization = 1e-9;
};

struct QpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // equality duals
  Eigen::VectorXd z;  // inequality duals (>= 0); dense path appends bound rows
  double obj = 0.0;
  double gap = 0.0;
  int iterations = 0;
  // Farkas certificate (y, z) on PrimalInfeasible: Aeq'y + Ain'z = 0,
  // beq'y + bin'z < 0, z >= 0.
};

QpSolution solve_qp(const SparseQp& qp, const QpSettings& settings = {});
QpSolution solve_qp(const QuadProgram& qp, const QpSettings& settings = {});

/// Independent KKT residual checker (stationarity, primal/dual feasibility,
/// complementarity), max norm over all conditions.
double qp_kkt_residual(const SparseQp& qp, const QpSolution& sol);

/// minimize c'x subject to Aeq x = beq, Ain x <= bin. A QP with P = 0, solved
/// through the homogeneous self-dual embedding so infeasibility and
/// unboundedness are certified.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd Aeq;
  Eigen::VectorXd beq;
  Eigen::MatrixXd Ain;
  Eigen::VectorXd bin;
};

struct LpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  double obj = 0.0;
  int iterations = 0;
};

LpSolution solve_lp(const LinearProgram& lp, const ConeLpSettings& settings = {});

}  // namespace trayplan::solvers
