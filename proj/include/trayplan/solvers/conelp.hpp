#pragma once

#include <Eigen/Dense>
#include <vector>

namespace trayplan::solvers {

enum class SolveStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  MaxIterations,
  NumericalFailure,
};

const char* to_string(SolveStatus status);

/// Cone structure for the slack vector: a nonnegative orthant part followed
/// by symmetric PSD blocks stored in svec (scaled lower-triangle) coordinates.
struct ConeDims {
  int nonneg = 0;
  std::vector<int> psd;

  int svec_dim() const;
  int barrier_degree() const;
};

/// svec/smat conversions. Off-diagonal entries are scaled by sqrt(2) so that
/// svec(A) . svec(B) = trace(A B). Lower triangle, column-major.
Eigen::VectorXd svec(const Eigen::MatrixXd& M);
Eigen::MatrixXd smat(const Eigen::VectorXd& v, int k);

/// minimize    c'x
/// subject to  A x = b
///             G x + s = h,  s in K
struct ConeLpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  ConeDims dims;
};

struct ConeLpSettings {
  int max_iterations = 200;
  double tol_feas = 1e-8;
  double tol_gap_rel = 1e-8;
  double tol_infeas = 1e-10;
  double step_fraction = 0.99;
};

struct ConeLpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // equality duals
  Eigen::VectorXd z;  // cone duals
  Eigen::VectorXd s;  // cone slacks
  double obj = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  // On PrimalInfeasible, (y, z) is a Farkas certificate normalized so that
  // b'y + h'z = -1 with z in K* and A'y + G'z ~ 0. On DualInfeasible, x is an
  // unbounded ray normalized so that c'x = -1.
};

ConeLpSolution solve_conelp(const ConeLpProblem& prob,
                            const ConeLpSettings& settings = {});

/// Independent residual check for an Optimal solution; returns the largest
/// violation among primal/dual feasibility (including cone membership via
/// minimum eigenvalue) and complementarity. Separate code path from the
/// solver internals.
double conelp_kkt_residual(const ConeLpProblem& prob, const ConeLpSolution& sol);

/// Plain-text dump of problem data for cross-checking with external solvers.
void dump_conelp(const ConeLpProblem& prob, const std::string& path);

}  // namespace trayplan::solvers
