#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "trayplan/solvers/conelp.hpp"

namespace trayplan::solvers {

/// Affine matrix-valued constraint F0 + sum_i x_{var_i} F_i  >= 0 (PSD).
struct PsdBlock {
  Eigen::MatrixXd F0;
  std::vector<std::pair<int, Eigen::MatrixXd>> terms;  // (variable index, Fi)
};

/// minimize    c'x
/// subject to  Aeq x = beq
///             Gl x <= hl
///             each PsdBlock PSD
struct SdpProblem {
  int num_vars = 0;
  Eigen::VectorXd c;  // empty means feasibility (c = 0)
  Eigen::MatrixXd Aeq;
  Eigen::VectorXd beq;
  Eigen::MatrixXd Gl;
  Eigen::VectorXd hl;
  std::vector<PsdBlock> psd_blocks;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  double obj = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

SdpSolution solve_sdp(const SdpProblem& prob, const ConeLpSettings& settings = {});

/// Independent feasibility check: returns the worst violation among equality
/// residuals, linear inequalities, and minimum eigenvalues of the PSD blocks
/// (negated, so feasible points give values <= 0 small).
double sdp_primal_violation(const SdpProblem& prob, const Eigen::VectorXd& x);

}  // namespace trayplan::solvers
