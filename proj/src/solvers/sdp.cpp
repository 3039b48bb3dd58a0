#include "trayplan/solvers/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace trayplan::solvers {

SdpSolution solve_sdp(const SdpProblem& prob, const ConeLpSettings& settings) {
  const int n = prob.num_vars;
  if (n <= 0) throw std::invalid_argument("solve_sdp: no variables");

  ConeLpProblem clp;
  clp.c = prob.c.size() > 0 ? prob.c : Eigen::VectorXd::Zero(n);
  if (clp.c.size() != n) throw std::invalid_argument("solve_sdp: c size");
  clp.A = prob.beq.size() > 0 ? prob.Aeq : Eigen::MatrixXd(0, n);
  clp.b = prob.beq;

  const int ml = static_cast<int>(prob.hl.size());
  clp.dims.nonneg = ml;
  int m = ml;
  for (const auto& blk : prob.psd_blocks) {
    const int k = static_cast<int>(blk.F0.rows());
    if (blk.F0.cols() != k || !blk.F0.isApprox(blk.F0.transpose(), 1e-12))
      throw std::invalid_argument("solve_sdp: F0 not symmetric");
    clp.dims.psd.push_back(k);
    m += k * (k + 1) / 2;
  }
  if (m == 0) throw std::invalid_argument("solve_sdp: no constraints");

  clp.G = Eigen::MatrixXd::Zero(m, n);
  clp.h = Eigen::VectorXd::Zero(m);
  if (ml > 0) {
    clp.G.topRows(ml) = prob.Gl;
    clp.h.head(ml) = prob.hl;
  }
  int off = ml;
  for (const auto& blk : prob.psd_blocks) {
    const int k = static_cast<int>(blk.F0.rows());
    const int d = k * (k + 1) / 2;
    clp.h.segment(off, d) = svec(blk.F0);
    for (const auto& [vi, Fi] : blk.terms) {
      if (vi < 0 || vi >= n) throw std::invalid_argument("solve_sdp: bad var index");
      clp.G.col(vi).segment(off, d) -= svec(0.5 * (Fi + Fi.transpose()));
    }
    off += d;
  }

  ConeLpSolution cs = solve_conelp(clp, settings);
  SdpSolution out;
  out.status = cs.status;
  out.x = cs.x;
  out.obj = cs.obj;
  out.gap = cs.gap;
  out.iterations = cs.iterations;
  return out;
}

double sdp_primal_violation(const SdpProblem& prob, const Eigen::VectorXd& x) {
  double v = 0.0;
  if (prob.beq.size() > 0)
    v = std::max(v, (prob.Aeq * x - prob.beq).lpNorm<Eigen::Infinity>());
  if (prob.hl.size() > 0)
    v = std::max(v, (prob.Gl * x - prob.hl).maxCoeff());
  for (const auto& blk : prob.psd_blocks) {
    Eigen::MatrixXd M = blk.F0;
    for (const auto& [vi, Fi] : blk.terms) M += x(vi) * 0.5 * (Fi + Fi.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    v = std::max(v, -es.eigenvalues().minCoeff());
  }
  return v;
}

}  // namespace trayplan::solvers
