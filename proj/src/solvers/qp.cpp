#include "trayplan/solvers/qp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace trayplan::solvers {

namespace {

// Applies the exact (unregularized) KKT operator; used for iterative
// refinement against the regularized factorization.
struct KktApply {
  const SparseQp& qp;
  int n, pe, mi;

  Eigen::VectorXd operator()(const Eigen::VectorXd& d,
                             const Eigen::VectorXd& neg_sz) const {
    Eigen::VectorXd out(n + pe + mi);
    auto dx = d.head(n);
    auto dy = d.segment(n, pe);
    auto dz = d.tail(mi);
    out.head(n) = qp.P.selfadjointView<Eigen::Lower>() * dx;
    if (pe > 0) out.head(n) += qp.Aeq.transpose() * dy;
    if (mi > 0) out.head(n) += qp.Ain.transpose() * dz;
    if (pe > 0) out.segment(n, pe) = qp.Aeq * dx;
    if (mi > 0)
      out.tail(mi) = qp.Ain * dx + neg_sz.cwiseProduct(dz);
    return out;
  }
};

}  // namespace

QpSolution solve_qp(const SparseQp& qp, const QpSettings& settings) {
  const int n = static_cast<int>(qp.q.size());
  const int pe = static_cast<int>(qp.beq.size());
  const int mi = static_cast<int>(qp.bin.size());
  if (qp.P.rows() != n || qp.P.cols() != n)
    throw std::invalid_argument("solve_qp: P dimensions");
  if (pe > 0 && (qp.Aeq.rows() != pe || qp.Aeq.cols() != n))
    throw std::invalid_argument("solve_qp: Aeq dimensions");
  if (mi > 0 && (qp.Ain.rows() != mi || qp.Ain.cols() != n))
    throw std::invalid_argument("solve_qp: Ain dimensions");

  QpSolution sol;
  const double delta = settings.regularization;

  // assemble KKT pattern once; only the (z, z) diagonal changes per iteration
  const int dim = n + pe + mi;
  Eigen::SparseMatrix<double> K(dim, dim);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(qp.P.nonZeros() + 2 * (pe > 0 ? qp.Aeq.nonZeros() : 0) +
                  2 * (mi > 0 ? qp.Ain.nonZeros() : 0) + dim);
    for (int k = 0; k < qp.P.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(qp.P, k); it; ++it)
        if (it.row() >= it.col()) trips.emplace_back(it.row(), it.col(), it.value());
    if (pe > 0)
      for (int k = 0; k < qp.Aeq.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(qp.Aeq, k); it; ++it)
          trips.emplace_back(n + it.row(), it.col(), it.value());
    if (mi > 0)
      for (int k = 0; k < qp.Ain.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(qp.Ain, k); it; ++it)
          trips.emplace_back(n + pe + it.row(), it.col(), it.value());
    for (int i = 0; i < n; ++i) trips.emplace_back(i, i, delta);
    for (int i = 0; i < pe; ++i) trips.emplace_back(n + i, n + i, -delta);
    for (int i = 0; i < mi; ++i) trips.emplace_back(n + pe + i, n + pe + i, -1.0);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
  ldlt.analyzePattern(K);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(pe);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(mi);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(mi);

  const double qn = std::max(1.0, qp.q.lpNorm<Eigen::Infinity>());
  const double bn = std::max(1.0, pe > 0 ? qp.beq.lpNorm<Eigen::Infinity>() : 0.0);
  const double hn = std::max(1.0, mi > 0 ? qp.bin.lpNorm<Eigen::Infinity>() : 0.0);

  KktApply apply{qp, n, pe, mi};

  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    sol.iterations = iter;
    Eigen::VectorXd rd = qp.P.selfadjointView<Eigen::Lower>() * x + qp.q;
    if (pe > 0) rd += qp.Aeq.transpose() * y;
    if (mi > 0) rd += qp.Ain.transpose() * z;
    Eigen::VectorXd rp =
        pe > 0 ? Eigen::VectorXd(qp.Aeq * x - qp.beq) : Eigen::VectorXd(0);
    Eigen::VectorXd rg =
        mi > 0 ? Eigen::VectorXd(qp.Ain * x + s - qp.bin) : Eigen::VectorXd(0);
    const double mu = mi > 0 ? s.dot(z) / mi : 0.0;
    const double obj = 0.5 * x.dot(qp.P.selfadjointView<Eigen::Lower>() * x) +
                       qp.q.dot(x);

    if (rd.lpNorm<Eigen::Infinity>() <= settings.tol * qn &&
        (pe == 0 || rp.lpNorm<Eigen::Infinity>() <= settings.tol * bn) &&
        (mi == 0 || rg.lpNorm<Eigen::Infinity>() <= settings.tol * hn) &&
        (mi == 0 || s.dot(z) <= settings.tol * std::max(1.0, std::abs(obj)))) {
      sol.status = SolveStatus::Optimal;
      sol.x = x;
      sol.y = y;
      sol.z = z;
      sol.obj = obj;
      sol.gap = mi > 0 ? s.dot(z) : 0.0;
      return sol;
    }

    // refresh the changing diagonal and factor
    Eigen::VectorXd neg_sz(mi);
    for (int i = 0; i < mi; ++i) {
      neg_sz(i) = -s(i) / z(i);
      K.coeffRef(n + pe + i, n + pe + i) = neg_sz(i) - delta;
    }
    ldlt.factorize(K);
    if (ldlt.info() != Eigen::Success) {
      sol.status = SolveStatus::NumericalFailure;
      sol.x = x; sol.y = y; sol.z = z; sol.obj = obj;
      return sol;
    }

    auto solve_kkt = [&](const Eigen::VectorXd& rhs) {
      Eigen::VectorXd d = ldlt.solve(rhs);
      for (int r = 0; r < 2; ++r) d += ldlt.solve(rhs - apply(d, neg_sz));
      return d;
    };

    // predictor
    Eigen::VectorXd rhs(dim);
    rhs.head(n) = -rd;
    rhs.segment(n, pe) = -rp;
    rhs.tail(mi) = -rg + s;  // bz = -rg - rhs_c./z with rhs_c = -s.*z
    Eigen::VectorXd d_aff = solve_kkt(rhs);
    Eigen::VectorXd dz_aff = d_aff.tail(mi);
    Eigen::VectorXd ds_aff = -rg - (mi > 0 ? Eigen::VectorXd(qp.Ain * d_aff.head(n))
                                           : Eigen::VectorXd(0));

    double alpha_aff = 1.0;
    for (int i = 0; i < mi; ++i) {
      if (ds_aff(i) < 0) alpha_aff = std::min(alpha_aff, -s(i) / ds_aff(i));
      if (dz_aff(i) < 0) alpha_aff = std::min(alpha_aff, -z(i) / dz_aff(i));
    }
    double sigma = 0.0;
    if (mi > 0) {
      const double gap_aff =
          (s + alpha_aff * ds_aff).dot(z + alpha_aff * dz_aff);
      sigma = std::pow(gap_aff / s.dot(z), 3);
      sigma = std::min(1.0, std::max(0.0, sigma));
    }

    // corrector
    Eigen::VectorXd rhs_c(mi);
    for (int i = 0; i < mi; ++i)
      rhs_c(i) = -s(i) * z(i) + sigma * mu - ds_aff(i) * dz_aff(i);
    rhs.tail(mi) = -rg - rhs_c.cwiseQuotient(z);
    Eigen::VectorXd d = solve_kkt(rhs);
    Eigen::VectorXd dx = d.head(n);
    Eigen::VectorXd dy = d.segment(n, pe);
    Eigen::VectorXd dz = d.tail(mi);
    Eigen::VectorXd ds =
        mi > 0 ? Eigen::VectorXd(-rg - qp.Ain * dx) : Eigen::VectorXd(0);

    double alpha = 1.0;
    for (int i = 0; i < mi; ++i) {
      if (ds(i) < 0) alpha = std::min(alpha, -s(i) / ds(i));
      if (dz(i) < 0) alpha = std::min(alpha, -z(i) / dz(i));
    }
    alpha = std::min(1.0, settings.step_fraction * alpha);
    if (!std::isfinite(alpha) || alpha <= 0) {
      sol.status = SolveStatus::NumericalFailure;
      sol.x = x; sol.y = y; sol.z = z; sol.obj = obj;
      return sol;
    }
    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
  }

  sol.status = SolveStatus::MaxIterations;
  sol.x = x;
  sol.y = y;
  sol.z = z;
  sol.obj = 0.5 * x.dot(qp.P.selfadjointView<Eigen::Lower>() * x) + qp.q.dot(x);
  sol.gap = mi > 0 ? s.dot(z) : 0.0;
  return sol;
}

QpSolution solve_qp(const QuadProgram& qp, const QpSettings& settings) {
  const int n = static_cast<int>(qp.q.size());
  if (!qp.P.allFinite() || !qp.q.allFinite())
    throw std::invalid_argument("solve_qp: non-finite data");

  // symmetrize and eigen-floor P
  Eigen::MatrixXd P = 0.5 * (qp.P + qp.P.transpose());
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
      throw std::invalid_argument("solve_qp: P is not positive semidefinite");
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    P = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  }

  // fold box bounds into inequality rows
  Eigen::MatrixXd Ain = qp.Ain;
  Eigen::VectorXd bin = qp.bin;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, double>> extra;  // (+/-)(i+1), bound
  if (qp.ub.size() > 0)
    for (int i = 0; i < n; ++i)
      if (qp.ub(i) < inf) extra.push_back({i + 1, qp.ub(i)});
  if (qp.lb.size() > 0)
    for (int i = 0; i < n; ++i)
      if (qp.lb(i) > -inf) extra.push_back({-(i + 1), -qp.lb(i)});
  if (!extra.empty()) {
    const int m0 = static_cast<int>(bin.size());
    Ain.conservativeResize(m0 + extra.size(), n);
    bin.conservativeResize(m0 + extra.size());
    for (size_t k = 0; k < extra.size(); ++k) {
      Ain.row(m0 + k).setZero();
      const int i = std::abs(extra[k].first) - 1;
      Ain(m0 + k, i) = extra[k].first > 0 ? 1.0 : -1.0;
      bin(m0 + k) = extra[k].second;
    }
  }

  SparseQp sp;
  sp.P = P.sparseView();
  sp.q = qp.q;
  sp.Aeq = qp.Aeq.sparseView();
  sp.beq = qp.beq;
  sp.Ain = Ain.sparseView();
  sp.bin = bin;
  QpSolution sol = solve_qp(sp, settings);

  if (sol.status == SolveStatus::MaxIterations ||
      sol.status == SolveStatus::NumericalFailure) {
    // distinguish "hard problem" from "infeasible constraints"
    LinearProgram feas;
    feas.c = Eigen::VectorXd::Zero(n);
    feas.Aeq = qp.Aeq;
    feas.beq = qp.beq;
    feas.Ain = Ain;
    feas.bin = bin;
    LpSolution lp = solve_lp(feas);
    if (lp.status == SolveStatus::PrimalInfeasible) {
      sol.status = SolveStatus::PrimalInfeasible;
      sol.y = lp.y;
      sol.z = lp.z;
    }
  }
  return sol;
}

double qp_kkt_residual(const SparseQp& qp, const QpSolution& sol) {
  const int pe = static_cast<int>(qp.beq.size());
  const int mi = static_cast<int>(qp.bin.size());
  Eigen::VectorXd rd = qp.P.selfadjointView<Eigen::Lower>() * sol.x + qp.q;
  if (pe > 0) rd += qp.Aeq.transpose() * sol.y;
  if (mi > 0) rd += qp.Ain.transpose() * sol.z;
  double r = rd.lpNorm<Eigen::Infinity>();
  if (pe > 0) r = std::max(r, (qp.Aeq * sol.x - qp.beq).lpNorm<Eigen::Infinity>());
  if (mi > 0) {
    Eigen::VectorXd slack = qp.bin - qp.Ain * sol.x;
    r = std::max(r, std::max(0.0, -slack.minCoeff()));
    r = std::max(r, std::max(0.0, -sol.z.minCoeff()));
    r = std::max(r, slack.cwiseProduct(sol.z).lpNorm<Eigen::Infinity>());
  }
  return r;
}

LpSolution solve_lp(const LinearProgram& lp, const ConeLpSettings& settings) {
  const int n = static_cast<int>(lp.c.size());
  ConeLpProblem prob;
  prob.c = lp.c;
  prob.A = lp.Aeq.size() > 0 ? lp.Aeq : Eigen::MatrixXd(0, n);
  prob.b = lp.beq;
  if (lp.bin.size() > 0) {
    prob.G = lp.Ain;
    prob.h = lp.bin;
  } else {
    // the embedding needs at least one cone row; add a vacuous one
    prob.G = Eigen::MatrixXd::Zero(1, n);
    prob.h = Eigen::VectorXd::Ones(1);
  }
  prob.dims.nonneg = static_cast<int>(prob.h.size());

  ConeLpSolution cs = solve_conelp(prob, settings);
  LpSolution out;
  out.status = cs.status;
  out.x = cs.x;
  out.y = cs.y;
  out.z = lp.bin.size() > 0 ? cs.z : Eigen::VectorXd(0);
  out.obj = cs.obj;
  out.iterations = cs.iterations;
  return out;
}

}  // namespace trayplan::solvers
