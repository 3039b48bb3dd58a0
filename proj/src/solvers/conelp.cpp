#include "trayplan/solvers/conelp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace trayplan::solvers {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal_infeasible";
    case SolveStatus::DualInfeasible: return "dual_infeasible";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

int ConeDims::svec_dim() const {
  int m = nonneg;
  for (int k : psd) m += k * (k + 1) / 2;
  return m;
}

int ConeDims::barrier_degree() const {
  int nu = nonneg;
  for (int k : psd) nu += k;
  return nu;
}

Eigen::VectorXd svec(const Eigen::MatrixXd& M) {
  const int k = static_cast<int>(M.rows());
  Eigen::VectorXd v(k * (k + 1) / 2);
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    v(idx++) = M(j, j);
    for (int i = j + 1; i < k; ++i) v(idx++) = kSqrt2 * 0.5 * (M(i, j) + M(j, i));
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int k) {
  Eigen::MatrixXd M(k, k);
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    M(j, j) = v(idx++);
    for (int i = j + 1; i < k; ++i) {
      M(i, j) = v(idx) / kSqrt2;
      M(j, i) = M(i, j);
      ++idx;
    }
  }
  return M;
}

namespace {

// Nesterov-Todd scaling for the product cone. For the orthant part the
// scaling is diagonal; each PSD block carries the factor R with
// R' Z R = inv(R) S inv(R)' = diag(lam).
struct Scaling {
  Eigen::VectorXd d;                    // orthant: w_i = sqrt(s_i/z_i)
  Eigen::VectorXd lam_lin;              // orthant: sqrt(s_i z_i)
  std::vector<Eigen::MatrixXd> R;       // per PSD block
  std::vector<Eigen::MatrixXd> Rinv;
  std::vector<Eigen::VectorXd> lam_psd; // eigenvalues of the scaled point
};

struct BlockLayout {
  int nonneg;
  std::vector<int> psd;        // block sizes
  std::vector<int> offset;     // svec offset of each PSD block
  int total;
};

BlockLayout make_layout(const ConeDims& dims) {
  BlockLayout L;
  L.nonneg = dims.nonneg;
  L.psd = dims.psd;
  int off = dims.nonneg;
  for (int k : dims.psd) {
    L.offset.push_back(off);
    off += k * (k + 1) / 2;
  }
  L.total = off;
  return L;
}

// svec(M X M') = skron(M) svec(X)
Eigen::MatrixXd skron(const Eigen::MatrixXd& M) {
  const int k = static_cast<int>(M.rows());
  const int d = k * (k + 1) / 2;
  Eigen::MatrixXd out(d, d);
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(k, k);
  int col = 0;
  for (int j = 0; j < k; ++j) {
    for (int i = j; i < k; ++i) {
      const double val = (i == j) ? 1.0 : 1.0 / kSqrt2;
      E(i, j) = val;
      E(j, i) = val;
      out.col(col++) = svec(M * E * M.transpose());
      E(i, j) = 0.0;
      E(j, i) = 0.0;
    }
  }
  return out;
}

Scaling compute_scaling(const BlockLayout& L, const Eigen::VectorXd& s,
                        const Eigen::VectorXd& z) {
  Scaling W;
  W.d = (s.head(L.nonneg).array() / z.head(L.nonneg).array()).sqrt();
  W.lam_lin = (s.head(L.nonneg).array() * z.head(L.nonneg).array()).sqrt();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    const int d = k * (k + 1) / 2;
    Eigen::MatrixXd S = smat(s.segment(L.offset[bi], d), k);
    Eigen::MatrixXd Z = smat(z.segment(L.offset[bi], d), k);
    Eigen::LLT<Eigen::MatrixXd> Ls(S), Lz(Z);
    if (Ls.info() != Eigen::Success || Lz.info() != Eigen::Success)
      throw std::runtime_error("conelp: scaling point left the cone");
    Eigen::MatrixXd Lsm = Ls.matrixL();
    Eigen::MatrixXd Lzm = Lz.matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Lzm.transpose() * Lsm,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd sig = svd.singularValues();
    Eigen::VectorXd sqrt_sig = sig.array().sqrt();
    W.R.push_back(Lsm * svd.matrixV() * sqrt_sig.cwiseInverse().asDiagonal());
    W.Rinv.push_back(sqrt_sig.asDiagonal() * svd.matrixV().transpose() *
                     Lsm.triangularView<Eigen::Lower>().solve(
                         Eigen::MatrixXd::Identity(k, k)));
    W.lam_psd.push_back(sig);
  }
  return W;
}

// lambda = W z = W^{-T} s (scaled point)
Eigen::VectorXd scaled_lambda(const BlockLayout& L, const Scaling& W) {
  Eigen::VectorXd lam(L.total);
  lam.head(L.nonneg) = W.lam_lin;
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    lam.segment(L.offset[bi], k * (k + 1) / 2) =
        svec(Eigen::MatrixXd(W.lam_psd[bi].asDiagonal()));
  }
  return lam;
}

Eigen::VectorXd apply_W(const BlockLayout& L, const Scaling& W,
                        const Eigen::VectorXd& u) {
  Eigen::VectorXd out(L.total);
  out.head(L.nonneg) = W.d.array() * u.head(L.nonneg).array();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    const int d = k * (k + 1) / 2;
    Eigen::MatrixXd U = smat(u.segment(L.offset[bi], d), k);
    out.segment(L.offset[bi], d) = svec(W.R[bi].transpose() * U * W.R[bi]);
  }
  return out;
}

Eigen::VectorXd apply_Wt(const BlockLayout& L, const Scaling& W,
                         const Eigen::VectorXd& u) {
  Eigen::VectorXd out(L.total);
  out.head(L.nonneg) = W.d.array() * u.head(L.nonneg).array();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    const int d = k * (k + 1) / 2;
    Eigen::MatrixXd U = smat(u.segment(L.offset[bi], d), k);
    out.segment(L.offset[bi], d) = svec(W.R[bi] * U * W.R[bi].transpose());
  }
  return out;
}

Eigen::VectorXd apply_Winvt(const BlockLayout& L, const Scaling& W,
                            const Eigen::VectorXd& u) {
  Eigen::VectorXd out(L.total);
  out.head(L.nonneg) = u.head(L.nonneg).array() / W.d.array();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    const int d = k * (k + 1) / 2;
    Eigen::MatrixXd U = smat(u.segment(L.offset[bi], d), k);
    out.segment(L.offset[bi], d) = svec(W.Rinv[bi] * U * W.Rinv[bi].transpose());
  }
  return out;
}

// Jordan product u o v (componentwise on the orthant, symmetrized matrix
// product on PSD blocks).
Eigen::VectorXd jordan(const BlockLayout& L, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& v) {
  Eigen::VectorXd out(L.total);
  out.head(L.nonneg) = u.head(L.nonneg).array() * v.head(L.nonneg).array();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    const int d = k * (k + 1) / 2;
    Eigen::MatrixXd U = smat(u.segment(L.offset[bi], d), k);
    Eigen::MatrixXd V = smat(v.segment(L.offset[bi], d), k);
    out.segment(L.offset[bi], d) = svec(0.5 * (U * V + V * U));
  }
  return out;
}

// Solve lambda o x = v for x, where lambda is the (diagonal) scaled point.
Eigen::VectorXd jordan_solve_lambda(const BlockLayout& L, const Scaling& W,
                                    const Eigen::VectorXd& v) {
  Eigen::VectorXd out(L.total);
  out.head(L.nonneg) = v.head(L.nonneg).array() / W.lam_lin.array();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    const Eigen::VectorXd& lam = W.lam_psd[bi];
    int idx = L.offset[bi];
    for (int j = 0; j < k; ++j) {
      out(idx) = v(idx) / lam(j);
      ++idx;
      for (int i = j + 1; i < k; ++i) {
        out(idx) = v(idx) / (0.5 * (lam(i) + lam(j)));
        ++idx;
      }
    }
  }
  return out;
}

Eigen::VectorXd cone_identity(const BlockLayout& L) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(L.total);
  e.head(L.nonneg).setOnes();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    e.segment(L.offset[bi], k * (k + 1) / 2) =
        svec(Eigen::MatrixXd::Identity(k, k));
  }
  return e;
}

// Largest alpha in (0, cap] with u + alpha du staying in the cone.
double max_step(const BlockLayout& L, const Eigen::VectorXd& u,
                const Eigen::VectorXd& du) {
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < L.nonneg; ++i)
    if (du(i) < 0) alpha = std::min(alpha, -u(i) / du(i));
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    const int d = k * (k + 1) / 2;
    Eigen::MatrixXd U = smat(u.segment(L.offset[bi], d), k);
    Eigen::MatrixXd dU = smat(du.segment(L.offset[bi], d), k);
    Eigen::LLT<Eigen::MatrixXd> llt(U);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd Lm = llt.matrixL();
    Eigen::MatrixXd M = Lm.triangularView<Eigen::Lower>().solve(dU);
    M = Lm.triangularView<Eigen::Lower>().solve(M.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()),
                                                      Eigen::EigenvaluesOnly);
    const double emin = es.eigenvalues().minCoeff();
    if (emin < 0) alpha = std::min(alpha, -1.0 / emin);
  }
  return alpha;
}

double min_cone_eig(const BlockLayout& L, const Eigen::VectorXd& u) {
  double emin = std::numeric_limits<double>::infinity();
  if (L.nonneg > 0) emin = u.head(L.nonneg).minCoeff();
  for (size_t bi = 0; bi < L.psd.size(); ++bi) {
    const int k = L.psd[bi];
    Eigen::MatrixXd U = smat(u.segment(L.offset[bi], k * (k + 1) / 2), k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(U, Eigen::EigenvaluesOnly);
    emin = std::min(emin, es.eigenvalues().minCoeff());
  }
  return emin;
}

}  // namespace

namespace {

// Drops linearly dependent equality rows so the KKT system stays regular.
// An inconsistent equality block yields an immediate Farkas certificate: the
// least-squares residual r = A x - b satisfies A' r = 0 and b' r < 0.
ConeLpSolution solve_conelp_reduced(const ConeLpProblem& prob,
                                    const ConeLpSettings& settings);

}  // namespace

ConeLpSolution solve_conelp(const ConeLpProblem& prob,
                            const ConeLpSettings& settings) {
  const int p0 = static_cast<int>(prob.b.size());
  if (p0 > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(prob.A.transpose());
    const int rank = static_cast<int>(qr.rank());
    if (rank < p0) {
      const Eigen::VectorXd x_ls =
          prob.A.colPivHouseholderQr().solve(prob.b);
      const Eigen::VectorXd res = prob.A * x_ls - prob.b;
      if (res.norm() > 1e-10 * (1.0 + prob.b.norm())) {
        ConeLpSolution sol;
        sol.status = SolveStatus::PrimalInfeasible;
        sol.x.setZero(prob.c.size());
        sol.s.setZero(prob.h.size());
        sol.y = res / res.squaredNorm();
        sol.z.setZero(prob.h.size());
        return sol;
      }
      std::vector<int> keep(qr.colsPermutation().indices().data(),
                            qr.colsPermutation().indices().data() + rank);
      ConeLpProblem red = prob;
      red.A.resize(rank, prob.A.cols());
      red.b.resize(rank);
      for (int i = 0; i < rank; ++i) {
        red.A.row(i) = prob.A.row(keep[i]);
        red.b(i) = prob.b(keep[i]);
      }
      ConeLpSolution sol = solve_conelp_reduced(red, settings);
      Eigen::VectorXd y_full = Eigen::VectorXd::Zero(p0);
      for (int i = 0; i < rank; ++i) y_full(keep[i]) = sol.y(i);
      sol.y = y_full;
      return sol;
    }
  }
  return solve_conelp_reduced(prob, settings);
}

namespace {

ConeLpSolution solve_conelp_reduced(const ConeLpProblem& prob,
                                    const ConeLpSettings& settings) {
  const int n = static_cast<int>(prob.c.size());
  const int p = static_cast<int>(prob.b.size());
  const BlockLayout L = make_layout(prob.dims);
  const int m = L.total;
  if (prob.G.rows() != m || prob.G.cols() != n)
    throw std::invalid_argument("conelp: G dimensions inconsistent with dims");
  if (prob.A.rows() != p || (p > 0 && prob.A.cols() != n))
    throw std::invalid_argument("conelp: A dimensions inconsistent");
  if (prob.h.size() != m) throw std::invalid_argument("conelp: h size");
  if (!prob.c.allFinite() || !prob.h.allFinite() || !prob.G.allFinite() ||
      (p > 0 && (!prob.A.allFinite() || !prob.b.allFinite())))
    throw std::invalid_argument("conelp: non-finite problem data");

  ConeLpSolution sol;
  const double nu = prob.dims.barrier_degree();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd s = cone_identity(L);
  Eigen::VectorXd z = s;
  double tau = 1.0, kappa = 1.0;

  const double norm_b = std::max(1.0, p > 0 ? prob.b.norm() : 0.0);
  const double norm_h = std::max(1.0, prob.h.norm());
  const double norm_c = std::max(1.0, prob.c.norm());

  const int kkt_dim = n + p + m;
  Eigen::MatrixXd K(kkt_dim, kkt_dim);
  auto fill_solution = [&](SolveStatus st) {
    sol.status = st;
    sol.x = x / tau;
    sol.y = y / tau;
    sol.z = z / tau;
    sol.s = s / tau;
    sol.obj = prob.c.dot(sol.x);
    sol.gap = sol.s.dot(sol.z);
  };

  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    sol.iterations = iter;
    // residuals of the homogeneous embedding
    Eigen::VectorXd rx = prob.G.transpose() * z + prob.c * tau;
    if (p > 0) rx += prob.A.transpose() * y;
    Eigen::VectorXd ry = p > 0 ? Eigen::VectorXd(prob.A * x - prob.b * tau)
                               : Eigen::VectorXd(0);
    Eigen::VectorXd rz = prob.G * x + s - prob.h * tau;
    const double by_hz = (p > 0 ? prob.b.dot(y) : 0.0) + prob.h.dot(z);
    const double rtau = prob.c.dot(x) + by_hz + kappa;
    const double gap = s.dot(z);
    const double mu = (gap + tau * kappa) / (nu + 1.0);

    // convergence checks on the scaled-back candidate
    const double pres =
        std::max(p > 0 ? ry.norm() / norm_b : 0.0, rz.norm() / norm_h) / tau;
    const double dres = rx.norm() / norm_c / tau;
    const double pcost = prob.c.dot(x) / tau;
    const double dcost = -by_hz / tau;
    const double relgap = gap / (tau * tau) /
                          std::max(1.0, std::min(std::abs(pcost), std::abs(dcost)));
    sol.primal_residual = pres;
    sol.dual_residual = dres;
    if (pres <= settings.tol_feas && dres <= settings.tol_feas &&
        relgap <= settings.tol_gap_rel) {
      fill_solution(SolveStatus::Optimal);
      return sol;
    }
    // certificates of infeasibility
    if (by_hz < 0) {
      Eigen::VectorXd atgz = prob.G.transpose() * z;
      if (p > 0) atgz += prob.A.transpose() * y;
      if (atgz.norm() / norm_c <= settings.tol_infeas * (-by_hz)) {
        sol.status = SolveStatus::PrimalInfeasible;
        sol.y = y / (-by_hz);
        sol.z = z / (-by_hz);
        sol.x.setZero(n);
        sol.s.setZero(m);
        return sol;
      }
    }
    if (prob.c.dot(x) < 0) {
      const double cx = -prob.c.dot(x);
      const double inf_res =
          std::max(p > 0 ? (prob.A * x).norm() / norm_b : 0.0,
                   (prob.G * x + s).norm() / norm_h);
      if (inf_res <= settings.tol_infeas * cx) {
        sol.status = SolveStatus::DualInfeasible;
        sol.x = x / cx;
        sol.s = s / cx;
        sol.y.setZero(p);
        sol.z.setZero(m);
        return sol;
      }
    }

    // accept a near-converged iterate when numerical progress stops
    auto stall_status = [&]() {
      const bool near = pres <= 100 * settings.tol_feas &&
                        dres <= 100 * settings.tol_feas &&
                        relgap <= 100 * settings.tol_gap_rel;
      return near ? SolveStatus::Optimal : SolveStatus::NumericalFailure;
    };

    Scaling W;
    try {
      W = compute_scaling(L, s, z);
    } catch (const std::runtime_error&) {
      fill_solution(stall_status());
      return sol;
    }
    Eigen::VectorXd lam = scaled_lambda(L, W);

    // KKT matrix [0 A' G'; A 0 0; G 0 -W'W]
    K.setZero();
    if (p > 0) {
      K.block(0, n, n, p) = prob.A.transpose();
      K.block(n, 0, p, n) = prob.A;
    }
    K.block(0, n + p, n, m) = prob.G.transpose();
    K.block(n + p, 0, m, n) = prob.G;
    {
      Eigen::MatrixXd WtW = Eigen::MatrixXd::Zero(m, m);
      WtW.topLeftCorner(L.nonneg, L.nonneg) =
          Eigen::MatrixXd((W.d.array().square()).matrix().asDiagonal());
      for (size_t bi = 0; bi < L.psd.size(); ++bi) {
        const int d = L.psd[bi] * (L.psd[bi] + 1) / 2;
        WtW.block(L.offset[bi], L.offset[bi], d, d) =
            skron(W.R[bi] * W.R[bi].transpose());
      }
      K.block(n + p, n + p, m, m) = -WtW;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);

    auto solve3 = [&](const Eigen::VectorXd& bx, const Eigen::VectorXd& by,
                      const Eigen::VectorXd& bz) {
      Eigen::VectorXd rhs(kkt_dim);
      rhs.head(n) = bx;
      rhs.segment(n, p) = by;
      rhs.tail(m) = bz;
      Eigen::VectorXd d = lu.solve(rhs);
      d += lu.solve(rhs - K * d);  // one round of refinement
      return d;
    };

    // solve with rhs (-c, b, h) for the tau column (shared by both passes)
    Eigen::VectorXd sol_t = solve3(-prob.c, prob.b, prob.h);

    Eigen::VectorXd ds_aff, dz_aff;
    double dtau_aff = 0.0, dkappa_aff = 0.0;
    double sigma = 0.0;
    Eigen::VectorXd dx, dy, dz, ds;
    double dtau = 0.0, dkappa = 0.0;

    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd d_compl;
      double d_taukappa;
      double rscale;
      if (pass == 0) {
        d_compl = -jordan(L, lam, lam);
        d_taukappa = -tau * kappa;
        rscale = 1.0;
      } else {
        Eigen::VectorXd corr =
            jordan(L, apply_Winvt(L, W, ds_aff), apply_W(L, W, dz_aff));
        d_compl = -jordan(L, lam, lam) + sigma * mu * cone_identity(L) - corr;
        d_taukappa = -tau * kappa + sigma * mu - dtau_aff * dkappa_aff;
        rscale = 1.0 - sigma;
      }

      Eigen::VectorXd bz =
          -rscale * rz - apply_Wt(L, W, jordan_solve_lambda(L, W, d_compl));
      Eigen::VectorXd sol_r = solve3(-rscale * rx, -rscale * ry, bz);

      const double denom = prob.c.dot(sol_t.head(n)) +
                           (p > 0 ? prob.b.dot(sol_t.segment(n, p)) : 0.0) +
                           prob.h.dot(sol_t.tail(m)) - kappa / tau;
      const double numer = -rscale * rtau - d_taukappa / tau -
                           (prob.c.dot(sol_r.head(n)) +
                            (p > 0 ? prob.b.dot(sol_r.segment(n, p)) : 0.0) +
                            prob.h.dot(sol_r.tail(m)));
      if (std::abs(denom) < 1e-300) {
        fill_solution(stall_status());
        return sol;
      }
      const double dt = numer / denom;
      dx = sol_r.head(n) + dt * sol_t.head(n);
      dy = sol_r.segment(n, p) + dt * sol_t.segment(n, p);
      dz = sol_r.tail(m) + dt * sol_t.tail(m);
      ds = apply_Wt(L, W, jordan_solve_lambda(L, W, d_compl)) -
           apply_Wt(L, W, apply_W(L, W, dz));
      dtau = dt;
      dkappa = (d_taukappa - kappa * dt) / tau;

      if (pass == 0) {
        double alpha = std::min(max_step(L, s, ds), max_step(L, z, dz));
        if (dtau < 0) alpha = std::min(alpha, -tau / dtau);
        if (dkappa < 0) alpha = std::min(alpha, -kappa / dkappa);
        alpha = std::min(1.0, settings.step_fraction * alpha);
        ds_aff = ds;
        dz_aff = dz;
        dtau_aff = dtau;
        dkappa_aff = dkappa;
        sigma = std::pow(1.0 - alpha, 3);
        sigma = std::min(1.0, std::max(0.0, sigma));
      }
    }

    double alpha = std::min(max_step(L, s, ds), max_step(L, z, dz));
    if (dtau < 0) alpha = std::min(alpha, -tau / dtau);
    if (dkappa < 0) alpha = std::min(alpha, -kappa / dkappa);
    alpha = std::min(1.0, settings.step_fraction * alpha);
    if (!std::isfinite(alpha) || alpha <= 1e-10) {
      fill_solution(stall_status());
      return sol;
    }

    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
  }

  fill_solution(SolveStatus::MaxIterations);
  return sol;
}

}  // namespace

double conelp_kkt_residual(const ConeLpProblem& prob, const ConeLpSolution& sol) {
  const BlockLayout L = make_layout(prob.dims);
  double r = 0.0;
  if (prob.b.size() > 0)
    r = std::max(r, (prob.A * sol.x - prob.b).lpNorm<Eigen::Infinity>());
  r = std::max(r, (prob.G * sol.x + sol.s - prob.h).lpNorm<Eigen::Infinity>());
  Eigen::VectorXd dual = prob.G.transpose() * sol.z + prob.c;
  if (prob.b.size() > 0) dual += prob.A.transpose() * sol.y;
  r = std::max(r, dual.lpNorm<Eigen::Infinity>());
  r = std::max(r, std::max(0.0, -min_cone_eig(L, sol.s)));
  r = std::max(r, std::max(0.0, -min_cone_eig(L, sol.z)));
  r = std::max(r, std::abs(sol.s.dot(sol.z)));
  return r;
}

void dump_conelp(const ConeLpProblem& prob, const std::string& path) {
  std::ofstream f(path);
  f.precision(17);
  f << "# conelp problem: n p m nonneg psd...\n";
  f << prob.c.size() << " " << prob.b.size() << " " << prob.h.size() << " "
    << prob.dims.nonneg;
  for (int k : prob.dims.psd) f << " " << k;
  f << "\n";
  auto put_vec = [&](const char* name, const Eigen::VectorXd& v) {
    f << name << "\n" << v.transpose() << "\n";
  };
  auto put_mat = [&](const char* name, const Eigen::MatrixXd& M) {
    f << name << "\n" << M << "\n";
  };
  put_vec("c", prob.c);
  put_mat("A", prob.A);
  put_vec("b", prob.b);
  put_mat("G", prob.G);
  put_vec("h", prob.h);
}

}  // namespace trayplan::solvers
