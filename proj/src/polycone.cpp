#include "trayplan/polycone.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "trayplan/solvers/qp.hpp"

namespace trayplan {

namespace {

constexpr double kTol = 1e-9;

// One ray of the intermediate pointed cone together with the set of inserted
// halfspaces it is active on (|u_i . r| <= tol).
struct DDRay {
  Eigen::VectorXd r;
  std::vector<bool> active;
};

bool subset(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

// Combinatorial adjacency: rays p and q are adjacent iff no third ray is
// active on every halfspace both p and q are active on.
bool adjacent(const std::vector<DDRay>& rays, size_t p, size_t q) {
  std::vector<bool> common(rays[p].active.size());
  for (size_t i = 0; i < common.size(); ++i)
    common[i] = rays[p].active[i] && rays[q].active[i];
  for (size_t k = 0; k < rays.size(); ++k) {
    if (k == p || k == q) continue;
    if (subset(common, rays[k].active)) return false;
  }
  return true;
}

std::vector<bool> activity(const Eigen::MatrixXd& U,
                           const std::vector<int>& order, size_t count,
                           const Eigen::VectorXd& r) {
  std::vector<bool> act(count);
  for (size_t i = 0; i < count; ++i)
    act[i] = std::abs(U.row(order[i]).dot(r)) <= kTol;
  return act;
}

// Double description for a pointed cone {w | U w <= 0} (U has full column
// rank). Returns unnormalized extreme rays.
std::vector<Eigen::VectorXd> pointed_dd(const Eigen::MatrixXd& U) {
  const int d = static_cast<int>(U.cols());
  const int m = static_cast<int>(U.rows());

  // pick d linearly independent rows for the initial simplicial cone
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(U.transpose());
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = qr.colsPermutation().indices()(i);

  Eigen::MatrixXd B(d, d);
  for (int i = 0; i < d; ++i) B.row(i) = U.row(order[i]);
  Eigen::MatrixXd Rinit = -B.partialPivLu().solve(Eigen::MatrixXd::Identity(d, d));

  std::vector<DDRay> rays;
  for (int j = 0; j < d; ++j) {
    DDRay ray;
    ray.r = Rinit.col(j).normalized();
    ray.active = activity(U, order, d, ray.r);
    rays.push_back(std::move(ray));
  }

  for (int step = d; step < m; ++step) {
    const Eigen::RowVectorXd u = U.row(order[step]);
    std::vector<size_t> pos, neg;
    std::vector<double> val(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) {
      val[i] = u.dot(rays[i].r);
      if (val[i] > kTol)
        pos.push_back(i);
      else if (val[i] < -kTol)
        neg.push_back(i);
    }

    std::vector<DDRay> next;
    for (size_t i = 0; i < rays.size(); ++i) {
      if (val[i] > kTol) continue;
      DDRay kept = rays[i];
      kept.active.push_back(std::abs(val[i]) <= kTol);
      next.push_back(std::move(kept));
    }
    for (size_t p : pos) {
      for (size_t q : neg) {
        if (!adjacent(rays, p, q)) continue;
        Eigen::VectorXd r = val[p] * rays[q].r - val[q] * rays[p].r;
        const double norm = r.norm();
        if (norm <= kTol) continue;
        r /= norm;
        bool dup = false;
        for (const DDRay& existing : next)
          if (existing.r.dot(r) > 1.0 - kTol) { dup = true; break; }
        if (dup) continue;
        DDRay fresh;
        fresh.r = r;
        fresh.active = activity(U, order, step + 1, r);
        next.push_back(std::move(fresh));
      }
    }
    rays = std::move(next);
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(rays.size());
  for (DDRay& ray : rays) out.push_back(std::move(ray.r));
  return out;
}

Eigen::MatrixXd dedupe_columns(const Eigen::MatrixXd& V) {
  std::vector<int> keep;
  for (int j = 0; j < V.cols(); ++j) {
    bool dup = false;
    for (int k : keep)
      if (V.col(k).dot(V.col(j)) > 1.0 - kTol) { dup = true; break; }
    if (!dup) keep.push_back(j);
  }
  Eigen::MatrixXd out(V.rows(), keep.size());
  for (size_t j = 0; j < keep.size(); ++j) out.col(j) = V.col(keep[j]);
  return out;
}

}  // namespace

SpanCone face_to_span(const FaceCone& face) {
  if (!face.U.allFinite())
    throw std::invalid_argument("face_to_span: non-finite input");
  const int n = face.dim();
  if (n < 1) throw std::invalid_argument("face_to_span: dim must be >= 1");

  // split off the lineality space (the nullspace of U)
  Eigen::MatrixXd N(n, 0), B = Eigen::MatrixXd::Identity(n, n);
  int rank = 0;
  if (face.U.rows() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(face.U, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = kTol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    B = svd.matrixV().leftCols(rank);
    N = svd.matrixV().rightCols(n - rank);
  } else {
    N = B;
    B.resize(n, 0);
  }

  std::vector<Eigen::VectorXd> rays;
  if (rank > 0) {
    for (const Eigen::VectorXd& r : pointed_dd(face.U * B))
      rays.push_back(B * r);
  }
  for (int j = 0; j < N.cols(); ++j) {
    rays.push_back(N.col(j));
    rays.push_back(-N.col(j));
  }

  Eigen::MatrixXd V(n, rays.size());
  for (size_t j = 0; j < rays.size(); ++j) V.col(j) = rays[j].normalized();
  return SpanCone{dedupe_columns(V)};
}

FaceCone span_to_face(const SpanCone& span) {
  if (!span.V.allFinite())
    throw std::invalid_argument("span_to_face: non-finite input");
  const int n = span.dim();
  if (span.num_rays() == 0) {
    Eigen::MatrixXd U(2 * n, n);
    U << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
    return FaceCone{U};
  }
  // polarity: the rows of U are the rays of {u | V' u <= 0}
  SpanCone polar = face_to_span(FaceCone{span.V.transpose()});
  return FaceCone{polar.V.transpose()};
}

Eigen::VectorXd cone_margins(const FaceCone& face, const Eigen::VectorXd& y) {
  if (y.size() != face.U.cols())
    throw std::invalid_argument("cone_margins: dimension mismatch");
  return face.U * y;
}

FaceCone canonicalize(const FaceCone& face) {
  const int n = face.dim();
  // drop zero rows, rescale, drop duplicates
  std::vector<Eigen::RowVectorXd> rows;
  for (int i = 0; i < face.U.rows(); ++i) {
    const double norm = face.U.row(i).norm();
    if (norm <= kTol) continue;
    Eigen::RowVectorXd r = face.U.row(i) / norm;
    bool dup = false;
    for (const auto& kept : rows)
      if (kept.dot(r) > 1.0 - kTol) { dup = true; break; }
    if (!dup) rows.push_back(std::move(r));
  }

  // LP redundancy: row i is redundant iff max u_i.y over the remaining rows
  // (with u_i.y <= 1 to bound the problem) stays <= 0
  for (size_t i = 0; i < rows.size();) {
    solvers::LinearProgram lp;
    lp.c = -rows[i].transpose();
    lp.Ain.resize(rows.size(), n);
    lp.bin = Eigen::VectorXd::Zero(rows.size());
    int k = 0;
    for (size_t j = 0; j < rows.size(); ++j)
      if (j != i) lp.Ain.row(k++) = rows[j];
    lp.Ain.row(k) = rows[i];
    lp.bin(k) = 1.0;
    solvers::LpSolution sol = solvers::solve_lp(lp);
    const bool redundant =
        sol.status == solvers::SolveStatus::Optimal && -sol.obj <= kTol;
    if (redundant)
      rows.erase(rows.begin() + static_cast<long>(i));
    else
      ++i;
  }

  Eigen::MatrixXd U(rows.size(), n);
  for (size_t i = 0; i < rows.size(); ++i) U.row(i) = rows[i];
  return FaceCone{U};
}

}  // namespace trayplan
