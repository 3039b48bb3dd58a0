#include "trayplan/contact.hpp"

#include <stdexcept>

#include "trayplan/polycone.hpp"
#include "trayplan/solvers/qp.hpp"

namespace trayplan {

ContactPoint make_contact_point(const Vec3& r, const Vec3& normal, double mu) {
  if (std::abs(normal.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("make_contact_point: normal must be unit");
  if (mu < 0.0) throw std::invalid_argument("make_contact_point: mu < 0");
  ContactPoint cp;
  cp.r = r;
  cp.normal = normal;
  cp.mu = mu;
  Vec3 t1 = Vec3::UnitX() - normal.x() * normal;
  if (t1.norm() < 1e-6) t1 = Vec3::UnitY() - normal.y() * normal;
  cp.t1 = t1.normalized();
  cp.t2 = normal.cross(cp.t1);
  return cp;
}

ComBox make_com_box(const Vec3& lo, const Vec3& hi) {
  ComBox box;
  for (int sx : {0, 1})
    for (int sy : {0, 1})
      for (int sz : {0, 1})
        box.vertices.push_back(Vec3(sx ? hi.x() : lo.x(), sy ? hi.y() : lo.y(),
                                    sz ? hi.z() : lo.z()));
  return box;
}

Eigen::Matrix<double, 5, 3> friction_face(const ContactPoint& cp) {
  Eigen::Matrix<double, 5, 3> base;
  base << 0, 0, -1,
          1, 1, -cp.mu,
          1, -1, -cp.mu,
          -1, 1, -cp.mu,
          -1, -1, -cp.mu;
  Eigen::Matrix3d T;
  T.col(0) = cp.t1;
  T.col(1) = cp.t2;
  T.col(2) = cp.normal;
  return base * T.transpose();
}

Eigen::Matrix<double, 6, 3> grasp_matrix(const ContactPoint& cp) {
  Eigen::Matrix<double, 6, 3> G;
  G.topRows<3>() = skew(cp.r);
  G.bottomRows<3>() = Mat3::Identity();
  return G;
}

Eigen::MatrixXd cwc_face(const ContactSet& cs) {
  if (cs.contacts.empty()) throw std::invalid_argument("cwc_face: no contacts");
  // F is block diagonal, so the span of the full friction cone is the union
  // of the per-contact spans mapped through the grasp matrices
  std::vector<Eigen::MatrixXd> wrench_rays;
  int total = 0;
  for (const ContactPoint& cp : cs.contacts) {
    SpanCone rays = face_to_span(FaceCone{friction_face(cp)});
    wrench_rays.push_back(grasp_matrix(cp) * rays.V);
    total += rays.num_rays();
  }
  Eigen::MatrixXd V(6, total);
  int col = 0;
  for (const Eigen::MatrixXd& W : wrench_rays) {
    V.middleCols(col, W.cols()) = W;
    col += static_cast<int>(W.cols());
  }
  for (int j = 0; j < V.cols(); ++j) {
    const double n = V.col(j).norm();
    if (n > 1e-12) V.col(j) /= n;
  }
  return span_to_face(SpanCone{V}).U;
}

ForceLpResult force_lp(const ContactSet& cs, const Wrench& w) {
  const int nc = cs.num_contacts();
  const int n = 3 * nc;
  solvers::LinearProgram lp;
  // minimize the total normal force to keep the LP bounded
  lp.c = Eigen::VectorXd::Zero(n);
  lp.Aeq = Eigen::MatrixXd::Zero(6, n);
  lp.beq = w.w;
  lp.Ain = Eigen::MatrixXd::Zero(5 * nc, n);
  lp.bin = Eigen::VectorXd::Zero(5 * nc);
  for (int i = 0; i < nc; ++i) {
    lp.c.segment<3>(3 * i) = cs.contacts[i].normal;
    lp.Aeq.middleCols<3>(3 * i) = grasp_matrix(cs.contacts[i]);
    lp.Ain.block<5, 3>(5 * i, 3 * i) = friction_face(cs.contacts[i]);
  }
  solvers::LpSolution sol = solvers::solve_lp(lp);
  ForceLpResult out;
  if (sol.status == solvers::SolveStatus::Optimal) {
    out.feasible = true;
    out.zeta = sol.x;
  } else if (sol.status == solvers::SolveStatus::PrimalInfeasible) {
    out.feasible = false;
  } else {
    throw std::runtime_error("force_lp: solver failed without certificate");
  }
  return out;
}

Mat3 uniform_cuboid_inertia(double m, const Vec3& s) {
  return (m / 12.0) *
         Vec3(s.y() * s.y() + s.z() * s.z(), s.x() * s.x() + s.z() * s.z(),
              s.x() * s.x() + s.y() * s.y())
             .asDiagonal()
             .toDenseMatrix();
}

std::vector<InertialParams> robust_vertex_params(const ComBox& box,
                                                 const Mat3& inertia_com) {
  std::vector<Vec3> unique;
  for (const Vec3& v : box.vertices) {
    bool dup = false;
    for (const Vec3& u : unique)
      if ((u - v).norm() <= 1e-12) { dup = true; break; }
    if (!dup) unique.push_back(v);
  }
  std::vector<InertialParams> out;
  out.reserve(unique.size());
  for (const Vec3& v : unique)
    out.push_back(InertialParams::from_com_inertia(1.0, v, inertia_com));
  return out;
}

std::vector<InertialParams> robust_vertex_params(const ComBox& box) {
  Vec3 lo = box.vertices.front(), hi = lo;
  for (const Vec3& v : box.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return robust_vertex_params(box, uniform_cuboid_inertia(1.0, hi - lo));
}

Eigen::MatrixXd sticking_margins(const Eigen::MatrixXd& H,
                                 const SpatialVelocity& xi,
                                 const SpatialAccelGrav& eta,
                                 const std::vector<InertialParams>& params) {
  if (H.cols() != 6)
    throw std::invalid_argument("sticking_margins: H must have 6 columns");
  const auto Y = regressor(xi, eta);
  Eigen::MatrixXd M(H.rows(), params.size());
  for (size_t j = 0; j < params.size(); ++j)
    M.col(j) = H * (Y * params[j].theta);
  return M;
}

}  // namespace trayplan
