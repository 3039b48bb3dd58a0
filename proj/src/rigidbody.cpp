#include "trayplan/rigidbody.hpp"

#include <stdexcept>

namespace trayplan {

namespace {

Eigen::Matrix<double, 6, 1> vech(const Mat3& M) {
  Eigen::Matrix<double, 6, 1> v;
  v << M(0, 0), M(0, 1), M(0, 2), M(1, 1), M(1, 2), M(2, 2);
  return v;
}

}  // namespace

Mat3 InertialParams::inertia() const {
  Mat3 I;
  I << theta(4), theta(5), theta(6),
       theta(5), theta(7), theta(8),
       theta(6), theta(8), theta(9);
  return I;
}

InertialParams InertialParams::from_parts(double m, const Vec3& c,
                                          const Mat3& inertia_origin) {
  InertialParams p;
  p.theta(0) = m;
  p.theta.segment<3>(1) = m * c;
  p.theta.segment<6>(4) = vech(0.5 * (inertia_origin + inertia_origin.transpose()));
  return p;
}

InertialParams InertialParams::from_com_inertia(double m, const Vec3& c,
                                                const Mat3& inertia_com) {
  const Mat3 shift = m * (c.squaredNorm() * Mat3::Identity() - c * c.transpose());
  return from_parts(m, c, inertia_com + shift);
}

Mat3 InertialParams::inertia_about_com() const {
  const Vec3 c = com();
  const Mat3 shift =
      mass() * (c.squaredNorm() * Mat3::Identity() - c * c.transpose());
  return inertia() - shift;
}

Mat3 skew(const Vec3& a) {
  Mat3 S;
  S << 0, -a.z(), a.y(),
       a.z(), 0, -a.x(),
       -a.y(), a.x(), 0;
  return S;
}

Mat6 adjoint(const SpatialVelocity& xi) {
  Mat6 ad = Mat6::Zero();
  ad.topLeftCorner<3, 3>() = skew(xi.angular());
  ad.bottomRightCorner<3, 3>() = skew(xi.angular());
  ad.bottomLeftCorner<3, 3>() = skew(xi.linear());
  return ad;
}

Mat6 spatial_mass_matrix(const InertialParams& params) {
  Mat6 Xi = Mat6::Zero();
  const Mat3 hx = skew(params.mass_times_com());
  Xi.topLeftCorner<3, 3>() = params.inertia();
  Xi.topRightCorner<3, 3>() = hx;
  Xi.bottomLeftCorner<3, 3>() = -hx;
  Xi.bottomRightCorner<3, 3>() = params.mass() * Mat3::Identity();
  return Xi;
}

Wrench giw(const InertialParams& params, const SpatialVelocity& xi,
           const SpatialAccelGrav& eta) {
  const Mat6 Xi = spatial_mass_matrix(params);
  Wrench w;
  w.w = Xi * eta.eta - adjoint(xi).transpose() * (Xi * xi.xi);
  return w;
}

Eigen::Matrix<double, 6, 10> regressor(const SpatialVelocity& xi,
                                       const SpatialAccelGrav& eta) {
  Eigen::Matrix<double, 6, 10> Y;
  for (int i = 0; i < 10; ++i) {
    InertialParams unit;
    unit.theta.setZero();
    unit.theta(i) = 1.0;
    Y.col(i) = giw(unit, xi, eta).w;
  }
  return Y;
}

InertialParams mass_normalize(const InertialParams& params) {
  if (!(params.mass() > 0.0))
    throw std::domain_error("mass_normalize: mass must be positive");
  InertialParams out;
  out.theta = params.theta / params.mass();
  return out;
}

InertialParams params_from_point_masses(const std::vector<PointMass>& points) {
  double m = 0.0;
  Vec3 mc = Vec3::Zero();
  Mat3 I = Mat3::Zero();
  for (const auto& pm : points) {
    if (pm.mass < 0.0)
      throw std::domain_error("params_from_point_masses: negative mass");
    m += pm.mass;
    mc += pm.mass * pm.position;
    I += pm.mass * (pm.position.squaredNorm() * Mat3::Identity() -
                    pm.position * pm.position.transpose());
  }
  if (!(m > 0.0))
    throw std::domain_error("params_from_point_masses: total mass is zero");
  InertialParams p;
  p.theta(0) = m;
  p.theta.segment<3>(1) = mc;
  p.theta(4) = I(0, 0);
  p.theta(5) = I(0, 1);
  p.theta(6) = I(0, 2);
  p.theta(7) = I(1, 1);
  p.theta(8) = I(1, 2);
  p.theta(9) = I(2, 2);
  return p;
}

}  // namespace trayplan
