#pragma once

#include <Eigen/Dense>
#include <vector>

namespace trayplan {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Inertial parameters theta = [m, m*c, vech(I)] with I the inertia matrix
/// about the reference-frame origin (the EE frame). vech order:
/// Ixx, Ixy, Ixz, Iyy, Iyz, Izz.
struct InertialParams {
  Vec10 theta = Vec10::Zero();

  double mass() const { return theta(0); }
  Vec3 mass_times_com() const { return theta.segment<3>(1); }
  Vec3 com() const { return theta.segment<3>(1) / theta(0); }
  Mat3 inertia() const;  // about the frame origin

  static InertialParams from_parts(double m, const Vec3& c, const Mat3& inertia_origin);
  /// Builds from a CoM-centered inertia using the parallel-axis theorem.
  static InertialParams from_com_inertia(double m, const Vec3& c, const Mat3& inertia_com);
  Mat3 inertia_about_com() const;
};

/// Spatial velocity xi = [omega, v] in the EE frame.
struct SpatialVelocity {
  Vec6 xi = Vec6::Zero();
  Vec3 angular() const { return xi.head<3>(); }
  Vec3 linear() const { return xi.tail<3>(); }
};

/// eta = [omega_dot, v_dot - g] in the EE frame.
struct SpatialAccelGrav {
  Vec6 eta = Vec6::Zero();
};

/// Wrench w = [torque, force] about the EE frame origin.
struct Wrench {
  Vec6 w = Vec6::Zero();
  Vec3 torque() const { return w.head<3>(); }
  Vec3 force() const { return w.tail<3>(); }
};

Mat3 skew(const Vec3& a);

/// ad(xi) = [[omega^, 0], [v^, omega^]]
Mat6 adjoint(const SpatialVelocity& xi);

/// Xi = [[I, (mc)^], [-(mc)^, m 1]]
Mat6 spatial_mass_matrix(const InertialParams& params);

/// Gravito-inertial wrench w = Xi eta - ad(xi)' Xi xi.
Wrench giw(const InertialParams& params, const SpatialVelocity& xi,
           const SpatialAccelGrav& eta);

/// 6x10 regressor with Y(xi, eta) theta == giw(theta, xi, eta) for all theta.
/// Built by probing the wrench map with unit parameter vectors.
Eigen::Matrix<double, 6, 10> regressor(const SpatialVelocity& xi,
                                       const SpatialAccelGrav& eta);

/// theta / m. Throws std::domain_error on m <= 0.
InertialParams mass_normalize(const InertialParams& params);

struct PointMass {
  double mass;
  Vec3 position;
};

/// Aggregates point masses into inertial parameters about the frame origin.
/// Throws std::domain_error if the total mass is zero or any mass negative.
InertialParams params_from_point_masses(const std::vector<PointMass>& points);

}  // namespace trayplan
