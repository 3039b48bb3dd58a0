#pragma once

#include <vector>

#include "trayplan/rigidbody.hpp"

namespace trayplan {

/// A point contact in the EE frame with a linearized friction cone.
struct ContactPoint {
  Vec3 r = Vec3::Zero();      // contact position
  Vec3 normal = Vec3::UnitZ();
  Vec3 t1 = Vec3::UnitX();    // tangents, orthonormal right-handed with normal
  Vec3 t2 = Vec3::UnitY();
  double mu = 0.0;
};

/// Builds a contact with deterministic tangents: t1 is the normalized
/// projection of the EE x-axis onto the contact plane (y-axis if degenerate),
/// t2 = normal x t1. Throws std::invalid_argument on a non-unit normal or
/// negative mu.
ContactPoint make_contact_point(const Vec3& r, const Vec3& normal, double mu);

struct ContactSet {
  std::vector<ContactPoint> contacts;
  int num_contacts() const { return static_cast<int>(contacts.size()); }
};

/// Polyhedral CoM uncertainty set given by its extreme points.
struct ComBox {
  std::vector<Vec3> vertices;
};

/// Axis-aligned box spanned by [lo, hi], as the 8 corner vertices.
ComBox make_com_box(const Vec3& lo, const Vec3& hi);

/// The 5-row linearized friction cone matrix in world coordinates:
/// rows [0,0,-1; 1,1,-mu; 1,-1,-mu; -1,1,-mu; -1,-1,-mu] * [t1 t2 n]'.
Eigen::Matrix<double, 5, 3> friction_face(const ContactPoint& cp);

/// G_i with G_i f = [r x f; f] (torque about the EE origin, then force).
Eigen::Matrix<double, 6, 3> grasp_matrix(const ContactPoint& cp);

/// Face form H of the contact wrench cone {G zeta | F zeta <= 0}:
/// the wrench w is realizable by admissible contact forces iff H w <= 0.
Eigen::MatrixXd cwc_face(const ContactSet& cs);

struct ForceLpResult {
  bool feasible = false;
  Eigen::VectorXd zeta;  // stacked contact forces when feasible
};

/// Finds contact forces with G zeta = w and F zeta <= 0 (minimizing the total
/// normal force), or reports infeasibility. Throws std::runtime_error if the
/// LP solver fails without a certificate.
ForceLpResult force_lp(const ContactSet& cs, const Wrench& w);

/// Uniform-density inertia of a solid cuboid with the given side lengths,
/// about its center of mass.
Mat3 uniform_cuboid_inertia(double m, const Vec3& side_lengths);

/// Mass-normalized parameter vectors for the vertex objects: m = 1, CoM at
/// each distinct vertex, and the given CoM-centered inertia translated by the
/// parallel-axis theorem.
std::vector<InertialParams> robust_vertex_params(const ComBox& box,
                                                 const Mat3& inertia_com);

/// Default inertia policy: uniform-density inertia of the axis-aligned
/// bounding box of the vertices.
std::vector<InertialParams> robust_vertex_params(const ComBox& box);

/// Entry (i, j) = h_i' Y(xi, eta) theta_j. Robust sticking holds at this
/// instant iff the max entry is <= 0.
Eigen::MatrixXd sticking_margins(const Eigen::MatrixXd& H,
                                 const SpatialVelocity& xi,
                                 const SpatialAccelGrav& eta,
                                 const std::vector<InertialParams>& params);

}  // namespace trayplan
