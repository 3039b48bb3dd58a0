#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trayplan/contact.hpp"
#include "trayplan/rigidbody.hpp"
#include "trayplan/solvers/sdp.hpp"

namespace trayplan {

/// Monomials in r = (r1, r2, r3) of total degree <= d, graded lexicographic:
/// 1, r1, r2, r3, r1^2, r1 r2, r1 r3, r2^2, r2 r3, r3^2, ...
class MonomialBasis {
 public:
  explicit MonomialBasis(int d);

  int degree() const { return d_; }
  int size() const { return static_cast<int>(exps_.size()); }
  static int size_of(int d) { return (d + 1) * (d + 2) * (d + 3) / 6; }

  const std::vector<std::array<int, 3>>& exponents() const { return exps_; }
  int index(const std::array<int, 3>& a) const;  // -1 if absent
  Eigen::VectorXd eval(const Vec3& r) const;     // b_d(r)

 private:
  int d_;
  std::vector<std::array<int, 3>> exps_;
  std::map<std::array<int, 3>, int> lookup_;
};

/// Moments y_alpha = integral of r^alpha, indexed by MonomialBasis(deg).
struct TruncatedMomentSequence {
  int deg = 0;
  Eigen::VectorXd y;
  double mass() const { return y(0); }
};

/// Moments of a finite atomic measure (Dirac mixture); the test oracle and a
/// convenient way to build realizable sequences.
TruncatedMomentSequence tms_from_point_masses(const std::vector<PointMass>& points,
                                              int deg);

/// Compact semialgebraic bounding shape {r | p_j(r) >= 0}. Each polynomial is
/// a coefficient vector over MonomialBasis(1) or MonomialBasis(2).
struct BoundingShape {
  std::vector<Eigen::VectorXd> polys;

  /// Halfspaces a_j . r <= b_j become p_j = b_j - a_j . r.
  static BoundingShape from_halfspaces(const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& b);
  static BoundingShape box(const Vec3& lo, const Vec3& hi);

  bool contains(const Vec3& r, double tol = 1e-9) const;
  /// Checks the witness is inside and, for purely degree-1 shapes, that the
  /// polyhedron is bounded (via support LPs). Throws std::invalid_argument.
  void validate(const Vec3& witness) const;
  /// Radius bound: |r| <= R for all r in the shape (degree-1 shapes only).
  double bounding_radius() const;
};

/// Riesz functional L_z(f) = sum_alpha f_alpha z_alpha. f is a coefficient
/// vector over MonomialBasis(k); throws if k exceeds the coverage of z.
double riesz(const Eigen::VectorXd& f, const TruncatedMomentSequence& z);

/// M_d(y), entry (alpha, beta) = y_{alpha+beta}. Requires y.deg >= 2d.
Eigen::MatrixXd moment_matrix(const TruncatedMomentSequence& y, int d);

/// M_d(p y), entry (alpha, beta) = L_y(p r^{alpha+beta}).
/// Requires y.deg >= 2d + deg(p).
Eigen::MatrixXd localizing_matrix(const Eigen::VectorXd& p,
                                  const TruncatedMomentSequence& y, int d);

/// Degree-2 TMS of the parameters: y0 = m, degree-1 = mc, degree-2 entries
/// form S = (1/2) tr(I) 1 - I.
TruncatedMomentSequence params_to_tms(const InertialParams& params);

/// Inverse map: I = tr(S) 1 - S.
InertialParams tms_to_params(const TruncatedMomentSequence& y);

/// Feasibility SDP for physical realizability at relaxation order r: extend y
/// (fixed through degree 2) to degree 2r with M_{r-v_j}(p_j y~) PSD for
/// j = 0..n_p.
solvers::SdpProblem realizability_conditions(const TruncatedMomentSequence& y,
                                             const BoundingShape& shape, int r);

struct ViolationBound {
  double value = 0.0;
  InertialParams theta;  // maximizer of the relaxation (m = 1)
};

/// Upper bound on max over realizable theta (m = 1, CoM in com_set, density
/// supported in shape) of h' Y theta, via the order-r moment relaxation.
/// Throws std::logic_error if the SDP is unbounded (non-compact shape) and
/// std::runtime_error on solver failure.
ViolationBound max_violation_sdp(const Vec6& h,
                                 const Eigen::Matrix<double, 6, 10>& Y,
                                 const BoundingShape& shape,
                                 const ComBox& com_set, int r = 2,
                                 const solvers::ConeLpSettings& settings = {});

struct VerifyReport {
  struct Entry {
    double t;
    int row;
    double bound;
  };
  std::vector<Entry> entries;          // one per (time, H-row)
  std::vector<double> times;
  std::vector<double> per_time_max;    // max bound over rows at each time
  double max_bound = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::pair<double, int>> failures;  // (time, row) solver failures
};

/// Solves the max-violation SDP for every (sample instant, H row) pair,
/// fanning the independent solves across threads (0 = hardware concurrency).
VerifyReport verify_instants(const std::vector<double>& times,
                             const std::vector<SpatialVelocity>& xis,
                             const std::vector<SpatialAccelGrav>& etas,
                             const Eigen::MatrixXd& H,
                             const BoundingShape& shape, const ComBox& com_set,
                             int r = 2, int num_threads = 0);

/// CSV rows (t, row, bound) followed by a summary line with the global max.
void write_verify_csv(const VerifyReport& report, const std::string& path);

}  // namespace trayplan
