#pragma once

#include <Eigen/Dense>

namespace trayplan {

/// Polyhedral convex cone in face (halfspace) form: {y | U y <= 0}.
struct FaceCone {
  Eigen::MatrixXd U;
  int dim() const { return static_cast<int>(U.cols()); }
};

/// Polyhedral convex cone in span form: {V z | z >= 0}. Rays are stored as
/// unit-norm columns; lineality appears as pairs of opposite rays.
struct SpanCone {
  Eigen::MatrixXd V;
  int dim() const { return static_cast<int>(V.rows()); }
  int num_rays() const { return static_cast<int>(V.cols()); }
};

/// Double description conversion. The cone {0} yields an empty ray set.
/// Throws std::invalid_argument on non-finite input.
SpanCone face_to_span(const FaceCone& face);

/// Inverse conversion via polarity: the rows of the result are the rays of
/// the polar cone. A full-space input yields a zero-row U.
FaceCone span_to_face(const SpanCone& span);

/// Returns U y. y is in the cone iff the max entry is <= 0.
Eigen::VectorXd cone_margins(const FaceCone& face, const Eigen::VectorXd& y);

/// Removes zero, duplicate, and LP-redundant rows; rows are rescaled to unit
/// norm. The described cone is unchanged.
FaceCone canonicalize(const FaceCone& face);

}  // namespace trayplan
