#ifndef GVFNAV_GUIDING_FIELD_HPP
#define GVFNAV_GUIDING_FIELD_HPP

#include <optional>
#include <string>

#include "gvfnav/bspline.hpp"
#include "gvfnav/distance_field.hpp"

namespace gvfnav {

struct GuidingFieldParams {
  double k1 = 1.5;          // tangential (aggregation) gain
  double k2 = 1.5;          // normal (dispersion) gain
  double r = 1.0;           // convergence bandwidth, meters
  double resolution = 0.1;  // field grid resolution, meters
  double margin = 2.0;      // box margin around the path; raised to >= r
};

// Guiding vector field around a discretized reference path: a distance
// field induced by the path cells supplies the normal direction, chords of
// neighboring path points the tangential one, and tanh(d/r) blends them.
// Immutable once built; queries are pure and safe to run concurrently.
class GuidingField {
public:
  GuidingField(PathPoints path, DistanceField u_field, GuidingFieldParams params);

  const PathPoints& path() const { return path_; }
  const DistanceField& u_field() const { return u_field_; }
  const GuidingFieldParams& params() const { return params_; }

private:
  PathPoints path_;
  DistanceField u_field_;
  GuidingFieldParams params_;
};

// Rasterizes the path into a grid covering it with `margin` on every side,
// runs the distance transform, and wraps the result. The path must have at
// least three distinct points.
GuidingField build_guiding_field(const PathPoints& path, const GuidingFieldParams& params = {});

// Index of the path point closest to xi; ties go to the larger index so
// progress along the path is favored.
int nearest_index(const GuidingField& field, const Eigen::Vector3d& xi);

// Normalized chord sum around the nearest path point; the first and last
// point use their adjacent triple. Throws DegenerateTangentError when the
// chord sum collapses (near-reversing path), which deduplication prevents
// for sampled splines.
Eigen::Vector3d tangent(const GuidingField& field, const Eigen::Vector3d& xi);

// Unit direction toward the path: -grad U normalized, gradient from the
// local quadratic fit. Returns nullopt within the on-path degeneracy zone
// (gradient norm < 1e-6), where the distance field is not differentiable.
std::optional<Eigen::Vector3d> normal(const GuidingField& field, const Eigen::Vector3d& xi);

// Saturating distance shaping tanh(d / r), in [0, 1).
double shape(double d, double r);

// The guiding vector K1 * tangent + K2 * shape(d) * normal, with the
// normal term dropped inside the degeneracy zone.
Eigen::Vector3d guide(const GuidingField& field, const Eigen::Vector3d& xi);

// Exact distance from p to the piecewise-linear path (point-to-segment,
// not point-to-vertex) — the ground-truth deviation metric for logs.
double distance_to_polyline(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& p);

// CSV slice (x, y, chi_x, chi_y, d) over the field's sampleable extent at
// the given height and spacing.
void export_guide_slice_csv(const GuidingField& field, double z, double spacing,
                            const std::string& path);

}  // namespace gvfnav

#endif  // GVFNAV_GUIDING_FIELD_HPP
