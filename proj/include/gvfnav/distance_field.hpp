#ifndef GVFNAV_DISTANCE_FIELD_HPP
#define GVFNAV_DISTANCE_FIELD_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gvfnav/voxel_grid.hpp"

namespace gvfnav {

// Per-cell Euclidean distance (meters) to the nearest occupied cell center
// of the source grid. Immutable after construction; concurrent reads safe.
class DistanceField {
public:
  DistanceField(const GridGeometry& geometry, std::vector<double> values);

  const GridGeometry& geometry() const { return geom_; }
  double resolution() const { return geom_.resolution; }

  double at(const Eigen::Vector3i& c) const { return values_[geom_.linear(c)]; }
  const std::vector<double>& values() const { return values_; }

  // True when p is inside the metric bounds with at least a one-cell margin,
  // the domain where trilinear interpolation is defined.
  bool sampleable(const Eigen::Vector3d& p) const;

  // Clamp p into the sampleable interior (plus the quadratic-fit window
  // margin when requested), for callers that must not throw.
  Eigen::Vector3d clamp_to_interior(const Eigen::Vector3d& p, int margin_cells = 1) const;

private:
  GridGeometry geom_;
  std::vector<double> values_;
};

// Exact Euclidean distance transform via the separable three-pass
// lower-envelope method (no chamfer approximation). Each output cell holds
// the exact distance in meters from its center to the nearest occupied cell
// center. Throws AllFreeError when the grid has no occupied cell.
DistanceField euclidean_distance_transform(const VoxelGrid& grid);

// Trilinear interpolation of the 8 surrounding cell values.
// Throws OutOfBoundsError outside the one-cell-margin interior.
double sample_distance(const DistanceField& field, const Eigen::Vector3d& p);

// Value plus the exact gradient of the trilinear interpolant (piecewise
// smooth; the derivative the optimizer's finite-difference checks see).
struct SampleWithGradient {
  double value;
  Eigen::Vector3d gradient;
};
SampleWithGradient sample_distance_with_gradient(const DistanceField& field,
                                                 const Eigen::Vector3d& p);

// Local quadratic model of the field around a query point:
//   U(p+d) ~ t0 + t1 dx + t2 dy + t3 dz + t4 dx^2/2 + t5 dx dy + t6 dx dz
//            + t7 dy^2/2 + t8 dy dz + t9 dz^2/2
// with displacements d in meters from the query point.
struct GradientFit {
  Eigen::Matrix<double, 10, 1> theta;
  Eigen::Vector3d center;
  int window_radius;  // cells

  Eigen::Vector3d gradient() const { return theta.segment<3>(1); }
};

// Least-squares fit over the cell centers of a (2r+1)^3 window centered on
// the query's cell (default r = 2). A window clipped by the bounds shrinks
// once to r = 1; still clipped throws OutOfBoundsError. Rank loss throws
// NumericalDegeneracyError (cannot occur on a full box window).
GradientFit fit_quadratic(const DistanceField& field, const Eigen::Vector3d& p,
                          int window_radius = 2);

// Gradient estimate (theta1, theta2, theta3) of the local quadratic fit.
Eigen::Vector3d fit_gradient(const DistanceField& field, const Eigen::Vector3d& p,
                             int window_radius = 2);

// Binary dump: little-endian header (3x u32 dims, f64 resolution,
// 3x f64 origin) followed by row-major f64 values.
void save_field(const DistanceField& field, const std::string& path);
DistanceField load_field(const std::string& path);

// CSV slice (x, y, value) at the layer containing height z, for plotting.
// spacing > 0 resamples the layer trilinearly on that pitch; spacing 0
// dumps the native cell centers.
void export_field_slice_csv(const DistanceField& field, double z, const std::string& path,
                            double spacing = 0.0);

}  // namespace gvfnav

#endif  // GVFNAV_DISTANCE_FIELD_HPP
