#ifndef GVFNAV_VOXEL_GRID_HPP
#define GVFNAV_VOXEL_GRID_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace gvfnav {

// Axis-aligned lattice placement shared by occupancy grids and distance
// fields: metric origin (min corner), cell edge length, cell counts.
struct GridGeometry {
  Eigen::Vector3d origin{0.0, 0.0, 0.0};
  double resolution{0.1};
  Eigen::Vector3i dims{3, 3, 3};

  int num_cells() const { return dims.x() * dims.y() * dims.z(); }

  // Row-major with z fastest; matches the binary dump layout.
  int linear(const Eigen::Vector3i& c) const {
    return (c.x() * dims.y() + c.y()) * dims.z() + c.z();
  }

  bool in_bounds(const Eigen::Vector3i& c) const {
    return c.x() >= 0 && c.y() >= 0 && c.z() >= 0 && c.x() < dims.x() && c.y() < dims.y() &&
           c.z() < dims.z();
  }

  Eigen::Vector3d cell_center(const Eigen::Vector3i& c) const {
    return origin + resolution * (c.cast<double>() + Eigen::Vector3d::Constant(0.5));
  }

  // Cell containing p; out-of-range points map to out-of-range indices.
  Eigen::Vector3i cell_of(const Eigen::Vector3d& p) const {
    const Eigen::Vector3d g = (p - origin) / resolution;
    return Eigen::Vector3i(static_cast<int>(std::floor(g.x())), static_cast<int>(std::floor(g.y())),
                           static_cast<int>(std::floor(g.z())));
  }

  Eigen::Vector3d metric_min() const { return origin; }
  Eigen::Vector3d metric_max() const { return origin + resolution * dims.cast<double>(); }

  bool contains_point(const Eigen::Vector3d& p) const {
    const Eigen::Vector3d lo = metric_min();
    const Eigen::Vector3d hi = metric_max();
    return p.x() >= lo.x() && p.y() >= lo.y() && p.z() >= lo.z() && p.x() < hi.x() &&
           p.y() < hi.y() && p.z() < hi.z();
  }
};

// 3D occupancy lattice. Immutable geometry; occupancy mutates under
// exclusive access only (concurrent reads are safe).
class VoxelGrid {
public:
  VoxelGrid(const Eigen::Vector3d& origin, double resolution, const Eigen::Vector3i& dims);
  explicit VoxelGrid(const GridGeometry& geometry);

  const GridGeometry& geometry() const { return geom_; }
  double resolution() const { return geom_.resolution; }
  const Eigen::Vector3i& dims() const { return geom_.dims; }

  bool occupied(const Eigen::Vector3i& c) const { return occupancy_[geom_.linear(c)] != 0; }
  void set_occupied(const Eigen::Vector3i& c, bool value = true) {
    occupancy_[geom_.linear(c)] = value ? 1 : 0;
  }

  const std::vector<uint8_t>& occupancy() const { return occupancy_; }
  std::vector<uint8_t>& occupancy() { return occupancy_; }

  int occupied_count() const;
  bool any_occupied() const;

private:
  GridGeometry geom_;
  std::vector<uint8_t> occupancy_;
};

// Marks every cell containing a path point plus every cell crossed by the
// segments between consecutive points (3D digital line traversal), so sparse
// sampling cannot leave gaps in the occupied set.
// Throws OutOfBoundsError naming the first offending point index.
VoxelGrid rasterize_path(const std::vector<Eigen::Vector3d>& points, const GridGeometry& geometry);

// Cells crossed by the segment [a, b], endpoints included. Both endpoints
// must be inside the geometry.
std::vector<Eigen::Vector3i> traverse_segment(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                              const GridGeometry& geometry);

// Sub-grid covering the metric box [box_min, box_max], snapped to the parent
// cell lattice and clamped to the parent extent, at least 3 cells per axis.
// Cell centers of the crop coincide with parent cell centers.
VoxelGrid crop(const VoxelGrid& grid, const Eigen::Vector3d& box_min,
               const Eigen::Vector3d& box_max);

}  // namespace gvfnav

#endif  // GVFNAV_VOXEL_GRID_HPP
