#include "gvfnav/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gvfnav/errors.hpp"

namespace gvfnav {

VoxelGrid::VoxelGrid(const Eigen::Vector3d& origin, double resolution, const Eigen::Vector3i& dims)
    : VoxelGrid(GridGeometry{origin, resolution, dims}) {}

VoxelGrid::VoxelGrid(const GridGeometry& geometry) : geom_(geometry) {
  if (geom_.resolution <= 0.0) {
    throw std::invalid_argument("VoxelGrid: resolution must be positive");
  }
  if (geom_.dims.minCoeff() < 3) {
    throw std::invalid_argument("VoxelGrid: dims must be at least 3 per axis");
  }
  occupancy_.assign(static_cast<size_t>(geom_.num_cells()), 0);
}

int VoxelGrid::occupied_count() const {
  return static_cast<int>(std::count(occupancy_.begin(), occupancy_.end(), uint8_t{1}));
}

bool VoxelGrid::any_occupied() const {
  return std::find(occupancy_.begin(), occupancy_.end(), uint8_t{1}) != occupancy_.end();
}

std::vector<Eigen::Vector3i> traverse_segment(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                              const GridGeometry& geometry) {
  // Amanatides-Woo style voxel walk. Steps one axis at a time toward the
  // cell of b, picking the axis whose boundary is crossed first.
  std::vector<Eigen::Vector3i> cells;
  Eigen::Vector3i cur = geometry.cell_of(a);
  const Eigen::Vector3i end = geometry.cell_of(b);
  cells.push_back(cur);
  if (cur == end) {
    return cells;
  }

  const Eigen::Vector3d dir = b - a;
  Eigen::Vector3i step;
  Eigen::Vector3d t_max;   // parameter of next boundary crossing per axis
  Eigen::Vector3d t_delta; // parameter advance per cell per axis
  for (int ax = 0; ax < 3; ++ax) {
    if (dir[ax] > 0.0) {
      step[ax] = 1;
      const double boundary = geometry.origin[ax] + (cur[ax] + 1) * geometry.resolution;
      t_max[ax] = (boundary - a[ax]) / dir[ax];
      t_delta[ax] = geometry.resolution / dir[ax];
    } else if (dir[ax] < 0.0) {
      step[ax] = -1;
      const double boundary = geometry.origin[ax] + cur[ax] * geometry.resolution;
      t_max[ax] = (boundary - a[ax]) / dir[ax];
      t_delta[ax] = -geometry.resolution / dir[ax];
    } else {
      step[ax] = 0;
      t_max[ax] = std::numeric_limits<double>::infinity();
      t_delta[ax] = std::numeric_limits<double>::infinity();
    }
  }

  const int max_steps = (end - cur).cwiseAbs().sum() + 3;
  for (int n = 0; n < max_steps && cur != end; ++n) {
    int ax = 0;
    if (t_max.y() < t_max[ax]) ax = 1;
    if (t_max.z() < t_max[ax]) ax = 2;
    cur[ax] += step[ax];
    t_max[ax] += t_delta[ax];
    cells.push_back(cur);
  }
  if (cells.back() != end) {
    cells.push_back(end);  // numeric corner case: land on the target cell
  }
  return cells;
}

VoxelGrid rasterize_path(const std::vector<Eigen::Vector3d>& points, const GridGeometry& geometry) {
  if (points.empty()) {
    throw std::invalid_argument("rasterize_path: empty point list");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    if (!geometry.contains_point(points[i])) {
      throw OutOfBoundsError("rasterize_path: point " + std::to_string(i) + " outside bounds");
    }
  }

  VoxelGrid grid(geometry);
  grid.set_occupied(geometry.cell_of(points[0]));
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    for (const Eigen::Vector3i& c : traverse_segment(points[i], points[i + 1], geometry)) {
      grid.set_occupied(c);
    }
  }
  return grid;
}

VoxelGrid crop(const VoxelGrid& grid, const Eigen::Vector3d& box_min,
               const Eigen::Vector3d& box_max) {
  const GridGeometry& g = grid.geometry();
  Eigen::Vector3i lo, hi;  // inclusive lo, exclusive hi, in parent indices
  for (int ax = 0; ax < 3; ++ax) {
    lo[ax] = std::clamp(static_cast<int>(std::floor((box_min[ax] - g.origin[ax]) / g.resolution)),
                        0, g.dims[ax] - 1);
    hi[ax] = std::clamp(static_cast<int>(std::ceil((box_max[ax] - g.origin[ax]) / g.resolution)),
                        lo[ax] + 1, g.dims[ax]);
    while (hi[ax] - lo[ax] < 3) {
      if (lo[ax] > 0)
        --lo[ax];
      else
        ++hi[ax];
    }
  }

  VoxelGrid out(g.origin + g.resolution * lo.cast<double>(), g.resolution, hi - lo);
  const int nz = hi.z() - lo.z();
  for (int x = lo.x(); x < hi.x(); ++x) {
    for (int y = lo.y(); y < hi.y(); ++y) {
      const int src = g.linear(Eigen::Vector3i(x, y, lo.z()));
      const int dst = out.geometry().linear(Eigen::Vector3i(x - lo.x(), y - lo.y(), 0));
      std::copy_n(grid.occupancy().begin() + src, nz, out.occupancy().begin() + dst);
    }
  }
  return out;
}

}  // namespace gvfnav
