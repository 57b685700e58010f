#pragma once

// Shared oracles and generators for the test suite.  Everything here is kept
// deliberately naive -- the point is to cross-check the optimized library code
// against implementations too simple to be wrong.

#include <gvfnav/distance_field.hpp>
#include <gvfnav/rng.hpp>
#include <gvfnav/voxel_grid.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace testutil {

// O(occupied * cells) reference EDT.  Integer squared distances on the cell
// lattice, converted to meters at the end.
inline std::vector<double> brute_force_edt(const gvfnav::VoxelGrid& grid) {
  const auto& g = grid.geometry();
  std::vector<Eigen::Vector3i> occ;
  for (int x = 0; x < g.dims.x(); ++x)
    for (int y = 0; y < g.dims.y(); ++y)
      for (int z = 0; z < g.dims.z(); ++z)
        if (grid.occupied({x, y, z})) occ.emplace_back(x, y, z);

  std::vector<double> out(g.num_cells(), 0.0);
  for (int x = 0; x < g.dims.x(); ++x) {
    for (int y = 0; y < g.dims.y(); ++y) {
      for (int z = 0; z < g.dims.z(); ++z) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (const auto& o : occ) {
          const std::int64_t dx = x - o.x();
          const std::int64_t dy = y - o.y();
          const std::int64_t dz = z - o.z();
          const std::int64_t sq = dx * dx + dy * dy + dz * dz;
          if (sq < best) best = sq;
          if (best == 0) break;
        }
        out[g.linear({x, y, z})] =
            g.resolution * std::sqrt(static_cast<double>(best));
      }
    }
  }
  return out;
}

// Uniformly random occupancy at a given fill fraction.
inline gvfnav::VoxelGrid random_occupancy(gvfnav::Rng& rng,
                                          const Eigen::Vector3i& dims,
                                          double fraction,
                                          double resolution = 0.1) {
  gvfnav::GridGeometry g;
  g.origin = Eigen::Vector3d::Zero();
  g.resolution = resolution;
  g.dims = dims;
  gvfnav::VoxelGrid grid(g);
  for (int x = 0; x < dims.x(); ++x)
    for (int y = 0; y < dims.y(); ++y)
      for (int z = 0; z < dims.z(); ++z)
        if (rng.uniform() < fraction) grid.set_occupied({x, y, z}, true);
  return grid;
}

// Build a DistanceField whose stored values come from an arbitrary function of
// the cell center.  Useful for feeding exactly-known scalar fields into the
// sampling / fitting code.
template <typename F>
gvfnav::DistanceField field_from_function(const gvfnav::GridGeometry& g, F&& f) {
  std::vector<double> values(g.num_cells());
  for (int x = 0; x < g.dims.x(); ++x)
    for (int y = 0; y < g.dims.y(); ++y)
      for (int z = 0; z < g.dims.z(); ++z)
        values[g.linear({x, y, z})] = f(g.cell_center({x, y, z}));
  return gvfnav::DistanceField(g, std::move(values));
}

inline double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na < 1e-12 || nb < 1e-12) return M_PI;
  double c = a.dot(b) / (na * nb);
  c = std::min(1.0, std::max(-1.0, c));
  return std::acos(c);
}

inline double deg(double rad) { return rad * 180.0 / M_PI; }

// Max relative error between an analytic gradient and central differences of a
// scalar callable, restricted to components with magnitude above `floor`.
template <typename F>
double fd_relative_error(F&& f, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& analytic, double h = 1e-5,
                         double floor_mag = 1e-8) {
  double worst = 0.0;
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const double fd = (f(xp) - f(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
    const double denom = std::max(std::abs(fd), std::abs(analytic(i)));
    if (denom <= floor_mag) continue;
    worst = std::max(worst, std::abs(fd - analytic(i)) / denom);
  }
  return worst;
}

}  // namespace testutil
