#ifndef GVFNAV_GLOBAL_PATH_HPP
#define GVFNAV_GLOBAL_PATH_HPP

#include <Eigen/Core>
#include <vector>

#include "gvfnav/distance_field.hpp"
#include "gvfnav/voxel_grid.hpp"

namespace gvfnav {

struct PathQuery {
  Eigen::Vector3d start;
  Eigen::Vector3d goal;
  double inflation = 0.2;
  // Occupancy grids here don't distinguish unknown from free, so unknown
  // space is traversable whenever this is set (the default). Kept as an
  // explicit knob for grids that carry a known-mask.
  bool allow_unknown = true;
};

// 26-connected A* over the inflated grid followed by greedy line-of-sight
// shortcutting. Diagonal moves require the whole spanned cell block to be
// free, so returned segments never cut corners. A blocked start or goal
// cell is snapped to the nearest free cell within 3 cells.
// Throws NoPathError when the goal is unreachable.
std::vector<Eigen::Vector3d> plan(const VoxelGrid& grid, const PathQuery& query);

// Same, reusing a precomputed distance field of the grid's obstacles for
// the inflation test (geometry must match the grid).
std::vector<Eigen::Vector3d> plan(const VoxelGrid& grid, const PathQuery& query,
                                  const DistanceField& obstacle_esdf);

// Receding-horizon target: the global goal if within `horizon` of
// `position`, otherwise the point `horizon` meters along the previous
// global path (straight line toward the goal if none), snapped to the
// nearest free cell within 1 m when it lands inside a known obstacle.
Eigen::Vector3d local_goal(const VoxelGrid& grid, const Eigen::Vector3d& global_goal,
                           const Eigen::Vector3d& position, double horizon = 7.0,
                           const std::vector<Eigen::Vector3d>* previous_path = nullptr);

}  // namespace gvfnav

#endif  // GVFNAV_GLOBAL_PATH_HPP
