#ifndef GVFNAV_SCENE_HPP
#define GVFNAV_SCENE_HPP

#include <Eigen/Core>
#include <string>
#include <variant>
#include <vector>

#include "gvfnav/voxel_grid.hpp"

namespace gvfnav {

struct BoxObstacle {
  Eigen::Vector3d min;
  Eigen::Vector3d max;
};

// Vertical cylinder: circular footprint in xy between two heights.
struct CylinderObstacle {
  Eigen::Vector2d center;
  double radius;
  double z_min;
  double z_max;
};

using Obstacle = std::variant<BoxObstacle, CylinderObstacle>;

struct Aabb {
  Eigen::Vector3d min{0.0, 0.0, 0.0};
  Eigen::Vector3d max{0.0, 0.0, 0.0};
};

struct Scene {
  Aabb bounds;
  double resolution{0.1};
  std::vector<Obstacle> obstacles;

  bool point_in_obstacle(const Eigen::Vector3d& p) const;
};

bool point_in_obstacle(const Obstacle& obstacle, const Eigen::Vector3d& p);

// Occupancy grid over the scene bounds: a cell is occupied iff its center
// lies inside any obstacle primitive. Dims are clamped to at least 3 per
// axis. Throws std::invalid_argument on empty bounds or resolution <= 0.
VoxelGrid rasterize_scene(const Scene& scene);
VoxelGrid rasterize_scene(const std::vector<Obstacle>& obstacles, const Aabb& bounds,
                          double resolution);

// Scene file round-trip, schema:
// {"bounds":{"min":[...],"max":[...]}, "resolution":r,
//  "obstacles":[{"type":"box","min":[...],"max":[...]},
//               {"type":"cylinder","center":[x,y],"radius":r,"z_min":a,"z_max":b}]}
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);

}  // namespace gvfnav

#endif  // GVFNAV_SCENE_HPP
