#ifndef GVFNAV_SCENE_GEN_HPP
#define GVFNAV_SCENE_GEN_HPP

#include <cstdint>
#include <string>

#include "gvfnav/navigator.hpp"
#include "gvfnav/rng.hpp"
#include "gvfnav/scene.hpp"

namespace gvfnav {

struct SceneSpec {
  Eigen::Vector3d extent{30.0, 10.0, 3.0};
  std::string style = "pillars-2d";  // or "irregular-3d"
  double target_density = 0.30;      // voxel occupancy fraction; 0 = forced only
  uint64_t seed = 0;
  double resolution = 0.1;
  std::vector<Obstacle> forced;      // always placed, e.g. a canonical pillar
};

struct GeneratedScene {
  Scene scene;
  Eigen::Vector3d start;
  Eigen::Vector3d goal;
  double density_total = 0.0;  // occupied / all scene voxels
  double density_band = 0.0;   // occupied / voxels of the tight obstacle band
  int rounds = 0;              // rejection rounds consumed
};

// Occupied-voxel fraction of the whole grid.
double voxel_density(const VoxelGrid& grid);
// Occupied fraction within the tight bounding box of the occupied cells —
// the alternative density reading when obstacles don't span the map.
double band_density(const VoxelGrid& grid);

// Seeded rejection sampling until the realized voxel density lands within
// 3 percentage points of the target. Start and goal sit on the long axis
// with 1 m free spheres around both. Gaps between obstacles are kept wide
// enough for the inflated planner to pass. Throws SceneGenerationError
// after 1000 rounds.
GeneratedScene generate_scene(const SceneSpec& spec);

// Seeded disturbance schedules for the benchmark suites. kind: "none",
// "wind" (pulses capped at 1.5 m/s^2), "drag" (two drag-to-stop events),
// or "mixed". t_hint approximates the mission duration the events span.
DisturbanceSchedule make_disturbance_schedule(const std::string& kind, double t_hint, Rng& rng);

}  // namespace gvfnav

#endif  // GVFNAV_SCENE_GEN_HPP
