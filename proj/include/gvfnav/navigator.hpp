#ifndef GVFNAV_NAVIGATOR_HPP
#define GVFNAV_NAVIGATOR_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gvfnav/config.hpp"
#include "gvfnav/guiding_field.hpp"
#include "gvfnav/scene.hpp"
#include "gvfnav/voxel_grid.hpp"

namespace gvfnav {

struct DisturbanceEvent {
  enum class Kind { kWind, kDrag };
  double t_start = 0.0;
  double t_end = 0.0;
  Kind kind = Kind::kWind;
  // wind: constant acceleration (norm <= 1.5 m/s^2);
  // drag: displacement applied at event start while velocity is pinned to zero.
  Eigen::Vector3d vec = Eigen::Vector3d::Zero();
};

struct DisturbanceSchedule {
  std::vector<DisturbanceEvent> events;
};

// Enforces the wind-acceleration cap and ordered event windows.
void validate_schedule(const DisturbanceSchedule& schedule);
std::string schedule_to_json(const DisturbanceSchedule& schedule);
DisturbanceSchedule schedule_from_json(const std::string& text);
DisturbanceSchedule load_schedule(const std::string& path);
void save_schedule(const DisturbanceSchedule& schedule, const std::string& path);

struct NavState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d goal = Eigen::Vector3d::Zero();
  double clock = 0.0;
};

// Wall-clock cost of one replan cycle, split by pipeline stage.
struct CycleStats {
  double t = 0.0;  // sim time of the cycle
  double esdf_ms = 0.0;
  double plan_ms = 0.0;
  double opt_ms = 0.0;
  double field_ms = 0.0;
  bool failed = false;
  std::string reason;

  double total_ms() const { return esdf_ms + plan_ms + opt_ms + field_ms; }
};

struct TrajectoryRow {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  double d_to_path = -1.0;  // -1 while no field exists yet
  int event_active = 0;
};

struct MissionReport {
  bool success = false;
  std::string reason;
  double travel_time = 0.0;
  double path_length = 0.0;
  int collisions = 0;
  int replan_count = 0;
  int replan_failures = 0;
  uint64_t seed = 0;
  std::vector<CycleStats> cycles;
  std::vector<TrajectoryRow> log;

  double mean_cycle_ms() const;
  double std_cycle_ms() const;
};

// Deterministic trajectory log; identical missions produce identical bytes.
void write_trajectory_csv(const MissionReport& report, const std::string& path);
// "result" block is deterministic; wall-clock numbers live under "timing".
std::string mission_report_to_json(const MissionReport& report);

// Closed-loop receding-horizon simulator: perceive at 20 Hz, replan at
// 5 Hz, step the point-mass command loop at 100 Hz, all on one simulated
// clock. Commands depend only on the current state and the latest field.
class Navigator {
public:
  Navigator(Scene scene, const Eigen::Vector3d& start, const Eigen::Vector3d& goal,
            DisturbanceSchedule schedule, NavConfig config = {}, uint64_t seed = 0);

  // Copies true-scene occupied cells within sensor range into the online map.
  void perceive();

  // ESDF -> global path -> spline fit -> optimization -> resampling ->
  // field build. Returns false (keeping the previous field) when a stage
  // fails; the failure is recorded in the cycle stats.
  bool replan();

  // One 100 Hz command step with disturbances and collision accounting.
  void step(double dt);

  // Runs the tick loop until capture, collision, stall, or timeout.
  MissionReport run_mission();

  const NavState& state() const { return state_; }
  const VoxelGrid& online_grid() const { return *online_grid_; }
  const VoxelGrid& true_grid() const { return *true_grid_; }
  const std::optional<GuidingField>& field() const { return field_; }
  const std::vector<Eigen::Vector3d>* last_global_path() const {
    return last_path_.empty() ? nullptr : &last_path_;
  }

private:
  Eigen::Vector3d clip_drag_landing(const Eigen::Vector3d& from,
                                    const Eigen::Vector3d& displacement);
  bool collided(const Eigen::Vector3d& p) const;

  Scene scene_;
  NavConfig config_;
  DisturbanceSchedule schedule_;
  NavState state_;
  std::unique_ptr<VoxelGrid> true_grid_;
  std::unique_ptr<VoxelGrid> online_grid_;
  std::unique_ptr<DistanceField> true_esdf_;  // lazy, built on first drag event
  std::optional<GuidingField> field_;
  std::vector<Eigen::Vector3d> last_path_;
  uint64_t seed_ = 0;

  // per-column occupied z-index buckets of the true grid (fast perception)
  std::vector<std::vector<int>> column_occupied_;

  std::vector<CycleStats> cycles_;
  std::vector<TrajectoryRow> log_;
  double last_replan_success_ = 0.0;
  bool collision_latched_ = false;
  std::vector<uint8_t> drag_applied_;
  int active_drag_ = -1;
};

MissionReport run_mission(const Scene& scene, const Eigen::Vector3d& start,
                          const Eigen::Vector3d& goal, const DisturbanceSchedule& schedule,
                          const NavConfig& config = {}, uint64_t seed = 0);

}  // namespace gvfnav

#endif  // GVFNAV_NAVIGATOR_HPP
