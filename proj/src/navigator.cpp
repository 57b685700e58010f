#include "gvfnav/navigator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gvfnav/errors.hpp"
#include "gvfnav/global_path.hpp"
#include "gvfnav/traj_opt.hpp"

namespace gvfnav {

namespace {

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kWindCap = 1.5;        // m/s^2, disturbance ceiling
constexpr double kStallBudget = 3.0;    // s of consecutive replan failures
constexpr double kDragClearance = 0.25; // m kept free when a drag lands

}  // namespace

void validate_schedule(const DisturbanceSchedule& schedule) {
  for (const auto& e : schedule.events) {
    if (!(e.t_end > e.t_start) || e.t_start < 0.0)
      throw std::invalid_argument("disturbance event needs 0 <= t_start < t_end");
    if (e.kind == DisturbanceEvent::Kind::kWind && e.vec.norm() > kWindCap + 1e-9)
      throw std::invalid_argument("wind acceleration exceeds the 1.5 m/s^2 cap");
  }
}

std::string schedule_to_json(const DisturbanceSchedule& schedule) {
  nlohmann::json j;
  auto& events = j["events"] = nlohmann::json::array();
  for (const auto& e : schedule.events) {
    events.push_back({{"t_start", e.t_start},
                      {"t_end", e.t_end},
                      {"kind", e.kind == DisturbanceEvent::Kind::kWind ? "wind" : "drag"},
                      {"vector", {e.vec.x(), e.vec.y(), e.vec.z()}}});
  }
  return j.dump(2);
}

DisturbanceSchedule schedule_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  DisturbanceSchedule out;
  for (const auto& je : j.at("events")) {
    DisturbanceEvent e;
    e.t_start = je.at("t_start").get<double>();
    e.t_end = je.at("t_end").get<double>();
    const std::string kind = je.at("kind").get<std::string>();
    if (kind == "wind")
      e.kind = DisturbanceEvent::Kind::kWind;
    else if (kind == "drag")
      e.kind = DisturbanceEvent::Kind::kDrag;
    else
      throw std::invalid_argument("unknown disturbance kind: " + kind);
    const auto& v = je.at("vector");
    e.vec = Eigen::Vector3d(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
    out.events.push_back(e);
  }
  validate_schedule(out);
  return out;
}

DisturbanceSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return schedule_from_json(buf.str());
}

void save_schedule(const DisturbanceSchedule& schedule, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << schedule_to_json(schedule) << "\n";
}

double MissionReport::mean_cycle_ms() const {
  if (cycles.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : cycles) sum += c.total_ms();
  return sum / static_cast<double>(cycles.size());
}

double MissionReport::std_cycle_ms() const {
  if (cycles.size() < 2) return 0.0;
  const double mean = mean_cycle_ms();
  double acc = 0.0;
  for (const auto& c : cycles) acc += (c.total_ms() - mean) * (c.total_ms() - mean);
  return std::sqrt(acc / static_cast<double>(cycles.size() - 1));
}

void write_trajectory_csv(const MissionReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "t,x,y,z,vx,vy,vz,d_to_path,event_active\n";
  char line[320];
  for (const auto& r : report.log) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.t,
                  r.position.x(), r.position.y(), r.position.z(), r.velocity.x(), r.velocity.y(),
                  r.velocity.z(), r.d_to_path, r.event_active);
    out << line;
  }
}

std::string mission_report_to_json(const MissionReport& report) {
  nlohmann::json j;
  j["result"] = {{"success", report.success},
                 {"reason", report.reason},
                 {"travel_time_s", report.travel_time},
                 {"path_length_m", report.path_length},
                 {"collisions", report.collisions},
                 {"replan_count", report.replan_count},
                 {"replan_failures", report.replan_failures},
                 {"seed", report.seed}};
  double esdf = 0.0, plan = 0.0, opt = 0.0, field = 0.0, max_total = 0.0;
  for (const auto& c : report.cycles) {
    esdf += c.esdf_ms;
    plan += c.plan_ms;
    opt += c.opt_ms;
    field += c.field_ms;
    max_total = std::max(max_total, c.total_ms());
  }
  const double n = report.cycles.empty() ? 1.0 : static_cast<double>(report.cycles.size());
  j["timing"] = {{"mean_cycle_ms", report.mean_cycle_ms()},
                 {"std_cycle_ms", report.std_cycle_ms()},
                 {"max_cycle_ms", max_total},
                 {"stage_mean_ms",
                  {{"esdf", esdf / n}, {"plan", plan / n}, {"optimize", opt / n},
                   {"field", field / n}}}};
  return j.dump(2);
}

Navigator::Navigator(Scene scene, const Eigen::Vector3d& start, const Eigen::Vector3d& goal,
                     DisturbanceSchedule schedule, NavConfig config, uint64_t seed)
    : scene_(std::move(scene)), config_(config), schedule_(std::move(schedule)), seed_(seed) {
  validate_schedule(schedule_);
  scene_.resolution = config_.resolution;
  true_grid_ = std::make_unique<VoxelGrid>(rasterize_scene(scene_));
  online_grid_ = std::make_unique<VoxelGrid>(true_grid_->geometry());

  const GridGeometry& g = true_grid_->geometry();
  if (!g.contains_point(start) || !g.contains_point(goal))
    throw OutOfBoundsError("mission endpoints outside the scene");
  if (true_grid_->occupied(g.cell_of(start)))
    throw std::invalid_argument("mission start lies inside an obstacle");

  state_.position = start;
  state_.goal = goal;
  drag_applied_.assign(schedule_.events.size(), 0);

  // Column buckets (sorted z per xy-column) make the 20 Hz sensor sweep
  // proportional to the occupied cells in range, not the whole map.
  column_occupied_.assign(static_cast<size_t>(g.dims.x()) * g.dims.y(), {});
  for (int x = 0; x < g.dims.x(); ++x)
    for (int y = 0; y < g.dims.y(); ++y) {
      auto& bucket = column_occupied_[static_cast<size_t>(x) * g.dims.y() + y];
      for (int z = 0; z < g.dims.z(); ++z)
        if (true_grid_->occupied({x, y, z})) bucket.push_back(z);
    }
}

void Navigator::perceive() {
  const GridGeometry& g = true_grid_->geometry();
  const Eigen::Vector3d& p = state_.position;
  const double radius = config_.perceive_radius;
  const double r2 = radius * radius;

  const Eigen::Vector3i lo = g.cell_of(p - Eigen::Vector3d::Constant(radius));
  const Eigen::Vector3i hi = g.cell_of(p + Eigen::Vector3d::Constant(radius));
  const int x0 = std::max(0, lo.x()), x1 = std::min(g.dims.x() - 1, hi.x());
  const int y0 = std::max(0, lo.y()), y1 = std::min(g.dims.y() - 1, hi.y());

  for (int x = x0; x <= x1; ++x) {
    const double cx = g.origin.x() + g.resolution * (x + 0.5);
    for (int y = y0; y <= y1; ++y) {
      const auto& bucket = column_occupied_[static_cast<size_t>(x) * g.dims.y() + y];
      if (bucket.empty()) continue;
      const double cy = g.origin.y() + g.resolution * (y + 0.5);
      const double h2 = (cx - p.x()) * (cx - p.x()) + (cy - p.y()) * (cy - p.y());
      if (h2 > r2) continue;
      const double dz = std::sqrt(r2 - h2);
      // z window of centers within the sensing sphere
      const int z0 = static_cast<int>(std::ceil((p.z() - dz - g.origin.z()) / g.resolution - 0.5));
      const int z1 = static_cast<int>(std::floor((p.z() + dz - g.origin.z()) / g.resolution - 0.5));
      const auto begin = std::lower_bound(bucket.begin(), bucket.end(), z0);
      const auto end = std::upper_bound(bucket.begin(), bucket.end(), z1);
      for (auto it = begin; it != end; ++it) online_grid_->set_occupied({x, y, *it});
    }
  }
}

bool Navigator::replan() {
  CycleStats cs;
  cs.t = state_.clock;

  auto attempt = [&](double pad) {
    const auto t_esdf = std::chrono::steady_clock::now();
    const Eigen::Vector3d target = local_goal(*online_grid_, state_.goal, state_.position,
                                              config_.horizon, last_global_path());
    const Eigen::Vector3d lo = state_.position.cwiseMin(target) - Eigen::Vector3d::Constant(pad);
    const Eigen::Vector3d hi = state_.position.cwiseMax(target) + Eigen::Vector3d::Constant(pad);
    const VoxelGrid local = crop(*online_grid_, lo, hi);

    std::shared_ptr<const DistanceField> esdf;
    if (local.any_occupied()) {
      esdf = std::make_shared<DistanceField>(euclidean_distance_transform(local));
    } else {
      // Obstacle-free window: a flat far-away field keeps the collision
      // cost inactive and its gradient zero.
      const double far = (local.geometry().metric_max() - local.geometry().metric_min()).norm();
      esdf = std::make_shared<DistanceField>(
          local.geometry(), std::vector<double>(local.geometry().num_cells(), far));
    }
    cs.esdf_ms = ms_since(t_esdf);

    const auto t_plan = std::chrono::steady_clock::now();
    PathQuery query;
    query.start = state_.position;
    query.goal = target;
    query.inflation = config_.inflation;
    const std::vector<Eigen::Vector3d> waypoints = plan(local, query, *esdf);
    cs.plan_ms = ms_since(t_plan);

    double length = 0.0;
    for (size_t i = 1; i < waypoints.size(); ++i)
      length += (waypoints[i] - waypoints[i - 1]).norm();
    const double spacing = 0.5 * config_.resolution;
    if (waypoints.size() < 2 || length < 2.5 * spacing) {
      // Already at the local goal; the previous field remains valid.
      cs.reason = "path shorter than one field sample";
      return;
    }

    const auto t_opt = std::chrono::steady_clock::now();
    const int n_control =
        std::clamp(4 + static_cast<int>(std::ceil(length / 0.4)), 8, 40);
    const double duration = length / config_.cruise_speed;
    const double time_scale = duration / (n_control - 3);
    UniformBSpline initial = fit_through(waypoints, 3, n_control, time_scale);

    OptProblem problem{std::move(initial), esdf, config_.lambda_s, config_.lambda_c,
                       config_.d_thr};
    OptResult refined = optimize(problem);
    cs.opt_ms = ms_since(t_opt);

    const auto t_field = std::chrono::steady_clock::now();
    const double dt_sample = std::min(spacing / config_.cruise_speed, refined.spline.duration());
    const PathPoints path = sample_uniform(refined.spline, dt_sample);
    if (path.points.size() < 3) {
      cs.reason = "refined path too short to discretize";
      return;
    }
    GuidingFieldParams params;
    params.k1 = config_.k1;
    params.k2 = config_.k2;
    params.r = config_.r;
    params.resolution = config_.resolution;
    field_.emplace(build_guiding_field(path, params));
    cs.field_ms = ms_since(t_field);

    last_path_ = waypoints;
  };

  try {
    try {
      attempt(3.0);
    } catch (const NoPathError&) {
      attempt(6.0);  // widen the window once before giving up
    }
    last_replan_success_ = state_.clock;
    cycles_.push_back(cs);
    return true;
  } catch (const std::exception& e) {
    cs.failed = true;
    cs.reason = e.what();
    cycles_.push_back(cs);
    return false;
  }
}

Eigen::Vector3d Navigator::clip_drag_landing(const Eigen::Vector3d& from,
                                             const Eigen::Vector3d& displacement) {
  // Scripted stand-in for a manual drag: shorten the displacement until the
  // landing point stays inside the map with clearance from real obstacles.
  if (!true_esdf_ && true_grid_->any_occupied())
    true_esdf_ = std::make_unique<DistanceField>(euclidean_distance_transform(*true_grid_));
  for (double s = 1.0; s > 0.0; s -= 0.05) {
    const Eigen::Vector3d cand = from + s * displacement;
    if (!true_esdf_) {
      if (true_grid_->geometry().contains_point(cand)) return cand;
      continue;
    }
    if (true_esdf_->sampleable(cand) &&
        sample_distance(*true_esdf_, cand) >= kDragClearance)
      return cand;
  }
  return from;
}

bool Navigator::collided(const Eigen::Vector3d& p) const {
  const GridGeometry& g = true_grid_->geometry();
  if (!g.contains_point(p)) return true;
  return true_grid_->occupied(g.cell_of(p));
}

void Navigator::step(double dt) {
  const double t = state_.clock;
  int event_active = 0;
  Eigen::Vector3d wind = Eigen::Vector3d::Zero();
  int drag_idx = -1;
  for (size_t i = 0; i < schedule_.events.size(); ++i) {
    const auto& e = schedule_.events[i];
    if (t < e.t_start || t >= e.t_end) continue;
    event_active = 1;
    if (e.kind == DisturbanceEvent::Kind::kWind)
      wind += e.vec;
    else if (drag_idx < 0)
      drag_idx = static_cast<int>(i);
  }

  if (!collision_latched_) {
    if (drag_idx >= 0) {
      // Dragged: pinned at zero velocity, teleported once at event start.
      if (!drag_applied_[drag_idx]) {
        state_.position = clip_drag_landing(state_.position, schedule_.events[drag_idx].vec);
        drag_applied_[drag_idx] = 1;
      }
      state_.velocity.setZero();
    } else {
      Eigen::Vector3d v_cmd = Eigen::Vector3d::Zero();
      if (field_) {
        const Eigen::Vector3d xi = field_->u_field().clamp_to_interior(state_.position, 3);
        const Eigen::Vector3d chi = guide(*field_, xi);
        v_cmd = config_.cruise_speed * chi / std::max(chi.norm(), 1e-9);
      }
      Eigen::Vector3d dv = v_cmd - state_.velocity;
      const double max_dv = config_.a_max * dt;
      if (dv.norm() > max_dv) dv *= max_dv / dv.norm();
      state_.velocity += dv;
      state_.velocity += wind * dt;
      if (state_.velocity.norm() > config_.v_max)
        state_.velocity *= config_.v_max / state_.velocity.norm();
      state_.position += state_.velocity * dt;
    }

    if (collided(state_.position)) {
      collision_latched_ = true;
      state_.velocity.setZero();
    }
  }

  state_.clock += dt;

  TrajectoryRow row;
  row.t = state_.clock;
  row.position = state_.position;
  row.velocity = state_.velocity;
  row.d_to_path = field_ ? distance_to_polyline(field_->path().points, state_.position) : -1.0;
  row.event_active = event_active;
  log_.push_back(row);
}

MissionReport Navigator::run_mission() {
  const double dt = 1.0 / config_.control_hz;
  const int perceive_every = std::max(1, static_cast<int>(std::lround(config_.control_hz / config_.perceive_hz)));
  const int replan_every = std::max(1, static_cast<int>(std::lround(config_.t_p * config_.control_hz)));

  cycles_.clear();
  log_.clear();
  log_.push_back({0.0, state_.position, state_.velocity, -1.0, 0});

  MissionReport report;
  report.seed = seed_;
  bool captured = false;
  std::string reason;

  for (int tick = 0;; ++tick) {
    if ((state_.position - state_.goal).norm() <= config_.capture_radius) {
      captured = true;
      reason = "goal captured";
      break;
    }
    if (collision_latched_) {
      reason = true_grid_->geometry().contains_point(state_.position)
                   ? "collision with obstacle"
                   : "left the map";
      break;
    }
    if (state_.clock >= config_.timeout) {
      reason = "timeout";
      break;
    }
    if (state_.clock - last_replan_success_ > kStallBudget) {
      reason = "replanning stalled";
      break;
    }

    if (tick % perceive_every == 0) perceive();
    if (tick % replan_every == 0) replan();
    step(dt);
  }

  report.success = captured && !collision_latched_;
  report.reason = reason;
  report.travel_time = state_.clock;
  report.collisions = collision_latched_ ? 1 : 0;
  report.replan_count = static_cast<int>(cycles_.size());
  for (const auto& c : cycles_) report.replan_failures += c.failed ? 1 : 0;
  report.cycles = cycles_;
  report.log = log_;
  double length = 0.0;
  for (size_t i = 1; i < log_.size(); ++i)
    length += (log_[i].position - log_[i - 1].position).norm();
  report.path_length = length;
  return report;
}

MissionReport run_mission(const Scene& scene, const Eigen::Vector3d& start,
                          const Eigen::Vector3d& goal, const DisturbanceSchedule& schedule,
                          const NavConfig& config, uint64_t seed) {
  Navigator nav(scene, start, goal, schedule, config, seed);
  return nav.run_mission();
}

}  // namespace gvfnav
