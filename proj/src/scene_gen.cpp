#include "gvfnav/scene_gen.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gvfnav/errors.hpp"

namespace gvfnav {

namespace {

struct Rect {
  double x0, y0, x1, y1;
};

Rect footprint(const Obstacle& ob) {
  if (const auto* box = std::get_if<BoxObstacle>(&ob))
    return {box->min.x(), box->min.y(), box->max.x(), box->max.y()};
  const auto& cyl = std::get<CylinderObstacle>(ob);
  return {cyl.center.x() - cyl.radius, cyl.center.y() - cyl.radius, cyl.center.x() + cyl.radius,
          cyl.center.y() + cyl.radius};
}

double rect_gap(const Rect& a, const Rect& b) {
  const double dx = std::max({a.x0 - b.x1, b.x0 - a.x1, 0.0});
  const double dy = std::max({a.y0 - b.y1, b.y0 - a.y1, 0.0});
  return std::hypot(dx, dy);
}

double rect_point_distance(const Rect& r, double px, double py) {
  const double dx = std::max({r.x0 - px, px - r.x1, 0.0});
  const double dy = std::max({r.y0 - py, py - r.y1, 0.0});
  return std::hypot(dx, dy);
}

Eigen::AlignedBox3d obstacle_aabb(const Obstacle& ob) {
  if (const auto* box = std::get_if<BoxObstacle>(&ob))
    return Eigen::AlignedBox3d(box->min, box->max);
  const auto& cyl = std::get<CylinderObstacle>(ob);
  return Eigen::AlignedBox3d(
      Eigen::Vector3d(cyl.center.x() - cyl.radius, cyl.center.y() - cyl.radius, cyl.z_min),
      Eigen::Vector3d(cyl.center.x() + cyl.radius, cyl.center.y() + cyl.radius, cyl.z_max));
}

double aabb_gap(const Eigen::AlignedBox3d& a, const Eigen::AlignedBox3d& b) {
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  for (int ax = 0; ax < 3; ++ax)
    d[ax] = std::max({a.min()[ax] - b.max()[ax], b.min()[ax] - a.max()[ax], 0.0});
  return d.norm();
}

double primitive_volume(const Obstacle& ob) {
  if (const auto* box = std::get_if<BoxObstacle>(&ob))
    return (box->max - box->min).prod();
  const auto& cyl = std::get<CylinderObstacle>(ob);
  return M_PI * cyl.radius * cyl.radius * (cyl.z_max - cyl.z_min);
}

}  // namespace

double voxel_density(const VoxelGrid& grid) {
  return static_cast<double>(grid.occupied_count()) / grid.geometry().num_cells();
}

double band_density(const VoxelGrid& grid) {
  const Eigen::Vector3i& dims = grid.dims();
  Eigen::Vector3i lo = dims, hi = Eigen::Vector3i(-1, -1, -1);
  for (int x = 0; x < dims.x(); ++x)
    for (int y = 0; y < dims.y(); ++y)
      for (int z = 0; z < dims.z(); ++z)
        if (grid.occupied({x, y, z})) {
          lo = lo.cwiseMin(Eigen::Vector3i(x, y, z));
          hi = hi.cwiseMax(Eigen::Vector3i(x, y, z));
        }
  if (hi.x() < 0) return 0.0;
  const Eigen::Vector3i span = hi - lo + Eigen::Vector3i::Ones();
  return static_cast<double>(grid.occupied_count()) /
         (static_cast<double>(span.x()) * span.y() * span.z());
}

GeneratedScene generate_scene(const SceneSpec& spec) {
  if (spec.target_density < 0.0 || spec.target_density > 0.6)
    throw std::invalid_argument("target density must lie in [0, 0.6]");
  if (spec.style != "pillars-2d" && spec.style != "irregular-3d")
    throw std::invalid_argument("unknown scene style: " + spec.style);
  if (spec.extent.minCoeff() < 3.0 * spec.resolution)
    throw std::invalid_argument("scene extent too small for the resolution");

  const Eigen::Vector3d& ext = spec.extent;
  GeneratedScene out;
  out.start = Eigen::Vector3d(1.0, ext.y() / 2.0, ext.z() / 2.0);
  out.goal = Eigen::Vector3d(ext.x() - 1.0, ext.y() / 2.0, ext.z() / 2.0);

  const bool pillars = spec.style == "pillars-2d";
  const double corridor = 1.0;  // free-sphere radius at both endpoints
  // Pillar gaps must stay trackable at cruise, not merely passable for the
  // inflated planner: 2 x 0.35 m of push-out clearance plus tracking slack
  // and a turn radius of v^2/a ~ 1.3 m. Density comes from pillar bulk,
  // never from squeezing the passages.
  const double min_gap = pillars ? 1.2 : 0.25;
  const double inset = 0.2;

  Rng rng(spec.seed);
  const int max_rounds = 1000;
  for (int round = 1; round <= max_rounds; ++round) {
    Scene scene;
    scene.bounds = Aabb{Eigen::Vector3d::Zero(), ext};
    scene.resolution = spec.resolution;
    scene.obstacles = spec.forced;

    if (pillars) {
      double area = 0.0;
      for (const auto& ob : scene.obstacles) {
        const Rect r = footprint(ob);
        area += (r.x1 - r.x0) * (r.y1 - r.y0);
      }
      const double area_target = spec.target_density * ext.x() * ext.y();
      for (int attempt = 0; attempt < 5000 && area < area_target; ++attempt) {
        const double w = rng.uniform(2.4, 4.0);
        const double h = rng.uniform(2.4, 4.0);
        if (ext.x() - w - 2.0 * inset <= 0.0 || ext.y() - h - 2.0 * inset <= 0.0) continue;
        const double cx = rng.uniform(inset + w / 2.0, ext.x() - inset - w / 2.0);
        const double cy = rng.uniform(inset + h / 2.0, ext.y() - inset - h / 2.0);
        const Rect cand{cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0};
        if (rect_point_distance(cand, out.start.x(), out.start.y()) < corridor) continue;
        if (rect_point_distance(cand, out.goal.x(), out.goal.y()) < corridor) continue;
        bool ok = true;
        for (const auto& ob : scene.obstacles)
          if (rect_gap(cand, footprint(ob)) < min_gap) {
            ok = false;
            break;
          }
        if (!ok) continue;
        scene.obstacles.push_back(BoxObstacle{Eigen::Vector3d(cand.x0, cand.y0, 0.0),
                                              Eigen::Vector3d(cand.x1, cand.y1, ext.z())});
        area += w * h;
      }
    } else {
      double volume = 0.0;
      for (const auto& ob : scene.obstacles) volume += primitive_volume(ob);
      const double volume_target = spec.target_density * ext.prod();
      for (int attempt = 0; attempt < 8000 && volume < volume_target; ++attempt) {
        Obstacle cand;
        if (rng.uniform() < 0.7) {
          const Eigen::Vector3d size(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                     rng.uniform(0.5, std::min(2.2, ext.z())));
          Eigen::Vector3d lo;
          bool fits = true;
          for (int ax = 0; ax < 3; ++ax) {
            const double room = ext[ax] - size[ax] - 2.0 * inset;
            if (room <= 0.0) {
              fits = false;
              break;
            }
            lo[ax] = rng.uniform(inset, inset + room);
          }
          if (!fits) continue;
          cand = BoxObstacle{lo, lo + size};
        } else {
          const double radius = rng.uniform(0.3, 0.9);
          const double height = rng.uniform(0.6, ext.z());
          const double z0 = rng.uniform(0.0, ext.z() - height);
          if (ext.x() - 2.0 * (radius + inset) <= 0.0 || ext.y() - 2.0 * (radius + inset) <= 0.0)
            continue;
          const double cx = rng.uniform(inset + radius, ext.x() - inset - radius);
          const double cy = rng.uniform(inset + radius, ext.y() - inset - radius);
          cand = CylinderObstacle{Eigen::Vector2d(cx, cy), radius, z0, z0 + height};
        }
        const Eigen::AlignedBox3d box = obstacle_aabb(cand);
        if (box.exteriorDistance(out.start) < corridor ||
            box.exteriorDistance(out.goal) < corridor)
          continue;
        bool ok = true;
        for (const auto& ob : scene.obstacles)
          if (aabb_gap(box, obstacle_aabb(ob)) < min_gap) {
            ok = false;
            break;
          }
        if (!ok) continue;
        scene.obstacles.push_back(cand);
        volume += primitive_volume(cand);
      }
    }

    const VoxelGrid grid = rasterize_scene(scene);
    const double density = voxel_density(grid);
    const bool accepted =
        spec.target_density == 0.0 || std::abs(density - spec.target_density) <= 0.03;
    if (accepted) {
      out.scene = std::move(scene);
      out.density_total = density;
      out.density_band = band_density(grid);
      out.rounds = round;
      return out;
    }
  }
  throw SceneGenerationError("could not reach target density after 1000 rounds");
}

DisturbanceSchedule make_disturbance_schedule(const std::string& kind, double t_hint, Rng& rng) {
  DisturbanceSchedule out;
  if (kind == "none") return out;

  auto add_wind = [&](int pulses) {
    for (int i = 0; i < pulses; ++i) {
      DisturbanceEvent e;
      e.kind = DisturbanceEvent::Kind::kWind;
      e.t_start = std::max(1.0, rng.uniform(0.1, 0.8) * t_hint);
      e.t_end = e.t_start + rng.uniform(1.0, 2.0);
      // Gusts stay disjoint so the instantaneous wind never sums past the
      // per-event cap.
      for (bool moved = true; moved;) {
        moved = false;
        for (const auto& prev : out.events) {
          if (prev.kind != DisturbanceEvent::Kind::kWind) continue;
          if (e.t_start < prev.t_end && prev.t_start < e.t_end) {
            const double shift = prev.t_end + 0.2 - e.t_start;
            e.t_start += shift;
            e.t_end += shift;
            moved = true;
          }
        }
      }
      const double azimuth = rng.uniform(0.0, 2.0 * M_PI);
      Eigen::Vector3d dir(std::cos(azimuth), std::sin(azimuth), rng.uniform(-0.3, 0.3));
      dir.normalize();
      e.vec = rng.uniform(0.75, 1.5) * dir;
      out.events.push_back(e);
    }
  };
  auto add_drags = [&]() {
    const double windows[2][2] = {{0.15, 0.40}, {0.55, 0.80}};
    for (const auto& w : windows) {
      DisturbanceEvent e;
      e.kind = DisturbanceEvent::Kind::kDrag;
      e.t_start = std::max(1.0, rng.uniform(w[0], w[1]) * t_hint);
      e.t_end = e.t_start + rng.uniform(0.3, 0.6);
      const double azimuth = rng.uniform(0.0, 2.0 * M_PI);
      const double magnitude = rng.uniform(1.0, 2.0);
      e.vec = magnitude * Eigen::Vector3d(std::cos(azimuth), std::sin(azimuth), 0.0);
      out.events.push_back(e);
    }
  };

  if (kind == "wind") {
    add_wind(3);
  } else if (kind == "drag") {
    add_drags();
  } else if (kind == "mixed") {
    add_wind(2);
    add_drags();
  } else {
    throw std::invalid_argument("unknown disturbance kind: " + kind);
  }
  validate_schedule(out);
  return out;
}

}  // namespace gvfnav
