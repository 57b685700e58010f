#include "gvfnav/scene.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gvfnav {

namespace {

using nlohmann::json;

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& j) {
  return Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

}  // namespace

bool point_in_obstacle(const Obstacle& obstacle, const Eigen::Vector3d& p) {
  if (const auto* box = std::get_if<BoxObstacle>(&obstacle)) {
    return p.x() >= box->min.x() && p.x() <= box->max.x() && p.y() >= box->min.y() &&
           p.y() <= box->max.y() && p.z() >= box->min.z() && p.z() <= box->max.z();
  }
  const auto& cyl = std::get<CylinderObstacle>(obstacle);
  if (p.z() < cyl.z_min || p.z() > cyl.z_max) {
    return false;
  }
  const double dx = p.x() - cyl.center.x();
  const double dy = p.y() - cyl.center.y();
  return dx * dx + dy * dy <= cyl.radius * cyl.radius;
}

bool Scene::point_in_obstacle(const Eigen::Vector3d& p) const {
  for (const Obstacle& o : obstacles) {
    if (gvfnav::point_in_obstacle(o, p)) {
      return true;
    }
  }
  return false;
}

VoxelGrid rasterize_scene(const std::vector<Obstacle>& obstacles, const Aabb& bounds,
                          double resolution) {
  if (resolution <= 0.0) {
    throw std::invalid_argument("rasterize_scene: resolution must be positive");
  }
  const Eigen::Vector3d extent = bounds.max - bounds.min;
  if (extent.minCoeff() <= 0.0) {
    throw std::invalid_argument("rasterize_scene: empty bounds");
  }

  Eigen::Vector3i dims;
  for (int ax = 0; ax < 3; ++ax) {
    dims[ax] = std::max(3, static_cast<int>(std::ceil(extent[ax] / resolution - 1e-9)));
  }

  VoxelGrid grid(bounds.min, resolution, dims);
  const GridGeometry& geom = grid.geometry();
  for (const Obstacle& obstacle : obstacles) {
    // Restrict the scan to the obstacle's bounding box.
    Eigen::Vector3d obs_min, obs_max;
    if (const auto* box = std::get_if<BoxObstacle>(&obstacle)) {
      obs_min = box->min;
      obs_max = box->max;
    } else {
      const auto& cyl = std::get<CylinderObstacle>(obstacle);
      obs_min = Eigen::Vector3d(cyl.center.x() - cyl.radius, cyl.center.y() - cyl.radius, cyl.z_min);
      obs_max = Eigen::Vector3d(cyl.center.x() + cyl.radius, cyl.center.y() + cyl.radius, cyl.z_max);
    }
    Eigen::Vector3i lo = geom.cell_of(obs_min);
    Eigen::Vector3i hi = geom.cell_of(obs_max);
    for (int ax = 0; ax < 3; ++ax) {
      lo[ax] = std::max(lo[ax], 0);
      hi[ax] = std::min(hi[ax], dims[ax] - 1);
    }
    for (int ix = lo.x(); ix <= hi.x(); ++ix) {
      for (int iy = lo.y(); iy <= hi.y(); ++iy) {
        for (int iz = lo.z(); iz <= hi.z(); ++iz) {
          const Eigen::Vector3i c(ix, iy, iz);
          if (!grid.occupied(c) && point_in_obstacle(obstacle, geom.cell_center(c))) {
            grid.set_occupied(c);
          }
        }
      }
    }
  }
  return grid;
}

VoxelGrid rasterize_scene(const Scene& scene) {
  return rasterize_scene(scene.obstacles, scene.bounds, scene.resolution);
}

std::string scene_to_json(const Scene& scene) {
  json j;
  j["bounds"]["min"] = vec3_to_json(scene.bounds.min);
  j["bounds"]["max"] = vec3_to_json(scene.bounds.max);
  j["resolution"] = scene.resolution;
  j["obstacles"] = json::array();
  for (const Obstacle& obstacle : scene.obstacles) {
    json o;
    if (const auto* box = std::get_if<BoxObstacle>(&obstacle)) {
      o["type"] = "box";
      o["min"] = vec3_to_json(box->min);
      o["max"] = vec3_to_json(box->max);
    } else {
      const auto& cyl = std::get<CylinderObstacle>(obstacle);
      o["type"] = "cylinder";
      o["center"] = json::array({cyl.center.x(), cyl.center.y()});
      o["radius"] = cyl.radius;
      o["z_min"] = cyl.z_min;
      o["z_max"] = cyl.z_max;
    }
    j["obstacles"].push_back(o);
  }
  return j.dump(2);
}

Scene scene_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scene scene;
  scene.bounds.min = vec3_from_json(j.at("bounds").at("min"));
  scene.bounds.max = vec3_from_json(j.at("bounds").at("max"));
  scene.resolution = j.at("resolution").get<double>();
  for (const json& o : j.at("obstacles")) {
    const std::string type = o.at("type").get<std::string>();
    if (type == "box") {
      scene.obstacles.push_back(BoxObstacle{vec3_from_json(o.at("min")), vec3_from_json(o.at("max"))});
    } else if (type == "cylinder") {
      CylinderObstacle cyl;
      cyl.center = Eigen::Vector2d(o.at("center").at(0).get<double>(), o.at("center").at(1).get<double>());
      cyl.radius = o.at("radius").get<double>();
      cyl.z_min = o.at("z_min").get<double>();
      cyl.z_max = o.at("z_max").get<double>();
      scene.obstacles.push_back(cyl);
    } else {
      throw std::invalid_argument("scene_from_json: unknown obstacle type '" + type + "'");
    }
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_scene: cannot open " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scene_from_json(text);
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_scene: cannot open " + path);
  }
  out << scene_to_json(scene) << "\n";
}

}  // namespace gvfnav
