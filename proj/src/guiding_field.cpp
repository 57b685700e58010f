#include "gvfnav/guiding_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gvfnav/errors.hpp"
#include "gvfnav/voxel_grid.hpp"

namespace gvfnav {

GuidingField::GuidingField(PathPoints path, DistanceField u_field, GuidingFieldParams params)
    : path_(std::move(path)), u_field_(std::move(u_field)), params_(params) {
  if (path_.points.size() < 3)
    throw std::invalid_argument("guiding field needs at least three path points");
  if (!(params_.k1 > 0.0) || !(params_.k2 > 0.0) || !(params_.r > 0.0))
    throw std::invalid_argument("guiding field gains and bandwidth must be positive");
  const Eigen::Vector3d lo = u_field_.geometry().metric_min();
  const Eigen::Vector3d hi = u_field_.geometry().metric_max();
  for (const auto& p : path_.points) {
    if (((p - lo).minCoeff() < params_.r) || ((hi - p).minCoeff() < params_.r))
      throw std::invalid_argument("field box must cover the path with >= r margin");
  }
}

GuidingField build_guiding_field(const PathPoints& path, const GuidingFieldParams& params) {
  if (path.points.size() < 3)
    throw std::invalid_argument("guiding field needs at least three path points");
  const double margin = std::max(params.margin, params.r) + 2.0 * params.resolution;

  Eigen::Vector3d lo = path.points.front(), hi = path.points.front();
  for (const auto& p : path.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  lo -= Eigen::Vector3d::Constant(margin);
  hi += Eigen::Vector3d::Constant(margin);

  GridGeometry geom;
  geom.origin = lo;
  geom.resolution = params.resolution;
  for (int ax = 0; ax < 3; ++ax)
    geom.dims[ax] = std::max(5, static_cast<int>(std::ceil((hi[ax] - lo[ax]) / params.resolution)));

  const VoxelGrid path_cells = rasterize_path(path.points, geom);
  DistanceField u = euclidean_distance_transform(path_cells);
  return GuidingField(path, std::move(u), params);
}

int nearest_index(const GuidingField& field, const Eigen::Vector3d& xi) {
  const auto& pts = field.path().points;
  int best = 0;
  double best_d = (pts[0] - xi).squaredNorm();
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    const double d = (pts[i] - xi).squaredNorm();
    if (d <= best_d) {  // <= : equidistant points resolve forward
      best_d = d;
      best = i;
    }
  }
  return best;
}

Eigen::Vector3d tangent(const GuidingField& field, const Eigen::Vector3d& xi) {
  const auto& pts = field.path().points;
  const int n = static_cast<int>(pts.size());
  const int i = std::clamp(nearest_index(field, xi), 1, n - 2);
  const Eigen::Vector3d sum = pts[i + 1] - pts[i - 1];  // chord sum around i
  const double norm = sum.norm();
  if (norm < 1e-9)
    throw DegenerateTangentError("chord sum vanishes near path index " + std::to_string(i));
  return sum / norm;
}

std::optional<Eigen::Vector3d> normal(const GuidingField& field, const Eigen::Vector3d& xi) {
  const Eigen::Vector3d grad = fit_gradient(field.u_field(), xi);
  const double norm = grad.norm();
  if (norm < 1e-6) return std::nullopt;
  return Eigen::Vector3d(-grad / norm);
}

double shape(double d, double r) {
  if (d < 0.0 || !(r > 0.0)) throw std::invalid_argument("shape needs d >= 0 and r > 0");
  return std::tanh(d / r);
}

Eigen::Vector3d guide(const GuidingField& field, const Eigen::Vector3d& xi) {
  const double d = sample_distance(field.u_field(), xi);
  Eigen::Vector3d chi = field.params().k1 * tangent(field, xi);
  if (const auto n = normal(field, xi))
    chi += field.params().k2 * shape(d, field.params().r) * (*n);
  return chi;
}

double distance_to_polyline(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& p) {
  if (points.empty()) throw std::invalid_argument("empty polyline");
  double best = (points.front() - p).norm();
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const Eigen::Vector3d seg = points[i + 1] - points[i];
    const double len2 = seg.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - points[i]).dot(seg) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (points[i] + t * seg - p).norm());
  }
  return best;
}

void export_guide_slice_csv(const GuidingField& field, double z, double spacing,
                            const std::string& path) {
  if (!(spacing > 0.0)) throw std::invalid_argument("slice spacing must be positive");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "x,y,chi_x,chi_y,d\n";

  const DistanceField& u = field.u_field();
  const double pad = 3.5 * u.resolution();  // keep the fit window in bounds
  const Eigen::Vector3d lo = u.geometry().metric_min() + Eigen::Vector3d::Constant(pad);
  const Eigen::Vector3d hi = u.geometry().metric_max() - Eigen::Vector3d::Constant(pad);
  char line[160];
  for (double x = lo.x(); x <= hi.x() + 1e-12; x += spacing) {
    for (double y = lo.y(); y <= hi.y() + 1e-12; y += spacing) {
      const Eigen::Vector3d xi(x, y, std::clamp(z, lo.z(), hi.z()));
      const Eigen::Vector3d chi = guide(field, xi);
      const double d = sample_distance(u, xi);
      std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g\n", x, y, chi.x(), chi.y(), d);
      out << line;
    }
  }
}

}  // namespace gvfnav
