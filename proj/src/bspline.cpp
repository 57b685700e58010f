#include "gvfnav/bspline.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace gvfnav {

namespace {

std::vector<Eigen::Vector3d> drop_consecutive_duplicates(const std::vector<Eigen::Vector3d>& pts) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  }
  return out;
}

double polyline_length(const std::vector<Eigen::Vector3d>& pts) {
  double len = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

// Point at arc length s along the polyline.
Eigen::Vector3d polyline_at(const std::vector<Eigen::Vector3d>& pts, double s) {
  if (s <= 0.0) return pts.front();
  for (size_t i = 1; i < pts.size(); ++i) {
    const double seg = (pts[i] - pts[i - 1]).norm();
    if (s <= seg) {
      const double a = seg > 0.0 ? s / seg : 0.0;
      return pts[i - 1] + a * (pts[i] - pts[i - 1]);
    }
    s -= seg;
  }
  return pts.back();
}

}  // namespace

UniformBSpline::UniformBSpline(std::vector<Eigen::Vector3d> control_points, int degree,
                               double time_scale)
    : degree_(degree), control_points_(std::move(control_points)), time_scale_(time_scale) {
  if (degree_ < 1) throw std::invalid_argument("spline degree must be at least 1");
  const int n = static_cast<int>(control_points_.size());
  if (n < degree_ + 1)
    throw std::invalid_argument("spline needs at least degree+1 control points");
  if (!(time_scale_ > 0.0)) throw std::invalid_argument("time_scale must be positive");
  const double span = static_cast<double>(n - degree_);
  knots_.resize(n + degree_ + 1);
  for (int i = 0; i < static_cast<int>(knots_.size()); ++i) {
    if (i <= degree_)
      knots_[i] = 0.0;
    else if (i < n)
      knots_[i] = static_cast<double>(i - degree_);
    else
      knots_[i] = span;
  }
}

int UniformBSpline::find_span(double u) const {
  const int n = num_control_points() - 1;
  if (u >= knots_[n + 1]) return n;  // right-end closure
  int lo = degree_, hi = n + 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (u < knots_[mid])
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

Eigen::Vector3d UniformBSpline::evaluate(double u) const {
  if (u < domain_start() - 1e-9 || u > domain_end() + 1e-9)
    throw std::domain_error("spline parameter outside curve domain");
  u = std::min(std::max(u, domain_start()), domain_end());
  const int k = find_span(u);
  std::vector<Eigen::Vector3d> d(degree_ + 1);
  for (int j = 0; j <= degree_; ++j) d[j] = control_points_[j + k - degree_];
  for (int r = 1; r <= degree_; ++r) {
    for (int j = degree_; j >= r; --j) {
      const int i = j + k - degree_;
      const double denom = knots_[i + degree_ - r + 1] - knots_[i];
      const double alpha = denom > 0.0 ? (u - knots_[i]) / denom : 0.0;
      d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
    }
  }
  return d[degree_];
}

void UniformBSpline::basis_functions(double u, int& span, Eigen::VectorXd& values) const {
  u = std::min(std::max(u, domain_start()), domain_end());
  span = find_span(u);
  values.resize(degree_ + 1);
  values[0] = 1.0;
  Eigen::VectorXd left(degree_ + 1), right(degree_ + 1);
  for (int j = 1; j <= degree_; ++j) {
    left[j] = u - knots_[span + 1 - j];
    right[j] = knots_[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double temp = denom > 0.0 ? values[r] / denom : 0.0;
      values[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    values[j] = saved;
  }
}

UniformBSpline UniformBSpline::with_control_points(std::vector<Eigen::Vector3d> control_points) const {
  if (control_points.size() != control_points_.size())
    throw std::invalid_argument("control point count must match");
  return UniformBSpline(std::move(control_points), degree_, time_scale_);
}

double UniformBSpline::arc_length_estimate() const {
  const int segments = (num_control_points() - degree_) * 256;
  const double u0 = domain_start(), u1 = domain_end();
  double len = 0.0;
  Eigen::Vector3d prev = evaluate(u0);
  for (int i = 1; i <= segments; ++i) {
    const Eigen::Vector3d cur = evaluate(u0 + (u1 - u0) * static_cast<double>(i) / segments);
    len += (cur - prev).norm();
    prev = cur;
  }
  return len;
}

UniformBSpline fit_through(const std::vector<Eigen::Vector3d>& waypoints, int degree,
                           int n_control, double time_scale) {
  if (waypoints.size() < 2) throw std::invalid_argument("fit needs at least two waypoints");
  if (n_control < degree + 1)
    throw std::invalid_argument("fit needs at least degree+1 control points");
  const std::vector<Eigen::Vector3d> pts = drop_consecutive_duplicates(waypoints);
  if (pts.size() < 2) throw std::invalid_argument("waypoints are all coincident");

  const int m = static_cast<int>(pts.size());
  const int n = n_control;

  auto resample_fallback = [&]() {
    const double total = polyline_length(pts);
    std::vector<Eigen::Vector3d> ctrl(n);
    for (int i = 0; i < n; ++i)
      ctrl[i] = polyline_at(pts, total * static_cast<double>(i) / (n - 1));
    return UniformBSpline(std::move(ctrl), degree, time_scale);
  };

  if (n > m + 2) return resample_fallback();

  // Chord-length parameters scaled to the knot domain [0, n - degree].
  const double total = polyline_length(pts);
  const double span = static_cast<double>(n - degree);
  std::vector<double> params(m);
  params[0] = 0.0;
  double acc = 0.0;
  for (int k = 1; k < m; ++k) {
    acc += (pts[k] - pts[k - 1]).norm();
    params[k] = span * acc / total;
  }
  params[m - 1] = span;

  // Pin the boundary control points and solve least squares for the
  // interior ones.
  UniformBSpline probe(std::vector<Eigen::Vector3d>(n, Eigen::Vector3d::Zero()), degree,
                       time_scale);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n - 2);
  Eigen::MatrixXd rhs(m, 3);
  for (int k = 0; k < m; ++k) {
    int sp = 0;
    Eigen::VectorXd vals;
    probe.basis_functions(params[k], sp, vals);
    Eigen::Vector3d r = pts[k];
    for (int j = 0; j <= degree; ++j) {
      const int col = sp - degree + j;
      if (col == 0)
        r -= vals[j] * pts.front();
      else if (col == n - 1)
        r -= vals[j] * pts.back();
      else
        a(k, col - 1) = vals[j];
    }
    rhs.row(k) = r.transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < n - 2) return resample_fallback();
  const Eigen::MatrixXd interior = qr.solve(rhs);

  std::vector<Eigen::Vector3d> ctrl(n);
  ctrl[0] = pts.front();
  ctrl[n - 1] = pts.back();
  for (int i = 1; i < n - 1; ++i) ctrl[i] = interior.row(i - 1).transpose();
  return UniformBSpline(std::move(ctrl), degree, time_scale);
}

PathPoints sample_uniform(const UniformBSpline& spline, double dt) {
  const double duration = spline.duration();
  if (!(dt > 0.0) || dt > duration + 1e-12)
    throw std::invalid_argument("sample interval must be in (0, duration]");
  const int last = static_cast<int>(std::ceil(duration / dt - 1e-9));
  PathPoints out;
  out.dt = dt;
  out.points.reserve(last + 1);
  for (int i = 0; i <= last; ++i) {
    const double t = std::min(i * dt, duration);
    const Eigen::Vector3d p = spline.evaluate_time(t);
    if (out.points.empty() || (p - out.points.back()).norm() > 1e-12) out.points.push_back(p);
  }
  return out;
}

std::string spline_to_json(const UniformBSpline& spline) {
  nlohmann::json j;
  j["degree"] = spline.degree();
  j["time_scale"] = spline.time_scale();
  auto& cps = j["control_points"] = nlohmann::json::array();
  for (const auto& c : spline.control_points()) cps.push_back({c.x(), c.y(), c.z()});
  return j.dump(2);
}

UniformBSpline spline_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Eigen::Vector3d> ctrl;
  for (const auto& c : j.at("control_points"))
    ctrl.emplace_back(c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>());
  return UniformBSpline(std::move(ctrl), j.at("degree").get<int>(),
                        j.value("time_scale", 1.0));
}

}  // namespace gvfnav
