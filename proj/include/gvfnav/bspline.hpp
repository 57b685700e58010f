#ifndef GVFNAV_BSPLINE_HPP
#define GVFNAV_BSPLINE_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gvfnav {

// Discretized reference path: ordered samples of the continuous trajectory
// at a uniform time interval. Consecutive duplicates are removed at
// construction.
struct PathPoints {
  std::vector<Eigen::Vector3d> points;
  double dt{0.0};
};

// Uniform clamped B-spline of degree p over control points C_0..C_N.
// Knots: 0 repeated p+1 times, interior spacing 1, N+1-p repeated p+1
// times, so the parameter domain is [0, N+1-p]. The curve interpolates C_0
// and C_N. Immutable after construction.
class UniformBSpline {
public:
  UniformBSpline(std::vector<Eigen::Vector3d> control_points, int degree, double time_scale = 1.0);

  int degree() const { return degree_; }
  int num_control_points() const { return static_cast<int>(control_points_.size()); }
  const std::vector<Eigen::Vector3d>& control_points() const { return control_points_; }
  const std::vector<double>& knots() const { return knots_; }
  double time_scale() const { return time_scale_; }

  double domain_start() const { return knots_[degree_]; }
  double domain_end() const { return knots_[control_points_.size()]; }
  double duration() const { return (domain_end() - domain_start()) * time_scale_; }

  // De Boor evaluation. Throws std::domain_error for u outside
  // [domain_start, domain_end].
  Eigen::Vector3d evaluate(double u) const;
  Eigen::Vector3d evaluate_time(double t) const { return evaluate(domain_start() + t / time_scale_); }

  // Nonzero basis values N_{span-p..span} at u, with the span index.
  void basis_functions(double u, int& span, Eigen::VectorXd& values) const;

  // Same knots and degree, new control points (same count).
  UniformBSpline with_control_points(std::vector<Eigen::Vector3d> control_points) const;

  // Polyline length of a dense sampling (256 subdivisions per segment span).
  double arc_length_estimate() const;

private:
  int find_span(double u) const;

  int degree_;
  std::vector<Eigen::Vector3d> control_points_;
  std::vector<double> knots_;
  double time_scale_;
};

// Least-squares fit through waypoints at chord-length-proportional
// parameters, boundary control points pinned to the first and last
// waypoint. Consecutive duplicate waypoints are removed first. When the
// interior system is underdetermined (n_control > waypoints + 2) or loses
// rank, degrades to control points resampled uniformly by arc length along
// the waypoint polyline.
UniformBSpline fit_through(const std::vector<Eigen::Vector3d>& waypoints, int degree,
                           int n_control, double time_scale = 1.0);

// M+1 samples at uniform times t_m = m * dt; the final sample is clamped to
// the curve end even when the last interval is short.
// Requires 0 < dt <= duration.
PathPoints sample_uniform(const UniformBSpline& spline, double dt);

// JSON round-trip: {"degree":p, "control_points":[[x,y,z],...], "time_scale":s}
std::string spline_to_json(const UniformBSpline& spline);
UniformBSpline spline_from_json(const std::string& text);

}  // namespace gvfnav

#endif  // GVFNAV_BSPLINE_HPP
