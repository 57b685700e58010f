#ifndef GVFNAV_CLASSICAL_GVF_HPP
#define GVFNAV_CLASSICAL_GVF_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace gvfnav {

// Path defined implicitly as the zero set of n-1 level functions in R^n,
// with analytic gradients. Catalog entries only; this module exists as the
// analytic reference for the discretized field and as an empirical
// convergence testbed.
struct ImplicitPath {
  int dimension{2};
  // level_values(xi)[i] and level_gradients(xi)[i] for i = 0..n-2.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> level_values;
  std::function<std::vector<Eigen::VectorXd>(const Eigen::VectorXd&)> level_gradients;
  Eigen::VectorXd gains;  // k_i > 0, one per level function
  // Geometric distance from a point to the path (analytic, for tests).
  std::function<double(const Eigen::VectorXd&)> distance;
};

// phi = x^2 + y^2 - R^2
ImplicitPath make_circle_2d(double radius, double gain = 1.0);
// phi = a x + b y - c, (a, b) normalized at construction
ImplicitPath make_line_2d(double a, double b, double c, double gain = 1.0);
// phi1 = x^2 + y^2 - R^2, phi2 = z - h
ImplicitPath make_circle_3d(double radius, double height, double gain1 = 1.0, double gain2 = 1.0);

// chi = (cross of gradients) - sum_i k_i phi_i grad(phi_i).
// In 2D the propagation term reduces to the 90-degree rotation of grad(phi).
Eigen::VectorXd composite_field(const ImplicitPath& path, const Eigen::VectorXd& xi);

// Propagation and convergence components of the composite field.
Eigen::VectorXd propagation_term(const ImplicitPath& path, const Eigen::VectorXd& xi);
Eigen::VectorXd convergence_term(const ImplicitPath& path, const Eigen::VectorXd& xi);

// Normalized form t_hat + k(xi) n_hat with division guards
// t_hat = t / max(|t|, eps), n_hat = n / max(|n|, eps).
Eigen::VectorXd normalized_field(const ImplicitPath& path, const Eigen::VectorXd& xi,
                                 const std::function<double(const Eigen::VectorXd&)>& gain,
                                 double eps = 1e-9);
// Constant-gain overload, k(xi) = 1 by default.
Eigen::VectorXd normalized_field(const ImplicitPath& path, const Eigen::VectorXd& xi,
                                 double gain = 1.0, double eps = 1e-9);

enum class FieldForm { kComposite, kNormalized };

struct IntegrationResult {
  std::vector<Eigen::VectorXd> states;   // includes the start state
  std::vector<double> times;
  std::vector<double> distances;         // distance-to-path per sample
  bool diverged{false};                  // left the safety box
  bool stalled{false};                   // |chi| collapsed (singularity)
};

struct IntegrationOptions {
  double step{1e-3};                     // RK4 step, must be in (0, 0.05]
  double horizon{10.0};                  // seconds
  FieldForm form{FieldForm::kNormalized};
  double gain{1.0};                      // k(xi) for the normalized form
  double safety_box_half_width{100.0};   // divergence bound per axis
};

// Fixed-step RK4 integration of xi' = chi(xi).
IntegrationResult integrate_field(const ImplicitPath& path, const Eigen::VectorXd& start,
                                  const IntegrationOptions& options);

}  // namespace gvfnav

#endif  // GVFNAV_CLASSICAL_GVF_HPP
