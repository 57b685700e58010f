#ifndef GVFNAV_TRAJ_OPT_HPP
#define GVFNAV_TRAJ_OPT_HPP

#include <memory>
#include <string>
#include <vector>

#include "gvfnav/bspline.hpp"
#include "gvfnav/distance_field.hpp"

namespace gvfnav {

// Unconstrained refinement of the interior control points: minimize
// lambda_s * J_s + lambda_c * J_c. The first and last `degree` control
// points stay frozen so the curve keeps its endpoints and end tangents.
struct OptProblem {
  UniformBSpline spline;
  std::shared_ptr<const DistanceField> esdf;
  double lambda_s = 5.0;
  double lambda_c = 10.0;
  double d_thr = 0.35;
};

// One cost term: value plus gradient per free control point (frozen points
// carry no entry). out_of_bounds counts control points that fell outside
// the ESDF and were maximally penalized.
struct CostEval {
  double value = 0.0;
  std::vector<Eigen::Vector3d> gradient;
  int out_of_bounds = 0;
};

// J_s = sum of squared third differences of the control polygon.
CostEval smoothness_cost(const OptProblem& problem);

// J_c = sum over free control points of (d - d_thr)^2 where d < d_thr,
// with d sampled from the obstacle ESDF.
CostEval collision_cost(const OptProblem& problem);

struct OptIterRecord {
  int iteration = 0;
  double j_s = 0.0;
  double j_c = 0.0;
  double j_total = 0.0;
  double grad_norm = 0.0;  // infinity norm over free components
  double step = 0.0;       // line-search step length
};

struct OptResult {
  UniformBSpline spline;
  bool line_search_warning = false;
  int iterations = 0;
  double j_s = 0.0;
  double j_c = 0.0;
  double j_total = 0.0;
  std::vector<OptIterRecord> trace;
};

// Quasi-Newton descent over the stacked free control points. Accepted
// iterates never increase J_total; on a line-search failure the best
// iterate is returned with line_search_warning set.
OptResult optimize(const OptProblem& problem, int max_iters = 100, double grad_tol = 1e-4);

void write_opt_diagnostics_csv(const std::vector<OptIterRecord>& trace, const std::string& path);

}  // namespace gvfnav

#endif  // GVFNAV_TRAJ_OPT_HPP
