#ifndef GVFNAV_LBFGS_HPP
#define GVFNAV_LBFGS_HPP

#include <Eigen/Core>
#include <functional>

namespace gvfnav {

// f(x, g) returns the objective value and fills g with the gradient.
using LbfgsObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsOptions {
  int memory = 8;
  int max_iterations = 100;
  double grad_tolerance = 1e-4;          // on ||g||_inf
  double relative_decrease_tol = 1e-8;   // on (f_prev - f) / max(|f_prev|, 1)
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search_evals = 40;
  // Called after each accepted iterate with the line-search step length.
  std::function<void(int iteration, const Eigen::VectorXd& x, double value,
                     const Eigen::VectorXd& grad, double step)>
      on_iteration;
};

enum class LbfgsStatus {
  kGradientConverged,
  kDecreaseConverged,
  kIterationLimit,
  kLineSearchFailed,
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::kIterationLimit;
};

// Limited-memory BFGS with two-loop recursion and a strong-Wolfe line
// search. Accepted iterates never increase the objective; on line-search
// failure the best iterate so far is returned with kLineSearchFailed.
LbfgsResult lbfgs_minimize(const LbfgsObjective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options = {});

}  // namespace gvfnav

#endif  // GVFNAV_LBFGS_HPP
