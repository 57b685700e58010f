#include "gvfnav/traj_opt.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gvfnav/lbfgs.hpp"

namespace gvfnav {

namespace {

int free_begin(const OptProblem& p) { return p.spline.degree(); }
int free_count(const OptProblem& p) {
  return p.spline.num_control_points() - 2 * p.spline.degree();
}

void validate(const OptProblem& p) {
  if (!p.esdf) throw std::invalid_argument("optimization problem needs an ESDF");
  if (p.spline.num_control_points() < 4)
    throw std::invalid_argument("smoothness cost needs at least four control points");
  if (free_count(p) < 1)
    throw std::invalid_argument("no free control points to optimize");
  if (p.lambda_s < 0.0 || p.lambda_c < 0.0 || !(p.d_thr > 0.0))
    throw std::invalid_argument("cost weights must be nonnegative and d_thr positive");
}

CostEval smoothness_on(const OptProblem& p, const std::vector<Eigen::Vector3d>& ctrl) {
  const int n = static_cast<int>(ctrl.size());
  const int fb = free_begin(p), fc = free_count(p);
  CostEval out;
  out.gradient.assign(fc, Eigen::Vector3d::Zero());
  for (int i = 0; i + 3 < n; ++i) {
    const Eigen::Vector3d d = ctrl[i + 3] - 3.0 * ctrl[i + 2] + 3.0 * ctrl[i + 1] - ctrl[i];
    out.value += d.squaredNorm();
    // C_j enters the i-th difference with coefficient -1, 3, -3, 1.
    static constexpr double kCoeff[4] = {-1.0, 3.0, -3.0, 1.0};
    for (int o = 0; o < 4; ++o) {
      const int j = i + o;
      if (j >= fb && j < fb + fc) out.gradient[j - fb] += 2.0 * kCoeff[o] * d;
    }
  }
  return out;
}

CostEval collision_on(const OptProblem& p, const std::vector<Eigen::Vector3d>& ctrl) {
  const int fb = free_begin(p), fc = free_count(p);
  const DistanceField& esdf = *p.esdf;
  const Eigen::Vector3d center =
      0.5 * (esdf.geometry().metric_min() + esdf.geometry().metric_max());
  CostEval out;
  out.gradient.assign(fc, Eigen::Vector3d::Zero());
  for (int k = 0; k < fc; ++k) {
    const Eigen::Vector3d& c = ctrl[fb + k];
    if (!esdf.sampleable(c)) {
      // Maximally penalized; descent direction pulls back toward the field.
      ++out.out_of_bounds;
      out.value += p.d_thr * p.d_thr;
      Eigen::Vector3d toward = center - c;
      const double norm = toward.norm();
      toward = norm > 1e-12 ? Eigen::Vector3d(toward / norm) : Eigen::Vector3d::UnitX();
      out.gradient[k] += 2.0 * (0.0 - p.d_thr) * toward;
      continue;
    }
    const SampleWithGradient s = sample_distance_with_gradient(esdf, c);
    if (s.value < p.d_thr) {
      const double gap = s.value - p.d_thr;
      out.value += gap * gap;
      out.gradient[k] += 2.0 * gap * s.gradient;
    }
  }
  return out;
}

std::vector<Eigen::Vector3d> unpack(const OptProblem& p, const Eigen::VectorXd& x) {
  std::vector<Eigen::Vector3d> ctrl = p.spline.control_points();
  const int fb = free_begin(p), fc = free_count(p);
  for (int k = 0; k < fc; ++k) ctrl[fb + k] = x.segment<3>(3 * k);
  return ctrl;
}

}  // namespace

CostEval smoothness_cost(const OptProblem& problem) {
  validate(problem);
  return smoothness_on(problem, problem.spline.control_points());
}

CostEval collision_cost(const OptProblem& problem) {
  validate(problem);
  return collision_on(problem, problem.spline.control_points());
}

OptResult optimize(const OptProblem& problem, int max_iters, double grad_tol) {
  validate(problem);
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  const int fb = free_begin(problem), fc = free_count(problem);

  Eigen::VectorXd x0(3 * fc);
  for (int k = 0; k < fc; ++k) x0.segment<3>(3 * k) = problem.spline.control_points()[fb + k];

  auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const std::vector<Eigen::Vector3d> ctrl = unpack(problem, x);
    const CostEval js = smoothness_on(problem, ctrl);
    const CostEval jc = collision_on(problem, ctrl);
    grad.resize(x.size());
    for (int k = 0; k < fc; ++k)
      grad.segment<3>(3 * k) =
          problem.lambda_s * js.gradient[k] + problem.lambda_c * jc.gradient[k];
    return problem.lambda_s * js.value + problem.lambda_c * jc.value;
  };

  OptResult res{problem.spline, false, 0, 0.0, 0.0, 0.0, {}};
  auto record = [&](int iter, const Eigen::VectorXd& x, const Eigen::VectorXd& grad,
                    double step) {
    const std::vector<Eigen::Vector3d> ctrl = unpack(problem, x);
    const CostEval js = smoothness_on(problem, ctrl);
    const CostEval jc = collision_on(problem, ctrl);
    res.trace.push_back({iter, js.value, jc.value,
                         problem.lambda_s * js.value + problem.lambda_c * jc.value,
                         grad.size() ? grad.lpNorm<Eigen::Infinity>() : 0.0, step});
  };

  {
    Eigen::VectorXd g0;
    objective(x0, g0);
    record(0, x0, g0, 0.0);
  }

  LbfgsOptions opts;
  opts.max_iterations = max_iters;
  opts.grad_tolerance = grad_tol;
  opts.on_iteration = [&](int iter, const Eigen::VectorXd& x, double, const Eigen::VectorXd& g,
                          double step) { record(iter, x, g, step); };
  const LbfgsResult lb = lbfgs_minimize(objective, x0, opts);

  res.spline = problem.spline.with_control_points(unpack(problem, lb.x));
  res.line_search_warning = lb.status == LbfgsStatus::kLineSearchFailed;
  res.iterations = lb.iterations;
  const CostEval js = smoothness_on(problem, res.spline.control_points());
  const CostEval jc = collision_on(problem, res.spline.control_points());
  res.j_s = js.value;
  res.j_c = jc.value;
  res.j_total = problem.lambda_s * js.value + problem.lambda_c * jc.value;
  return res;
}

void write_opt_diagnostics_csv(const std::vector<OptIterRecord>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "iteration,j_s,j_c,j_total,grad_norm,step\n";
  char line[192];
  for (const auto& r : trace) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.iteration, r.j_s, r.j_c,
                  r.j_total, r.grad_norm, r.step);
    out << line;
  }
}

}  // namespace gvfnav
