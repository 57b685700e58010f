#include "gvfnav/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace gvfnav {

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Two-loop recursion: applies the implicit inverse-Hessian approximation to
// the gradient, scaled by gamma = s.y / y.y of the newest pair.
Eigen::VectorXd two_loop_direction(const Eigen::VectorXd& grad,
                                   const std::deque<CurvaturePair>& history) {
  Eigen::VectorXd q = grad;
  std::vector<double> alpha(history.size());
  for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  if (!history.empty()) {
    const auto& newest = history.back();
    q *= newest.s.dot(newest.y) / newest.y.squaredNorm();
  }
  for (size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return -q;
}

struct LineSearchResult {
  bool ok = false;
  double step = 0.0;
  double value = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
  int evaluations = 0;
};

// Strong Wolfe line search (bracket + zoom with bisection).
LineSearchResult wolfe_search(const LbfgsObjective& objective, const Eigen::VectorXd& x0,
                              double f0, const Eigen::VectorXd& g0, const Eigen::VectorXd& dir,
                              const LbfgsOptions& opt) {
  LineSearchResult out;
  const double dphi0 = g0.dot(dir);
  if (dphi0 >= 0.0) return out;

  Eigen::VectorXd g_trial;
  auto eval = [&](double a, double& phi, double& dphi) {
    out.x = x0 + a * dir;
    phi = objective(out.x, g_trial);
    dphi = g_trial.dot(dir);
    ++out.evaluations;
  };

  auto accept = [&](double a, double phi) {
    out.ok = true;
    out.step = a;
    out.value = phi;
    out.grad = g_trial;
  };

  const double a_max = 1e4;
  double a_prev = 0.0, phi_prev = f0;
  double a = 1.0;
  double lo = 0.0, hi = 0.0, phi_lo = 0.0;
  bool bracketed = false;

  while (out.evaluations < opt.max_line_search_evals) {
    double phi, dphi;
    eval(a, phi, dphi);
    if (!std::isfinite(phi)) {
      // Step overshot into a non-finite region; shrink hard.
      a = 0.5 * (a_prev + a);
      continue;
    }
    if (phi > f0 + opt.wolfe_c1 * a * dphi0 || (out.evaluations > 1 && phi >= phi_prev)) {
      lo = a_prev;
      phi_lo = phi_prev;
      hi = a;
      bracketed = true;
      break;
    }
    if (std::abs(dphi) <= -opt.wolfe_c2 * dphi0) {
      accept(a, phi);
      return out;
    }
    if (dphi >= 0.0) {
      lo = a;
      phi_lo = phi;
      hi = a_prev;
      bracketed = true;
      break;
    }
    a_prev = a;
    phi_prev = phi;
    a = std::min(2.0 * a, a_max);
    if (a_prev >= a_max) break;
  }
  if (!bracketed) return out;

  // Zoom.
  while (out.evaluations < opt.max_line_search_evals) {
    const double a_j = 0.5 * (lo + hi);
    if (std::abs(hi - lo) < 1e-14 * std::max(1.0, std::abs(lo))) break;
    double phi, dphi;
    eval(a_j, phi, dphi);
    if (!std::isfinite(phi) || phi > f0 + opt.wolfe_c1 * a_j * dphi0 || phi >= phi_lo) {
      hi = a_j;
    } else {
      if (std::abs(dphi) <= -opt.wolfe_c2 * dphi0) {
        accept(a_j, phi);
        return out;
      }
      if (dphi * (hi - lo) >= 0.0) hi = lo;
      lo = a_j;
      phi_lo = phi;
    }
  }
  return out;
}

}  // namespace

LbfgsResult lbfgs_minimize(const LbfgsObjective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options) {
  LbfgsResult res;
  res.x = std::move(x0);
  res.gradient.resize(res.x.size());
  res.value = objective(res.x, res.gradient);
  res.evaluations = 1;

  std::deque<CurvaturePair> history;
  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    if (res.gradient.lpNorm<Eigen::Infinity>() < options.grad_tolerance) {
      res.status = LbfgsStatus::kGradientConverged;
      return res;
    }

    Eigen::VectorXd dir = two_loop_direction(res.gradient, history);
    if (dir.dot(res.gradient) >= 0.0) {
      history.clear();
      dir = -res.gradient;
    }

    LineSearchResult ls = wolfe_search(objective, res.x, res.value, res.gradient, dir, options);
    res.evaluations += ls.evaluations;
    if (!ls.ok) {
      res.status = LbfgsStatus::kLineSearchFailed;
      return res;
    }

    CurvaturePair pair;
    pair.s = ls.x - res.x;
    pair.y = ls.grad - res.gradient;
    const double sy = pair.s.dot(pair.y);
    if (sy > 1e-10 * pair.s.norm() * pair.y.norm()) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }

    const double decrease = (res.value - ls.value) / std::max(std::abs(res.value), 1.0);
    res.x = std::move(ls.x);
    res.value = ls.value;
    res.gradient = std::move(ls.grad);
    if (options.on_iteration)
      options.on_iteration(res.iterations + 1, res.x, res.value, res.gradient, ls.step);
    if (decrease >= 0.0 && decrease < options.relative_decrease_tol) {
      ++res.iterations;
      res.status = LbfgsStatus::kDecreaseConverged;
      return res;
    }
  }
  res.status = LbfgsStatus::kIterationLimit;
  return res;
}

}  // namespace gvfnav
