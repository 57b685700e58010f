#include "gvfnav/classical_gvf.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

namespace gvfnav {

ImplicitPath make_circle_2d(double radius, double gain) {
  ImplicitPath path;
  path.dimension = 2;
  path.level_values = [radius](const Eigen::VectorXd& xi) {
    Eigen::VectorXd v(1);
    v(0) = xi(0) * xi(0) + xi(1) * xi(1) - radius * radius;
    return v;
  };
  path.level_gradients = [](const Eigen::VectorXd& xi) {
    std::vector<Eigen::VectorXd> g(1);
    g[0] = Eigen::VectorXd(2);
    g[0] << 2.0 * xi(0), 2.0 * xi(1);
    return g;
  };
  path.gains = Eigen::VectorXd::Constant(1, gain);
  path.distance = [radius](const Eigen::VectorXd& xi) {
    return std::abs(xi.head<2>().norm() - radius);
  };
  return path;
}

ImplicitPath make_line_2d(double a, double b, double c, double gain) {
  const double norm = std::hypot(a, b);
  if (norm <= 0.0) {
    throw std::invalid_argument("make_line_2d: degenerate normal");
  }
  const double an = a / norm, bn = b / norm, cn = c / norm;
  ImplicitPath path;
  path.dimension = 2;
  path.level_values = [an, bn, cn](const Eigen::VectorXd& xi) {
    Eigen::VectorXd v(1);
    v(0) = an * xi(0) + bn * xi(1) - cn;
    return v;
  };
  path.level_gradients = [an, bn](const Eigen::VectorXd&) {
    std::vector<Eigen::VectorXd> g(1);
    g[0] = Eigen::VectorXd(2);
    g[0] << an, bn;
    return g;
  };
  path.gains = Eigen::VectorXd::Constant(1, gain);
  path.distance = [an, bn, cn](const Eigen::VectorXd& xi) {
    return std::abs(an * xi(0) + bn * xi(1) - cn);
  };
  return path;
}

ImplicitPath make_circle_3d(double radius, double height, double gain1, double gain2) {
  ImplicitPath path;
  path.dimension = 3;
  path.level_values = [radius, height](const Eigen::VectorXd& xi) {
    Eigen::VectorXd v(2);
    v(0) = xi(0) * xi(0) + xi(1) * xi(1) - radius * radius;
    v(1) = xi(2) - height;
    return v;
  };
  path.level_gradients = [](const Eigen::VectorXd& xi) {
    std::vector<Eigen::VectorXd> g(2);
    g[0] = Eigen::VectorXd(3);
    g[0] << 2.0 * xi(0), 2.0 * xi(1), 0.0;
    g[1] = Eigen::VectorXd(3);
    g[1] << 0.0, 0.0, 1.0;
    return g;
  };
  path.gains = Eigen::VectorXd(2);
  path.gains << gain1, gain2;
  path.distance = [radius, height](const Eigen::VectorXd& xi) {
    const double radial = xi.head<2>().norm() - radius;
    const double vertical = xi(2) - height;
    return std::hypot(radial, vertical);
  };
  return path;
}

Eigen::VectorXd propagation_term(const ImplicitPath& path, const Eigen::VectorXd& xi) {
  const auto grads = path.level_gradients(xi);
  if (path.dimension == 2) {
    Eigen::VectorXd t(2);
    t << -grads[0](1), grads[0](0);  // R_{pi/2} grad(phi)
    return t;
  }
  const Eigen::Vector3d g1 = grads[0].head<3>();
  const Eigen::Vector3d g2 = grads[1].head<3>();
  return g1.cross(g2);
}

Eigen::VectorXd convergence_term(const ImplicitPath& path, const Eigen::VectorXd& xi) {
  const Eigen::VectorXd phi = path.level_values(xi);
  const auto grads = path.level_gradients(xi);
  Eigen::VectorXd n = Eigen::VectorXd::Zero(path.dimension);
  for (int i = 0; i < phi.size(); ++i) {
    n -= path.gains(i) * phi(i) * grads[i];
  }
  return n;
}

Eigen::VectorXd composite_field(const ImplicitPath& path, const Eigen::VectorXd& xi) {
  return propagation_term(path, xi) + convergence_term(path, xi);
}

Eigen::VectorXd normalized_field(const ImplicitPath& path, const Eigen::VectorXd& xi,
                                 const std::function<double(const Eigen::VectorXd&)>& gain,
                                 double eps) {
  const Eigen::VectorXd t = propagation_term(path, xi);
  const Eigen::VectorXd n = convergence_term(path, xi);
  const Eigen::VectorXd t_hat = t / std::max(t.norm(), eps);
  const Eigen::VectorXd n_hat = n / std::max(n.norm(), eps);
  return t_hat + gain(xi) * n_hat;
}

Eigen::VectorXd normalized_field(const ImplicitPath& path, const Eigen::VectorXd& xi, double gain,
                                 double eps) {
  return normalized_field(
      path, xi, [gain](const Eigen::VectorXd&) { return gain; }, eps);
}

IntegrationResult integrate_field(const ImplicitPath& path, const Eigen::VectorXd& start,
                                  const IntegrationOptions& options) {
  if (options.step <= 0.0 || options.step > 0.05) {
    throw std::invalid_argument("integrate_field: step must be in (0, 0.05]");
  }
  if (options.horizon <= 0.0) {
    throw std::invalid_argument("integrate_field: horizon must be positive");
  }

  auto chi = [&](const Eigen::VectorXd& xi) {
    return options.form == FieldForm::kComposite
               ? composite_field(path, xi)
               : normalized_field(path, xi, options.gain);
  };

  IntegrationResult result;
  Eigen::VectorXd xi = start;
  const int steps = static_cast<int>(std::ceil(options.horizon / options.step));
  result.states.push_back(xi);
  result.times.push_back(0.0);
  result.distances.push_back(path.distance(xi));

  for (int i = 0; i < steps; ++i) {
    const Eigen::VectorXd k1 = chi(xi);
    if (k1.norm() < 1e-12) {
      result.stalled = true;
      break;
    }
    const Eigen::VectorXd k2 = chi(xi + 0.5 * options.step * k1);
    const Eigen::VectorXd k3 = chi(xi + 0.5 * options.step * k2);
    const Eigen::VectorXd k4 = chi(xi + options.step * k3);
    xi += options.step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!xi.allFinite() || xi.cwiseAbs().maxCoeff() > options.safety_box_half_width) {
      result.diverged = true;
      break;
    }
    result.states.push_back(xi);
    result.times.push_back((i + 1) * options.step);
    result.distances.push_back(path.distance(xi));
  }
  return result;
}

}  // namespace gvfnav
