#include "gvfnav/distance_field.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "gvfnav/errors.hpp"

namespace gvfnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform: out[q] = min_j (q-j)^2 + f[j].
// Lower envelope of parabolas; entries with f = inf carry no parabola.
// v/z are scratch of size n and n+1.
void dt_1d(const double* f, int n, double* out, int* v, double* z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) {
      continue;
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      if (k < 0) {
        break;
      }
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = (k == 0) ? -kInf : s;
    z[k + 1] = kInf;
  }

  if (k < 0) {
    for (int q = 0; q < n; ++q) {
      out[q] = kInf;
    }
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) {
      ++j;
    }
    const double dq = q - v[j];
    out[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

DistanceField::DistanceField(const GridGeometry& geometry, std::vector<double> values)
    : geom_(geometry), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != geom_.num_cells()) {
    throw std::invalid_argument("DistanceField: value count does not match geometry");
  }
}

bool DistanceField::sampleable(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d lo = geom_.metric_min() + Eigen::Vector3d::Constant(geom_.resolution);
  const Eigen::Vector3d hi = geom_.metric_max() - Eigen::Vector3d::Constant(geom_.resolution);
  return p.x() > lo.x() && p.y() > lo.y() && p.z() > lo.z() && p.x() < hi.x() && p.y() < hi.y() &&
         p.z() < hi.z();
}

Eigen::Vector3d DistanceField::clamp_to_interior(const Eigen::Vector3d& p, int margin_cells) const {
  const double margin = (margin_cells + 0.01) * geom_.resolution;
  Eigen::Vector3d q = p;
  for (int ax = 0; ax < 3; ++ax) {
    q[ax] = std::min(std::max(q[ax], geom_.metric_min()[ax] + margin),
                     geom_.metric_max()[ax] - margin);
  }
  return q;
}

DistanceField euclidean_distance_transform(const VoxelGrid& grid) {
  if (!grid.any_occupied()) {
    throw AllFreeError("euclidean_distance_transform: grid has no occupied cell");
  }
  const GridGeometry& geom = grid.geometry();
  const int nx = geom.dims.x();
  const int ny = geom.dims.y();
  const int nz = geom.dims.z();

  std::vector<double> sq(static_cast<size_t>(geom.num_cells()));
  for (size_t i = 0; i < sq.size(); ++i) {
    sq[i] = grid.occupancy()[i] ? 0.0 : kInf;
  }

  const int nmax = std::max({nx, ny, nz});
  std::vector<double> row(nmax), out(nmax), z(nmax + 1);
  std::vector<int> v(nmax);

  // Pass 1: along z (stride 1 within each (x, y) row).
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      double* base = sq.data() + static_cast<size_t>(x * ny + y) * nz;
      dt_1d(base, nz, out.data(), v.data(), z.data());
      std::copy(out.begin(), out.begin() + nz, base);
    }
  }
  // Pass 2: along y.
  for (int x = 0; x < nx; ++x) {
    for (int zi = 0; zi < nz; ++zi) {
      const size_t base = static_cast<size_t>(x) * ny * nz + zi;
      for (int y = 0; y < ny; ++y) {
        row[y] = sq[base + static_cast<size_t>(y) * nz];
      }
      dt_1d(row.data(), ny, out.data(), v.data(), z.data());
      for (int y = 0; y < ny; ++y) {
        sq[base + static_cast<size_t>(y) * nz] = out[y];
      }
    }
  }
  // Pass 3: along x.
  const size_t stride_x = static_cast<size_t>(ny) * nz;
  for (int y = 0; y < ny; ++y) {
    for (int zi = 0; zi < nz; ++zi) {
      const size_t base = static_cast<size_t>(y) * nz + zi;
      for (int x = 0; x < nx; ++x) {
        row[x] = sq[base + static_cast<size_t>(x) * stride_x];
      }
      dt_1d(row.data(), nx, out.data(), v.data(), z.data());
      for (int x = 0; x < nx; ++x) {
        sq[base + static_cast<size_t>(x) * stride_x] = out[x];
      }
    }
  }

  std::vector<double> values(sq.size());
  for (size_t i = 0; i < sq.size(); ++i) {
    values[i] = geom.resolution * std::sqrt(sq[i]);
  }
  return DistanceField(geom, std::move(values));
}

namespace {

struct TrilinearContext {
  Eigen::Vector3i base;
  Eigen::Vector3d frac;
  double c[2][2][2];
};

TrilinearContext trilinear_context(const DistanceField& field, const Eigen::Vector3d& p) {
  if (!field.sampleable(p)) {
    throw OutOfBoundsError("sample_distance: point outside interior sampling bounds");
  }
  const GridGeometry& geom = field.geometry();
  TrilinearContext ctx;
  for (int ax = 0; ax < 3; ++ax) {
    const double g = (p[ax] - geom.origin[ax]) / geom.resolution - 0.5;
    int i0 = static_cast<int>(std::floor(g));
    i0 = std::min(std::max(i0, 0), geom.dims[ax] - 2);
    ctx.base[ax] = i0;
    ctx.frac[ax] = g - i0;
  }
  for (int dx = 0; dx < 2; ++dx) {
    for (int dy = 0; dy < 2; ++dy) {
      for (int dz = 0; dz < 2; ++dz) {
        ctx.c[dx][dy][dz] =
            field.at(ctx.base + Eigen::Vector3i(dx, dy, dz));
      }
    }
  }
  return ctx;
}

}  // namespace

double sample_distance(const DistanceField& field, const Eigen::Vector3d& p) {
  const TrilinearContext t = trilinear_context(field, p);
  const double fx = t.frac.x(), fy = t.frac.y(), fz = t.frac.z();
  const double c00 = t.c[0][0][0] * (1 - fx) + t.c[1][0][0] * fx;
  const double c01 = t.c[0][0][1] * (1 - fx) + t.c[1][0][1] * fx;
  const double c10 = t.c[0][1][0] * (1 - fx) + t.c[1][1][0] * fx;
  const double c11 = t.c[0][1][1] * (1 - fx) + t.c[1][1][1] * fx;
  const double c0 = c00 * (1 - fy) + c10 * fy;
  const double c1 = c01 * (1 - fy) + c11 * fy;
  return c0 * (1 - fz) + c1 * fz;
}

SampleWithGradient sample_distance_with_gradient(const DistanceField& field,
                                                 const Eigen::Vector3d& p) {
  const TrilinearContext t = trilinear_context(field, p);
  const double fx = t.frac.x(), fy = t.frac.y(), fz = t.frac.z();
  const double res = field.resolution();

  const double c00 = t.c[0][0][0] * (1 - fx) + t.c[1][0][0] * fx;
  const double c01 = t.c[0][0][1] * (1 - fx) + t.c[1][0][1] * fx;
  const double c10 = t.c[0][1][0] * (1 - fx) + t.c[1][1][0] * fx;
  const double c11 = t.c[0][1][1] * (1 - fx) + t.c[1][1][1] * fx;
  const double c0 = c00 * (1 - fy) + c10 * fy;
  const double c1 = c01 * (1 - fy) + c11 * fy;

  SampleWithGradient r;
  r.value = c0 * (1 - fz) + c1 * fz;

  const double gx = ((t.c[1][0][0] - t.c[0][0][0]) * (1 - fy) * (1 - fz) +
                     (t.c[1][1][0] - t.c[0][1][0]) * fy * (1 - fz) +
                     (t.c[1][0][1] - t.c[0][0][1]) * (1 - fy) * fz +
                     (t.c[1][1][1] - t.c[0][1][1]) * fy * fz);
  const double gy = (c10 - c00) * (1 - fz) + (c11 - c01) * fz;
  const double gz = c1 - c0;
  r.gradient = Eigen::Vector3d(gx, gy, gz) / res;
  return r;
}

GradientFit fit_quadratic(const DistanceField& field, const Eigen::Vector3d& p, int window_radius) {
  const GridGeometry& geom = field.geometry();
  const Eigen::Vector3i center = geom.cell_of(p);
  if (!geom.in_bounds(center)) {
    throw OutOfBoundsError("fit_quadratic: query outside field");
  }

  int r = window_radius;
  auto window_fits = [&](int rad) {
    for (int ax = 0; ax < 3; ++ax) {
      if (center[ax] - rad < 0 || center[ax] + rad >= geom.dims[ax]) {
        return false;
      }
    }
    return true;
  };
  if (!window_fits(r)) {
    r = 1;
    if (!window_fits(r)) {
      throw OutOfBoundsError("fit_quadratic: window clipped by field bounds");
    }
  }

  const int side = 2 * r + 1;
  const int n = side * side * side;
  Eigen::MatrixXd a(n, 10);
  Eigen::VectorXd b(n);
  int row = 0;
  for (int dx = -r; dx <= r; ++dx) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dz = -r; dz <= r; ++dz) {
        const Eigen::Vector3i c = center + Eigen::Vector3i(dx, dy, dz);
        const Eigen::Vector3d d = geom.cell_center(c) - p;
        a(row, 0) = 1.0;
        a(row, 1) = d.x();
        a(row, 2) = d.y();
        a(row, 3) = d.z();
        a(row, 4) = 0.5 * d.x() * d.x();
        a(row, 5) = d.x() * d.y();
        a(row, 6) = d.x() * d.z();
        a(row, 7) = 0.5 * d.y() * d.y();
        a(row, 8) = d.y() * d.z();
        a(row, 9) = 0.5 * d.z() * d.z();
        b(row) = field.at(c);
        ++row;
      }
    }
  }

  const Eigen::Matrix<double, 10, 10> m = a.transpose() * a;
  const Eigen::Matrix<double, 10, 1> rhs = a.transpose() * b;
  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 10, 10>> qr(m);
  if (qr.rank() < 10) {
    throw NumericalDegeneracyError("fit_quadratic: rank-deficient normal equations");
  }

  GradientFit fit;
  fit.theta = qr.solve(rhs);
  fit.center = p;
  fit.window_radius = r;
  return fit;
}

Eigen::Vector3d fit_gradient(const DistanceField& field, const Eigen::Vector3d& p,
                             int window_radius) {
  return fit_quadratic(field, p, window_radius).gradient();
}

void save_field(const DistanceField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_field: cannot open " + path);
  }
  const GridGeometry& geom = field.geometry();
  const uint32_t dims[3] = {static_cast<uint32_t>(geom.dims.x()),
                            static_cast<uint32_t>(geom.dims.y()),
                            static_cast<uint32_t>(geom.dims.z())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(&geom.resolution), sizeof(double));
  const double origin[3] = {geom.origin.x(), geom.origin.y(), geom.origin.z()};
  out.write(reinterpret_cast<const char*>(origin), sizeof(origin));
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.values().size() * sizeof(double)));
}

DistanceField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_field: cannot open " + path);
  }
  uint32_t dims[3];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  GridGeometry geom;
  geom.dims = Eigen::Vector3i(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                              static_cast<int>(dims[2]));
  in.read(reinterpret_cast<char*>(&geom.resolution), sizeof(double));
  double origin[3];
  in.read(reinterpret_cast<char*>(origin), sizeof(origin));
  geom.origin = Eigen::Vector3d(origin[0], origin[1], origin[2]);
  std::vector<double> values(static_cast<size_t>(geom.num_cells()));
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) {
    throw std::runtime_error("load_field: truncated file " + path);
  }
  return DistanceField(geom, std::move(values));
}

void export_field_slice_csv(const DistanceField& field, double z, const std::string& path,
                            double spacing) {
  if (spacing < 0.0) throw std::invalid_argument("slice spacing must be nonnegative");
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("export_field_slice_csv: cannot open " + path);
  }
  const GridGeometry& geom = field.geometry();
  out << "x,y,value\n";
  char line[96];

  if (spacing > 0.0) {
    // Strictly inside the one-cell trilinear margin, as clamp_to_interior does.
    const Eigen::Vector3d lo =
        geom.metric_min() + Eigen::Vector3d::Constant(1.01 * geom.resolution);
    const Eigen::Vector3d hi =
        geom.metric_max() - Eigen::Vector3d::Constant(1.01 * geom.resolution);
    const double zc = std::clamp(z, lo.z(), hi.z());
    for (double x = lo.x(); x <= hi.x() + 1e-12; x += spacing) {
      for (double y = lo.y(); y <= hi.y() + 1e-12; y += spacing) {
        const double v = sample_distance(field, Eigen::Vector3d(x, y, zc));
        std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g\n", x, y, v);
        out << line;
      }
    }
    return;
  }

  int iz = geom.cell_of(Eigen::Vector3d(geom.origin.x(), geom.origin.y(), z)).z();
  iz = std::min(std::max(iz, 0), geom.dims.z() - 1);
  for (int ix = 0; ix < geom.dims.x(); ++ix) {
    for (int iy = 0; iy < geom.dims.y(); ++iy) {
      const Eigen::Vector3i c(ix, iy, iz);
      const Eigen::Vector3d center = geom.cell_center(c);
      std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g\n", center.x(), center.y(), field.at(c));
      out << line;
    }
  }
}

}  // namespace gvfnav
