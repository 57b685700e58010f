#include <doctest.h>

#include <gvfnav/distance_field.hpp>
#include <gvfnav/errors.hpp>
#include <gvfnav/rng.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"

using gvfnav::DistanceField;
using gvfnav::GridGeometry;
using gvfnav::VoxelGrid;

TEST_CASE("edt of a single occupied cell") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(5, 5, 5);
  VoxelGrid grid(g);
  grid.set_occupied({2, 2, 2});
  const auto field = gvfnav::euclidean_distance_transform(grid);
  CHECK(field.at({2, 2, 2}) == doctest::Approx(0.0));
  CHECK(field.at({3, 2, 2}) == doctest::Approx(0.1));
  CHECK(field.at({3, 3, 2}) == doctest::Approx(0.1 * std::sqrt(2.0)));
  CHECK(field.at({3, 3, 3}) == doctest::Approx(0.1 * std::sqrt(3.0)));
  CHECK(field.at({0, 0, 0}) == doctest::Approx(0.1 * std::sqrt(12.0)));
}

TEST_CASE("edt matches the brute force oracle on random grids") {
  gvfnav::Rng rng(1234);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Vector3i dims(rng.uniform_int(8, 28), rng.uniform_int(8, 28),
                               rng.uniform_int(8, 28));
    auto grid = testutil::random_occupancy(rng, dims, rng.uniform(0.01, 0.10));
    if (!grid.any_occupied()) grid.set_occupied({1, 1, 1});
    const auto field = gvfnav::euclidean_distance_transform(grid);
    const auto oracle = testutil::brute_force_edt(grid);
    double worst = 0.0;
    for (int i = 0; i < dims.prod(); ++i)
      worst = std::max(worst, std::abs(field.values()[i] - oracle[i]));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("edt is zero on occupied cells and 1-Lipschitz across neighbors") {
  gvfnav::Rng rng(55);
  const auto grid = testutil::random_occupancy(rng, {16, 14, 12}, 0.05);
  if (!grid.any_occupied()) return;
  const auto field = gvfnav::euclidean_distance_transform(grid);
  const auto& g = grid.geometry();
  for (int x = 0; x < g.dims.x(); ++x)
    for (int y = 0; y < g.dims.y(); ++y)
      for (int z = 0; z < g.dims.z(); ++z) {
        if (grid.occupied({x, y, z})) CHECK(field.at({x, y, z}) == 0.0);
        if (x + 1 < g.dims.x())
          CHECK(std::abs(field.at({x + 1, y, z}) - field.at({x, y, z})) <=
                g.resolution + 1e-12);
      }
}

TEST_CASE("edt throws on an all-free grid") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(6, 6, 6);
  CHECK_THROWS_AS(gvfnav::euclidean_distance_transform(VoxelGrid(g)), gvfnav::AllFreeError);
}

TEST_CASE("trilinear sampling reproduces cell centers and midpoints") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(8, 8, 8);
  gvfnav::Rng rng(3);
  auto field = testutil::field_from_function(
      g, [&](const Eigen::Vector3d&) { return rng.uniform(); });

  for (int x = 1; x < 7; ++x)
    for (int y = 1; y < 7; ++y)
      for (int z = 1; z < 7; ++z) {
        const Eigen::Vector3i c(x, y, z);
        CHECK(gvfnav::sample_distance(field, g.cell_center(c)) ==
              doctest::Approx(field.at(c)).epsilon(1e-12));
      }
  // Midpoint between two adjacent centers is the average of their values.
  const Eigen::Vector3d mid = 0.5 * (g.cell_center({3, 3, 3}) + g.cell_center({4, 3, 3}));
  CHECK(gvfnav::sample_distance(field, mid) ==
        doctest::Approx(0.5 * (field.at({3, 3, 3}) + field.at({4, 3, 3}))).epsilon(1e-12));
}

TEST_CASE("trilinear interpolant is continuous across cell boundaries") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(10, 10, 10);
  gvfnav::Rng rng(17);
  auto field = testutil::field_from_function(
      g, [&](const Eigen::Vector3d&) { return rng.uniform(); });
  for (int k = 0; k < 200; ++k) {
    // Points straddling a lattice plane through cell centers.
    const double x = g.origin.x() + g.resolution * (0.5 + rng.uniform_int(1, 8));
    const Eigen::Vector3d p(x, rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85));
    const Eigen::Vector3d lo = p - Eigen::Vector3d(1e-10, 0, 0);
    const Eigen::Vector3d hi = p + Eigen::Vector3d(1e-10, 0, 0);
    CHECK(std::abs(gvfnav::sample_distance(field, lo) - gvfnav::sample_distance(field, hi)) <
          1e-8);
  }
}

TEST_CASE("sample gradient matches finite differences inside a cell") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(10, 10, 10);
  gvfnav::Rng rng(29);
  auto field = testutil::field_from_function(
      g, [&](const Eigen::Vector3d&) { return rng.uniform(); });
  for (int k = 0; k < 100; ++k) {
    // Stay near interpolation-cell centers so the FD stencil does not cross
    // a lattice plane where the derivative kinks.
    const Eigen::Vector3d p(0.1 + 0.1 * rng.uniform_int(1, 7) + rng.uniform(-0.02, 0.02),
                            0.1 + 0.1 * rng.uniform_int(1, 7) + rng.uniform(-0.02, 0.02),
                            0.1 + 0.1 * rng.uniform_int(1, 7) + rng.uniform(-0.02, 0.02));
    const auto s = gvfnav::sample_distance_with_gradient(field, p);
    CHECK(s.value == doctest::Approx(gvfnav::sample_distance(field, p)).epsilon(1e-14));
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d dp = Eigen::Vector3d::Zero();
      dp(i) = h;
      const double fd = (gvfnav::sample_distance(field, p + dp) -
                         gvfnav::sample_distance(field, p - dp)) /
                        (2 * h);
      CHECK(s.gradient(i) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("sampling outside the interior throws") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(6, 6, 6);
  VoxelGrid grid(g);
  grid.set_occupied({3, 3, 3});
  const auto field = gvfnav::euclidean_distance_transform(grid);
  CHECK(field.sampleable(Eigen::Vector3d(0.3, 0.3, 0.3)));
  CHECK(!field.sampleable(Eigen::Vector3d(0.02, 0.3, 0.3)));
  CHECK_THROWS_AS(gvfnav::sample_distance(field, Eigen::Vector3d(0.02, 0.3, 0.3)),
                  gvfnav::OutOfBoundsError);
  CHECK_THROWS_AS(gvfnav::sample_distance(field, Eigen::Vector3d(5.0, 0.3, 0.3)),
                  gvfnav::OutOfBoundsError);
  const Eigen::Vector3d clamped = field.clamp_to_interior(Eigen::Vector3d(5.0, 0.3, 0.3));
  CHECK(field.sampleable(clamped));
}

TEST_CASE("quadratic fit recovers a linear field exactly") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(12, 12, 12);
  const Eigen::Vector3d coeff(0.7, -1.3, 0.25);
  auto field = testutil::field_from_function(
      g, [&](const Eigen::Vector3d& p) { return 2.0 + coeff.dot(p); });
  gvfnav::Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Vector3d p(rng.uniform(0.35, 0.85), rng.uniform(0.35, 0.85),
                            rng.uniform(0.35, 0.85));
    const Eigen::Vector3d grad = gvfnav::fit_gradient(field, p);
    CHECK((grad - coeff).norm() < 1e-6);
  }
}

TEST_CASE("quadratic fit recovers a quadratic field exactly") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(14, 14, 14);
  Eigen::Matrix3d A;
  A << 1.0, 0.3, -0.2, 0.3, 2.0, 0.5, -0.2, 0.5, 0.8;
  const Eigen::Vector3d b(0.4, -0.9, 1.1);
  auto field = testutil::field_from_function(g, [&](const Eigen::Vector3d& p) {
    return 0.5 * p.dot(A * p) + b.dot(p) + 3.0;
  });
  gvfnav::Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Vector3d p(rng.uniform(0.4, 1.0), rng.uniform(0.4, 1.0), rng.uniform(0.4, 1.0));
    const Eigen::Vector3d expect = A * p + b;
    const Eigen::Vector3d grad = gvfnav::fit_gradient(field, p);
    CHECK((grad - expect).norm() / expect.norm() < 1e-6);
  }
  // Curvature block of theta carries A (in the fit's 1/2-scaled layout).
  const auto fit = gvfnav::fit_quadratic(field, Eigen::Vector3d(0.7, 0.7, 0.7));
  CHECK(fit.theta(4) == doctest::Approx(A(0, 0)).epsilon(1e-6));
  CHECK(fit.theta(5) == doctest::Approx(A(0, 1)).epsilon(1e-6));
  CHECK(fit.theta(7) == doctest::Approx(A(1, 1)).epsilon(1e-6));
}

TEST_CASE("quadratic fit shrinks the window near the boundary and throws past it") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(8, 8, 8);
  auto field = testutil::field_from_function(
      g, [](const Eigen::Vector3d& p) { return p.x(); });
  // One full cell margin: the 5^3 window would clip, the 3^3 window fits.
  const Eigen::Vector3d near_edge = g.cell_center({1, 4, 4});
  const Eigen::Vector3d grad = gvfnav::fit_gradient(field, near_edge);
  CHECK((grad - Eigen::Vector3d(1, 0, 0)).norm() < 1e-6);
  CHECK(gvfnav::fit_quadratic(field, near_edge).window_radius == 1);
  // Corner cell: even the shrunk window clips.
  CHECK_THROWS_AS(gvfnav::fit_quadratic(field, g.cell_center({0, 0, 0})),
                  gvfnav::OutOfBoundsError);
}

TEST_CASE("field binary round trip is exact") {
  gvfnav::Rng rng(31);
  auto grid = testutil::random_occupancy(rng, {9, 11, 7}, 0.08);
  grid.set_occupied({4, 5, 3});
  const auto field = gvfnav::euclidean_distance_transform(grid);
  const auto path = std::filesystem::temp_directory_path() / "gvfnav_field_test.bin";
  gvfnav::save_field(field, path.string());
  const auto back = gvfnav::load_field(path.string());
  CHECK(back.geometry().dims == field.geometry().dims);
  CHECK(back.geometry().resolution == field.geometry().resolution);
  CHECK(back.geometry().origin == field.geometry().origin);
  CHECK(back.values() == field.values());

  // Header layout: 3x u32 dims, f64 resolution, 3x f64 origin, then values.
  std::ifstream in(path.string(), std::ios::binary);
  std::uint32_t d[3];
  in.read(reinterpret_cast<char*>(d), sizeof(d));
  CHECK(static_cast<int>(d[0]) == 9);
  CHECK(static_cast<int>(d[1]) == 11);
  CHECK(static_cast<int>(d[2]) == 7);
  double res;
  in.read(reinterpret_cast<char*>(&res), sizeof(res));
  CHECK(res == field.geometry().resolution);
  in.seekg(0, std::ios::end);
  CHECK(static_cast<std::size_t>(in.tellg()) ==
        3 * sizeof(std::uint32_t) + 4 * sizeof(double) +
            field.values().size() * sizeof(double));
  std::remove(path.string().c_str());
}

TEST_CASE("field slice export writes one row per xy cell") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(6, 5, 4);
  VoxelGrid grid(g);
  grid.set_occupied({2, 2, 1});
  const auto field = gvfnav::euclidean_distance_transform(grid);
  const auto path = std::filesystem::temp_directory_path() / "gvfnav_slice_test.csv";
  gvfnav::export_field_slice_csv(field, 0.15, path.string());
  std::ifstream in(path.string());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,value");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 6 * 5);
  std::remove(path.string().c_str());
}

TEST_CASE("field slice export resamples on a custom spacing") {
  GridGeometry g;
  g.dims = Eigen::Vector3i(6, 5, 4);
  VoxelGrid grid(g);
  grid.set_occupied({2, 2, 1});
  const auto field = gvfnav::euclidean_distance_transform(grid);
  const auto path = std::filesystem::temp_directory_path() / "gvfnav_slice_resample.csv";
  gvfnav::export_field_slice_csv(field, 0.15, path.string(), 0.05);

  std::ifstream in(path.string());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,value");
  int rows = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    if (first) {
      first = false;
      double x, y, v;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) == 3);
      CHECK(x == doctest::Approx(0.101));
      CHECK(y == doctest::Approx(0.101));
      CHECK(v == doctest::Approx(
                     gvfnav::sample_distance(field, Eigen::Vector3d(0.101, 0.101, 0.15))));
    }
  }
  // Strict one-cell interior margin on a 0.6 x 0.5 m layer at 0.05 m pitch.
  CHECK(rows == 8 * 6);
  std::remove(path.string().c_str());
}
