#include <doctest.h>

#include <gvfnav/errors.hpp>
#include <gvfnav/scene.hpp>
#include <gvfnav/scene_gen.hpp>

#include <cmath>

using gvfnav::GeneratedScene;
using gvfnav::SceneSpec;

namespace {

// Independent copy of the footprint-gap rule for cross-checking.
struct Rect {
  double x0, y0, x1, y1;
};

Rect box_rect(const gvfnav::Obstacle& ob) {
  const auto& box = std::get<gvfnav::BoxObstacle>(ob);
  return {box.min.x(), box.min.y(), box.max.x(), box.max.y()};
}

double gap(const Rect& a, const Rect& b) {
  const double dx = std::max({a.x0 - b.x1, b.x0 - a.x1, 0.0});
  const double dy = std::max({a.y0 - b.y1, b.y0 - a.y1, 0.0});
  return std::hypot(dx, dy);
}

}  // namespace

TEST_CASE("pillar scenes hit the target density with clear corridors") {
  SceneSpec spec;
  spec.extent = Eigen::Vector3d(30, 10, 3);
  spec.style = "pillars-2d";
  spec.target_density = 0.30;
  spec.seed = 7;
  const GeneratedScene gen = gvfnav::generate_scene(spec);

  CHECK(gen.start == Eigen::Vector3d(1.0, 5.0, 1.5));
  CHECK(gen.goal == Eigen::Vector3d(29.0, 5.0, 1.5));
  CHECK(gen.rounds >= 1);
  CHECK(std::abs(gen.density_total - 0.30) <= 0.03);
  CHECK(gen.density_band >= gen.density_total - 1e-12);

  REQUIRE(!gen.scene.obstacles.empty());
  for (size_t i = 0; i < gen.scene.obstacles.size(); ++i) {
    const auto& box = std::get<gvfnav::BoxObstacle>(gen.scene.obstacles[i]);
    // Full-height pillars, inset from the walls.
    CHECK(box.min.z() == 0.0);
    CHECK(box.max.z() == 3.0);
    CHECK(box.min.x() >= 0.2 - 1e-9);
    CHECK(box.min.y() >= 0.2 - 1e-9);
    CHECK(box.max.x() <= 30.0 - 0.2 + 1e-9);
    CHECK(box.max.y() <= 10.0 - 0.2 + 1e-9);
    const double w = box.max.x() - box.min.x();
    const double h = box.max.y() - box.min.y();
    CHECK(w >= 2.4 - 1e-9);
    CHECK(w <= 4.0 + 1e-9);
    CHECK(h >= 2.4 - 1e-9);
    CHECK(h <= 4.0 + 1e-9);
    // Every passage stays wide enough to track at cruise.
    for (size_t j = i + 1; j < gen.scene.obstacles.size(); ++j)
      CHECK(gap(box_rect(gen.scene.obstacles[i]), box_rect(gen.scene.obstacles[j])) >=
            1.2 - 1e-9);
  }

  // The 1 m endpoint spheres stay free: every occupied cell center is at
  // least 1 m from both endpoints.
  const auto grid = gvfnav::rasterize_scene(gen.scene);
  const auto& g = grid.geometry();
  for (int x = 0; x < g.dims.x(); ++x)
    for (int y = 0; y < g.dims.y(); ++y)
      for (int z = 0; z < g.dims.z(); ++z) {
        if (!grid.occupied({x, y, z})) continue;
        const Eigen::Vector3d c = g.cell_center({x, y, z});
        CHECK((c - gen.start).norm() >= 1.0 - 1e-9);
        CHECK((c - gen.goal).norm() >= 1.0 - 1e-9);
      }
}

TEST_CASE("target density zero keeps only the forced obstacles") {
  SceneSpec spec;
  spec.extent = Eigen::Vector3d(12, 6, 3);
  spec.target_density = 0.0;
  spec.seed = 11;
  spec.forced.push_back(
      gvfnav::BoxObstacle{Eigen::Vector3d(5.5, 2.5, 0.0), Eigen::Vector3d(6.5, 3.5, 3.0)});
  const GeneratedScene gen = gvfnav::generate_scene(spec);
  REQUIRE(gen.scene.obstacles.size() == 1);
  CHECK(gen.rounds == 1);

  // Reported density equals the rasterized fraction of the forced pillar.
  const auto grid = gvfnav::rasterize_scene(gen.scene);
  CHECK(gen.density_total ==
        doctest::Approx(static_cast<double>(grid.occupied_count()) /
                        grid.geometry().num_cells()));
  CHECK(gen.density_total > 0.0);
}

TEST_CASE("an empty spec yields an empty scene") {
  SceneSpec spec;
  spec.extent = Eigen::Vector3d(12, 6, 3);
  spec.target_density = 0.0;
  const GeneratedScene gen = gvfnav::generate_scene(spec);
  CHECK(gen.scene.obstacles.empty());
  CHECK(gen.density_total == 0.0);
  CHECK(gen.density_band == 0.0);
}

TEST_CASE("scene generation is deterministic in the seed") {
  SceneSpec spec;
  spec.extent = Eigen::Vector3d(14, 8, 3);
  spec.target_density = 0.25;
  spec.seed = 99;
  const auto a = gvfnav::generate_scene(spec);
  const auto b = gvfnav::generate_scene(spec);
  CHECK(gvfnav::scene_to_json(a.scene) == gvfnav::scene_to_json(b.scene));
  CHECK(a.density_total == b.density_total);

  spec.seed = 100;
  const auto c = gvfnav::generate_scene(spec);
  CHECK(gvfnav::scene_to_json(a.scene) != gvfnav::scene_to_json(c.scene));
}

TEST_CASE("irregular-3d scenes mix primitives and respect the density window") {
  SceneSpec spec;
  spec.extent = Eigen::Vector3d(12, 8, 3);
  spec.style = "irregular-3d";
  spec.target_density = 0.10;
  spec.seed = 3;
  const GeneratedScene gen = gvfnav::generate_scene(spec);
  CHECK(std::abs(gen.density_total - 0.10) <= 0.03);
  CHECK(!gen.scene.obstacles.empty());

  const auto grid = gvfnav::rasterize_scene(gen.scene);
  const auto& g = grid.geometry();
  for (int x = 0; x < g.dims.x(); ++x)
    for (int y = 0; y < g.dims.y(); ++y)
      for (int z = 0; z < g.dims.z(); ++z) {
        if (!grid.occupied({x, y, z})) continue;
        const Eigen::Vector3d c = g.cell_center({x, y, z});
        CHECK((c - gen.start).norm() >= 1.0 - 1e-9);
        CHECK((c - gen.goal).norm() >= 1.0 - 1e-9);
      }
}

TEST_CASE("spec validation and impossible densities") {
  SceneSpec spec;
  spec.target_density = 0.7;
  CHECK_THROWS_AS(gvfnav::generate_scene(spec), std::invalid_argument);

  spec.target_density = 0.3;
  spec.style = "maze";
  CHECK_THROWS_AS(gvfnav::generate_scene(spec), std::invalid_argument);

  spec = SceneSpec{};
  spec.extent = Eigen::Vector3d(0.2, 1.0, 1.0);
  CHECK_THROWS_AS(gvfnav::generate_scene(spec), std::invalid_argument);

  // The endpoint spheres leave no room for pillars here, so the target can
  // never be reached and the rejection loop must give up.
  spec = SceneSpec{};
  spec.extent = Eigen::Vector3d(4, 3, 3);
  spec.target_density = 0.58;
  spec.seed = 1;
  CHECK_THROWS_AS(gvfnav::generate_scene(spec), gvfnav::SceneGenerationError);
}

TEST_CASE("disturbance schedule kinds, caps, and determinism") {
  gvfnav::Rng rng(5);
  const auto none = gvfnav::make_disturbance_schedule("none", 20.0, rng);
  CHECK(none.events.empty());

  gvfnav::Rng rng_w(5);
  const auto wind = gvfnav::make_disturbance_schedule("wind", 20.0, rng_w);
  REQUIRE(wind.events.size() == 3);
  for (const auto& e : wind.events) {
    CHECK(e.kind == gvfnav::DisturbanceEvent::Kind::kWind);
    CHECK(e.vec.norm() <= 1.5 + 1e-9);
    CHECK(e.t_start >= 1.0);
    CHECK(e.t_end > e.t_start);
  }
  // Gusts never overlap, so the instantaneous wind stays within the cap.
  for (size_t i = 0; i < wind.events.size(); ++i)
    for (size_t j = i + 1; j < wind.events.size(); ++j) {
      const auto& a = wind.events[i];
      const auto& b = wind.events[j];
      CHECK((a.t_end <= b.t_start || b.t_end <= a.t_start));
    }

  gvfnav::Rng rng_d(5);
  const auto drag = gvfnav::make_disturbance_schedule("drag", 20.0, rng_d);
  REQUIRE(drag.events.size() == 2);
  for (const auto& e : drag.events) {
    CHECK(e.kind == gvfnav::DisturbanceEvent::Kind::kDrag);
    CHECK(e.vec.z() == 0.0);
    CHECK(e.vec.norm() >= 1.0 - 1e-9);
    CHECK(e.vec.norm() <= 2.0 + 1e-9);
  }
  CHECK(drag.events[0].t_start < drag.events[1].t_start);

  gvfnav::Rng rng_m(5);
  const auto mixed = gvfnav::make_disturbance_schedule("mixed", 20.0, rng_m);
  CHECK(mixed.events.size() == 4);

  gvfnav::Rng r1(42), r2(42);
  const auto s1 = gvfnav::make_disturbance_schedule("mixed", 18.0, r1);
  const auto s2 = gvfnav::make_disturbance_schedule("mixed", 18.0, r2);
  REQUIRE(s1.events.size() == s2.events.size());
  for (size_t i = 0; i < s1.events.size(); ++i) {
    CHECK(s1.events[i].t_start == s2.events[i].t_start);
    CHECK(s1.events[i].vec == s2.events[i].vec);
  }

  gvfnav::Rng rng_bad(1);
  CHECK_THROWS_AS(gvfnav::make_disturbance_schedule("hail", 20.0, rng_bad),
                  std::invalid_argument);
}
