#include <doctest.h>

#include <gvfnav/config.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>

using gvfnav::NavConfig;

TEST_CASE("config defaults mirror the planner parameter table") {
  const NavConfig c;
  CHECK(c.k1 == 1.5);
  CHECK(c.k2 == 1.5);
  CHECK(c.t_p == 0.2);
  CHECK(c.lambda_s == 5.0);
  CHECK(c.lambda_c == 10.0);
  CHECK(c.d_thr == 0.35);
  CHECK(c.r == 1.0);
  CHECK(c.resolution == 0.1);
  CHECK(c.cruise_speed == 2.0);
}

TEST_CASE("config json round trip preserves every field") {
  NavConfig c;
  c.k1 = 2.5;
  c.t_p = 0.25;
  c.lambda_c = 42.0;
  c.v_max = 3.0;
  c.perceive_radius = 6.5;
  c.timeout = 90.0;
  const NavConfig back = gvfnav::config_from_json(gvfnav::config_to_json(c));
  CHECK(back.k1 == c.k1);
  CHECK(back.k2 == c.k2);
  CHECK(back.t_p == c.t_p);
  CHECK(back.lambda_s == c.lambda_s);
  CHECK(back.lambda_c == c.lambda_c);
  CHECK(back.d_thr == c.d_thr);
  CHECK(back.r == c.r);
  CHECK(back.resolution == c.resolution);
  CHECK(back.cruise_speed == c.cruise_speed);
  CHECK(back.v_max == c.v_max);
  CHECK(back.a_max == c.a_max);
  CHECK(back.perceive_radius == c.perceive_radius);
  CHECK(back.perceive_hz == c.perceive_hz);
  CHECK(back.control_hz == c.control_hz);
  CHECK(back.horizon == c.horizon);
  CHECK(back.inflation == c.inflation);
  CHECK(back.capture_radius == c.capture_radius);
  CHECK(back.timeout == c.timeout);
}

TEST_CASE("partial configs keep defaults for absent keys") {
  const NavConfig c = gvfnav::config_from_json(R"({"K1": 2.0, "d_thr": 0.5})");
  CHECK(c.k1 == 2.0);
  CHECK(c.d_thr == 0.5);
  CHECK(c.k2 == 1.5);
  CHECK(c.cruise_speed == 2.0);
}

TEST_CASE("the json schema uses the documented key names") {
  const auto j = nlohmann::json::parse(gvfnav::config_to_json(NavConfig{}));
  for (const char* key : {"K1", "K2", "T_p", "lambda_s", "lambda_c", "d_thr", "r",
                          "resolution", "cruise_speed", "v_max", "a_max", "perceive_radius",
                          "horizon", "inflation", "capture_radius", "timeout"})
    CHECK(j.contains(key));
}

TEST_CASE("unknown keys are rejected loudly") {
  CHECK_THROWS_AS(gvfnav::config_from_json(R"({"K1": 2.0, "K3": 1.0})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(gvfnav::config_from_json(R"({"cruise": 2.0})"), std::invalid_argument);
}

TEST_CASE("config file round trip") {
  NavConfig c;
  c.horizon = 9.0;
  const auto path = std::filesystem::temp_directory_path() / "gvfnav_config_test.json";
  gvfnav::save_config(c, path.string());
  const NavConfig back = gvfnav::load_config(path.string());
  CHECK(back.horizon == 9.0);
  std::remove(path.string().c_str());
}
