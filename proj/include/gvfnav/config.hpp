#ifndef GVFNAV_CONFIG_HPP
#define GVFNAV_CONFIG_HPP

#include <string>

namespace gvfnav {

// Run-time knobs for the closed-loop pipeline. The first block mirrors the
// planner parameter table (JSON keys K1, K2, T_p, lambda_s, lambda_c,
// d_thr, r, resolution, cruise_speed); the rest shape the simulator.
struct NavConfig {
  double k1 = 1.5;            // tangential field gain
  double k2 = 1.5;            // normal field gain
  double t_p = 0.2;           // replanning interval, s
  double lambda_s = 5.0;      // smoothness weight
  double lambda_c = 10.0;     // collision weight
  double d_thr = 0.35;        // obstacle safety threshold, m
  double r = 1.0;             // convergence bandwidth, m
  double resolution = 0.1;    // grid resolution, m
  double cruise_speed = 2.0;  // commanded speed, m/s

  double v_max = 2.5;           // speed ceiling, m/s
  double a_max = 3.0;           // acceleration slew limit, m/s^2
  double perceive_radius = 5.0; // idealized sensor range, m
  double perceive_hz = 20.0;
  double control_hz = 100.0;
  double horizon = 7.0;         // local-goal lookahead, m
  double inflation = 0.2;       // planner dilation radius, m
  double capture_radius = 0.3;  // goal acceptance, m
  double timeout = 120.0;       // mission budget, s
};

// Partial JSON: absent keys keep their defaults. Unknown keys are rejected
// so typos fail loudly.
NavConfig config_from_json(const std::string& text);
std::string config_to_json(const NavConfig& config);
NavConfig load_config(const std::string& path);
void save_config(const NavConfig& config, const std::string& path);

}  // namespace gvfnav

#endif  // GVFNAV_CONFIG_HPP
