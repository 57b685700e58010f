#include "gvfnav/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gvfnav {

namespace {

const std::vector<std::pair<const char*, double NavConfig::*>>& key_table() {
  static const std::vector<std::pair<const char*, double NavConfig::*>> table = {
      {"K1", &NavConfig::k1},
      {"K2", &NavConfig::k2},
      {"T_p", &NavConfig::t_p},
      {"lambda_s", &NavConfig::lambda_s},
      {"lambda_c", &NavConfig::lambda_c},
      {"d_thr", &NavConfig::d_thr},
      {"r", &NavConfig::r},
      {"resolution", &NavConfig::resolution},
      {"cruise_speed", &NavConfig::cruise_speed},
      {"v_max", &NavConfig::v_max},
      {"a_max", &NavConfig::a_max},
      {"perceive_radius", &NavConfig::perceive_radius},
      {"perceive_hz", &NavConfig::perceive_hz},
      {"control_hz", &NavConfig::control_hz},
      {"horizon", &NavConfig::horizon},
      {"inflation", &NavConfig::inflation},
      {"capture_radius", &NavConfig::capture_radius},
      {"timeout", &NavConfig::timeout},
  };
  return table;
}

}  // namespace

NavConfig config_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  NavConfig cfg;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, member] : key_table()) {
      if (key == name) {
        cfg.*member = value.get<double>();
        known = true;
        break;
      }
    }
    if (!known) throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

std::string config_to_json(const NavConfig& config) {
  nlohmann::json j;
  for (const auto& [name, member] : key_table()) j[name] = config.*member;
  return j.dump(2);
}

NavConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

void save_config(const NavConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << config_to_json(config) << "\n";
}

}  // namespace gvfnav
