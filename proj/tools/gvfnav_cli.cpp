// Command-line front end: scene generation, single missions, benchmark
// batches, and field-slice exports for plotting.  All heavy lifting lives in
// the library; this file is flag parsing and file plumbing.

#include <gvfnav/bench.hpp>
#include <gvfnav/config.hpp>
#include <gvfnav/distance_field.hpp>
#include <gvfnav/guiding_field.hpp>
#include <gvfnav/navigator.hpp>
#include <gvfnav/scene.hpp>
#include <gvfnav/scene_gen.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;

Eigen::Vector3d to_vec3(const std::vector<double>& v) {
  return {v[0], v[1], v[2]};
}

gvfnav::NavConfig load_config_or_default(const std::string& path) {
  return path.empty() ? gvfnav::NavConfig{} : gvfnav::load_config(path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Path points from a CSV: either a bare x,y,z table or a mission trajectory
// log whose first column is time (header "t,x,y,z,...").
std::vector<Eigen::Vector3d> read_path_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<Eigen::Vector3d> points;
  std::string line;
  bool skip_first_column = false;
  bool header_checked = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header_checked) {
      header_checked = true;
      if (line.rfind("t,", 0) == 0) {
        skip_first_column = true;
        continue;
      }
      if (line.rfind("x,", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::vector<double> cols;
    std::string cell;
    while (std::getline(row, cell, ',')) cols.push_back(std::stod(cell));
    const size_t base = skip_first_column ? 1 : 0;
    if (cols.size() < base + 3)
      throw std::runtime_error("bad trajectory row: " + line);
    points.emplace_back(cols[base], cols[base + 1], cols[base + 2]);
  }
  if (points.size() < 3) throw std::runtime_error("trajectory has fewer than 3 points");
  return points;
}

int cmd_scene_gen(const std::string& style, double density,
                  const std::vector<double>& extent, uint64_t seed,
                  const std::string& config_path, const std::string& out) {
  gvfnav::SceneSpec spec;
  spec.style = style;
  spec.target_density = density;
  spec.extent = to_vec3(extent);
  spec.seed = seed;
  spec.resolution = load_config_or_default(config_path).resolution;

  const gvfnav::GeneratedScene generated = gvfnav::generate_scene(spec);
  gvfnav::save_scene(generated.scene, out);

  json summary;
  summary["scene"] = out;
  summary["start"] = {generated.start.x(), generated.start.y(), generated.start.z()};
  summary["goal"] = {generated.goal.x(), generated.goal.y(), generated.goal.z()};
  summary["density_total"] = generated.density_total;
  summary["density_band"] = generated.density_band;
  summary["rounds"] = generated.rounds;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_run(const std::string& scene_path, const std::vector<double>& start,
            const std::vector<double>& goal, const std::string& schedule_path,
            uint64_t seed, const std::string& config_path, const std::string& out_dir) {
  const gvfnav::Scene scene = gvfnav::load_scene(scene_path);
  gvfnav::DisturbanceSchedule schedule;
  if (!schedule_path.empty()) schedule = gvfnav::load_schedule(schedule_path);
  const gvfnav::NavConfig config = load_config_or_default(config_path);

  gvfnav::MissionReport report =
      gvfnav::run_mission(scene, to_vec3(start), to_vec3(goal), schedule, config, seed);
  report.seed = seed;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string stem = out_dir + "/trial_" + std::to_string(seed);
    gvfnav::write_trajectory_csv(report, stem + ".csv");
    write_text(stem + ".json", gvfnav::mission_report_to_json(report));
  }
  std::cout << gvfnav::mission_report_to_json(report) << "\n";
  return report.success ? 0 : 1;
}

int cmd_bench(const std::string& style, double density, const std::vector<double>& extent,
              uint64_t seed, int trials, const std::string& disturbance,
              const std::string& config_path, const std::string& out,
              const std::string& out_dir) {
  gvfnav::SceneSpec spec;
  spec.style = style;
  spec.target_density = density;
  spec.extent = to_vec3(extent);
  spec.seed = seed;
  const gvfnav::NavConfig config = load_config_or_default(config_path);
  spec.resolution = config.resolution;

  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  const gvfnav::BenchReport report =
      gvfnav::run_batch(spec, trials, disturbance, config, out_dir);
  const std::string text = gvfnav::bench_report_to_json(report);
  if (!out.empty()) write_text(out, text);
  std::cout << text << "\n";
  return 0;
}

int cmd_field_slice(const std::string& scene_path, const std::string& traj_path, double z,
                    double spacing, const std::string& config_path, const std::string& out) {
  const gvfnav::NavConfig config = load_config_or_default(config_path);
  if (!traj_path.empty()) {
    gvfnav::PathPoints path;
    path.points = read_path_csv(traj_path);
    gvfnav::GuidingFieldParams params;
    params.k1 = config.k1;
    params.k2 = config.k2;
    params.r = config.r;
    params.resolution = config.resolution;
    const gvfnav::GuidingField field = gvfnav::build_guiding_field(path, params);
    gvfnav::export_guide_slice_csv(field, z, spacing, out);
  } else {
    const gvfnav::Scene scene = gvfnav::load_scene(scene_path);
    const gvfnav::DistanceField esdf =
        gvfnav::euclidean_distance_transform(gvfnav::rasterize_scene(scene));
    gvfnav::export_field_slice_csv(esdf, z, out, spacing);
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guiding-vector-field navigation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config (K1, K2, T_p, lambda_s, ...)")
      ->check(CLI::ExistingFile);

  // scene gen
  auto* scene = app.add_subcommand("scene", "Scene utilities");
  scene->require_subcommand(1);
  auto* gen = scene->add_subcommand("gen", "Generate a random scene");
  std::string style = "pillars-2d";
  double density = 0.30;
  std::vector<double> extent = {30.0, 10.0, 3.0};
  uint64_t seed = 0;
  std::string scene_out = "scene.json";
  gen->add_option("--style", style, "pillars-2d or irregular-3d");
  gen->add_option("--density", density, "target occupied-voxel fraction");
  gen->add_option("--extent", extent, "workspace size, meters")->expected(3);
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", scene_out, "output scene JSON");

  // run
  auto* mission = app.add_subcommand("run", "Fly one closed-loop mission");
  std::string run_scene, run_schedule, run_out_dir;
  std::vector<double> start = {0, 0, 0}, goal = {0, 0, 0};
  uint64_t run_seed = 0;
  mission->add_option("--scene", run_scene, "scene JSON")->required()->check(CLI::ExistingFile);
  mission->add_option("--start", start, "start position")->expected(3)->required();
  mission->add_option("--goal", goal, "goal position")->expected(3)->required();
  mission->add_option("--schedule", run_schedule, "disturbance schedule JSON")
      ->check(CLI::ExistingFile);
  mission->add_option("--seed", run_seed, "mission seed (log naming)");
  mission->add_option("--out-dir", run_out_dir, "directory for trajectory CSV and report");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a seeded benchmark batch");
  std::string bench_style = "pillars-2d", bench_disturbance = "none";
  std::string bench_out, bench_out_dir;
  double bench_density = 0.30;
  std::vector<double> bench_extent = {30.0, 10.0, 3.0};
  uint64_t bench_seed = 0;
  int trials = 20;
  bench->add_option("--style", bench_style, "pillars-2d or irregular-3d");
  bench->add_option("--density", bench_density, "target occupied-voxel fraction");
  bench->add_option("--extent", bench_extent, "workspace size, meters")->expected(3);
  bench->add_option("--seed", bench_seed, "base seed; trial k uses seed + k");
  bench->add_option("--trials", trials, "number of missions");
  bench->add_option("--disturbance", bench_disturbance, "none, wind, drag, or mixed")
      ->check(CLI::IsMember({"none", "wind", "drag", "mixed"}));
  bench->add_option("--out", bench_out, "report JSON path");
  bench->add_option("--out-dir", bench_out_dir, "directory for per-trial trajectory CSVs");

  // field slice
  auto* field = app.add_subcommand("field", "Field export utilities");
  field->require_subcommand(1);
  auto* slice = field->add_subcommand("slice", "Export a horizontal field slice as CSV");
  std::string slice_scene, slice_traj, slice_out = "slice.csv";
  double slice_z = 1.5, slice_spacing = 0.25;
  auto* scene_opt = slice->add_option("--scene", slice_scene, "scene JSON: export its ESDF slice")
                        ->check(CLI::ExistingFile);
  auto* traj_opt = slice->add_option("--traj", slice_traj,
                                     "trajectory CSV: export the guiding-field slice")
                       ->check(CLI::ExistingFile);
  scene_opt->excludes(traj_opt);
  slice->add_option("--z", slice_z, "slice height, meters");
  slice->add_option("--spacing", slice_spacing, "sample spacing for guiding-field slices");
  slice->add_option("--out", slice_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_scene_gen(style, density, extent, seed, config_path, scene_out);
    if (mission->parsed())
      return cmd_run(run_scene, start, goal, run_schedule, run_seed, config_path, run_out_dir);
    if (bench->parsed())
      return cmd_bench(bench_style, bench_density, bench_extent, bench_seed, trials,
                       bench_disturbance, config_path, bench_out, bench_out_dir);
    if (slice->parsed()) {
      if (slice_scene.empty() && slice_traj.empty()) {
        std::cerr << "field slice needs --scene or --traj\n";
        return 1;
      }
      return cmd_field_slice(slice_scene, slice_traj, slice_z, slice_spacing, config_path,
                             slice_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
