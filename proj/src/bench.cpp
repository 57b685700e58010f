#include "gvfnav/bench.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace gvfnav {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

BenchReport run_batch(const SceneSpec& spec, int n_trials, const std::string& disturbance,
                      const NavConfig& config, const std::string& out_dir) {
  if (n_trials < 1) throw std::invalid_argument("need at least one trial");

  BenchReport report;
  for (int k = 0; k < n_trials; ++k) {
    SceneSpec trial_spec = spec;
    trial_spec.seed = spec.seed + static_cast<uint64_t>(k);

    TrialRecord rec;
    rec.seed = trial_spec.seed;
    try {
      const GeneratedScene gen = generate_scene(trial_spec);
      const double t_hint =
          1.4 * (gen.goal - gen.start).norm() / config.cruise_speed + 4.0;
      Rng schedule_rng(trial_spec.seed ^ 0x5DEECE66Dull);
      const DisturbanceSchedule schedule =
          make_disturbance_schedule(disturbance, t_hint, schedule_rng);

      const MissionReport mission =
          run_mission(gen.scene, gen.start, gen.goal, schedule, config, trial_spec.seed);
      rec.success = mission.success;
      rec.reason = mission.reason;
      rec.travel_time = mission.travel_time;
      rec.path_length = mission.path_length;
      rec.replan_count = mission.replan_count;
      rec.replan_failures = mission.replan_failures;
      rec.collisions = mission.collisions;
      rec.density_total = gen.density_total;
      rec.density_band = gen.density_band;
      rec.mean_cycle_ms = mission.mean_cycle_ms();
      rec.std_cycle_ms = mission.std_cycle_ms();

      if (!out_dir.empty())
        write_trajectory_csv(mission,
                             out_dir + "/trial_" + std::to_string(trial_spec.seed) + ".csv");
    } catch (const std::exception& e) {
      rec.success = false;
      rec.reason = e.what();
    }
    report.trials.push_back(std::move(rec));
  }

  std::vector<double> times, lengths, cycle_means;
  for (const auto& t : report.trials) {
    report.successes += t.success ? 1 : 0;
    report.mean_density_total += t.density_total;
    report.mean_density_band += t.density_band;
    if (t.success) {
      times.push_back(t.travel_time);
      lengths.push_back(t.path_length);
    }
    if (t.replan_count > 0) cycle_means.push_back(t.mean_cycle_ms);
  }
  report.success_rate = static_cast<double>(report.successes) / n_trials;
  report.mean_travel_time = mean_of(times);
  report.std_travel_time = sample_std(times);
  report.mean_path_length = mean_of(lengths);
  report.std_path_length = sample_std(lengths);
  report.mean_density_total /= n_trials;
  report.mean_density_band /= n_trials;
  report.mean_cycle_ms = mean_of(cycle_means);
  report.std_cycle_ms = sample_std(cycle_means);
  return report;
}

std::string bench_report_to_json(const BenchReport& report) {
  nlohmann::json results;
  results["n_trials"] = report.trials.size();
  results["successes"] = report.successes;
  results["success_rate"] = report.success_rate;
  results["mean_travel_time_s"] = report.mean_travel_time;
  results["std_travel_time_s"] = report.std_travel_time;
  results["mean_path_length_m"] = report.mean_path_length;
  results["std_path_length_m"] = report.std_path_length;
  results["mean_density_total"] = report.mean_density_total;
  results["mean_density_band"] = report.mean_density_band;
  auto& trials = results["trials"] = nlohmann::json::array();

  nlohmann::json timing;
  timing["mean_cycle_ms"] = report.mean_cycle_ms;
  timing["std_cycle_ms"] = report.std_cycle_ms;
  auto& timing_trials = timing["trials"] = nlohmann::json::array();

  for (const auto& t : report.trials) {
    trials.push_back({{"seed", t.seed},
                      {"success", t.success},
                      {"reason", t.reason},
                      {"travel_time_s", t.travel_time},
                      {"path_length_m", t.path_length},
                      {"replan_count", t.replan_count},
                      {"replan_failures", t.replan_failures},
                      {"collisions", t.collisions},
                      {"density_total", t.density_total},
                      {"density_band", t.density_band}});
    timing_trials.push_back({{"seed", t.seed},
                             {"mean_cycle_ms", t.mean_cycle_ms},
                             {"std_cycle_ms", t.std_cycle_ms}});
  }

  nlohmann::json j;
  j["results"] = std::move(results);
  j["timing"] = std::move(timing);
  return j.dump(2);
}

}  // namespace gvfnav
