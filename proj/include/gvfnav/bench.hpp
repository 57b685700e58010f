#ifndef GVFNAV_BENCH_HPP
#define GVFNAV_BENCH_HPP

#include <string>
#include <vector>

#include "gvfnav/scene_gen.hpp"

namespace gvfnav {

struct TrialRecord {
  uint64_t seed = 0;
  bool success = false;
  std::string reason;
  double travel_time = 0.0;
  double path_length = 0.0;
  int replan_count = 0;
  int replan_failures = 0;
  int collisions = 0;
  double density_total = 0.0;
  double density_band = 0.0;
  double mean_cycle_ms = 0.0;  // wall clock; excluded from determinism checks
  double std_cycle_ms = 0.0;
};

// Per-trial records plus aggregates recomputable from them. Travel time and
// distance aggregate over successful trials (failures have no meaningful
// completion metrics); cycle timing aggregates over every trial.
struct BenchReport {
  std::vector<TrialRecord> trials;
  int successes = 0;
  double success_rate = 0.0;
  double mean_travel_time = 0.0, std_travel_time = 0.0;
  double mean_path_length = 0.0, std_path_length = 0.0;
  double mean_density_total = 0.0, mean_density_band = 0.0;
  double mean_cycle_ms = 0.0, std_cycle_ms = 0.0;
};

// One mission per trial on a fresh scene seeded with spec.seed + trial
// index; disturbance: "none", "wind", "drag", or "mixed". Mission errors
// are recorded as failed trials, never aborting the batch. When out_dir is
// nonempty, each trajectory log lands there as trial_<seed>.csv.
BenchReport run_batch(const SceneSpec& spec, int n_trials, const std::string& disturbance,
                      const NavConfig& config = {}, const std::string& out_dir = {});

// Deterministic fields under "results", wall-clock timing under "timing".
std::string bench_report_to_json(const BenchReport& report);

}  // namespace gvfnav

#endif  // GVFNAV_BENCH_HPP
