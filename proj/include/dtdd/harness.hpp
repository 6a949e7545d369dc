#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dtdd/baselines.hpp"
#include "dtdd/game.hpp"
#include "dtdd/interference.hpp"
#include "dtdd/topology.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

enum class Scheme { kSip, kApp, kOpt, kStdd, kSwitch };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);
std::vector<Scheme> parse_scheme_list(std::string_view csv);

struct ScenarioConfig {
  TopologyConfig topology;
  // c1 = c2 = c for every entry.
  std::vector<double> c_values{0.3};
  // Users per cell to sweep; empty means topology.users_per_cell only.
  std::vector<int> k_values;
  double tx_power_dbm = 23.0;  // alpha0 = alpha1
  double noise_db = -10.0;     // noise relative to mean per-user DL received power
  // K used when calibrating the noise; the noise is held fixed per block
  // across a K sweep. Defaults to topology.users_per_cell.
  std::optional<int> noise_reference_k;
  int slots_per_frame = 10;
  int frames = 20;
  int stats_window = 50;
  std::vector<Scheme> schemes{Scheme::kSip, Scheme::kApp, Scheme::kOpt, Scheme::kStdd,
                              Scheme::kSwitch};
  std::vector<std::uint64_t> seeds{1};
  SolverOptions solver;
  SwitchpointScope switchpoint_scope = SwitchpointScope::kPerCell;
  bool keep_slots = false;
  bool keep_equilibria = false;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct RunRecord {
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::kSip;
  double c = 0.0;
  int k = 0;
  double avg_network_wsr = 0.0;
  std::vector<double> per_cell_wsr;  // mean over slots and frames
  double wallclock_s = 0.0;
  std::vector<double> frame_avg_wsr; // mean true network WSR of each frame
};

struct SlotRecord {
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::kSip;
  double c = 0.0;
  int k = 0;
  int frame = 0;
  int slot = 0;
  std::string modes;
  double network_wsr = 0.0;
};

struct EquilibriumRecord {
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::kSip;
  double c = 0.0;
  int k = 0;
  int frame = 0;
  EquilibriumReport report;
};

struct CdfRow {
  Scheme scheme = Scheme::kSip;
  double c = 0.0;
  int k = 0;
  double quantile = 0.0;
  double wsr = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<CdfRow> cdf;
  std::vector<SlotRecord> slots;
  std::vector<EquilibriumRecord> equilibria;
};

// Per-drop state of one (seed, c, K) run.
struct FrameState {
  int frame = 0;
  Deployment dep;
  ChannelSet ch;
  WeightSet weights;
  ReferenceInterference ref;
  PowerBudget budget;
  InterferenceParams params;
  std::vector<int> switch_points;  // carried across frames
};

struct FrameOutcome {
  // slot_wsr[scheme position in cfg.schemes][slot]
  std::vector<std::vector<double>> slot_wsr;
  std::vector<std::vector<double>> cell_wsr;  // summed over slots
  std::vector<std::vector<ModeVector>> modes;
  std::vector<double> wallclock_s;
  std::vector<std::optional<EquilibriumReport>> equilibria;
};

// sigma2 = 10^(noise_db/10) * mean_k H(n_k, k) * alpha1 / reference_k; both
// power limits are taken from the template.
PowerBudget calibrate_noise(const Deployment& dep, const ChannelSet& ch,
                            const PowerBudget& budget_template, int reference_k,
                            double noise_db = -10.0);

WeightSet draw_weights(int num_users, std::mt19937_64& rng);

// Plays every configured scheme on one frame and scores each slot with the
// true weighted sum-rate (instantaneous interference).
FrameOutcome run_frame(const ScenarioConfig& cfg, FrameState& state, std::uint64_t seed);

ExperimentResult run_experiment(const ScenarioConfig& cfg);

// Inverse empirical CDF at `points` evenly spaced quantiles in [0, 1].
std::vector<double> empirical_quantiles(std::vector<double> samples, int points = 101);

void write_summary_csv(std::ostream& os, const std::vector<RunRecord>& records);
void write_cdf_csv(std::ostream& os, const std::vector<CdfRow>& rows);
void write_slots_csv(std::ostream& os, const std::vector<SlotRecord>& slots);

}  // namespace dtdd
