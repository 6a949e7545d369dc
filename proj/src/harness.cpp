#include "dtdd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "dtdd/error.hpp"
#include "dtdd/rate.hpp"

namespace dtdd {
namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), tag};
  return std::mt19937_64(seq);
}

constexpr std::uint32_t kWeightTag = 0x77676874U;
constexpr std::uint32_t kSlotTag = 0x736c6f74U;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct RunKey {
  std::uint64_t seed;
  double c;
  int k;
};

struct RunOutput {
  std::vector<RunRecord> records;
  std::vector<SlotRecord> slots;
  std::vector<EquilibriumRecord> equilibria;
};

RunOutput run_one(const ScenarioConfig& cfg, const RunKey& key) {
  TopologyConfig topo = cfg.topology;
  topo.users_per_cell = key.k;
  topo.rng_seed = key.seed;
  const int window = cfg.stats_window;

  const Deployment dep0 = redraw_users(topo, 0);
  const ChannelSet ch0 = generate_channels(dep0, topo);
  ChannelStatsAccumulator acc(dep0);
  acc.add(ch0);
  for (int w = 1; w < window; ++w) acc.add(generate_channels(redraw_users(topo, static_cast<std::uint64_t>(w)), topo));
  const ChannelStats stats = acc.finish();

  const double alpha = dbm_to_watts(cfg.tx_power_dbm);
  const PowerBudget tmpl{alpha, alpha, 1.0};
  const int ref_k = cfg.noise_reference_k.value_or(cfg.topology.users_per_cell);

  FrameState state;
  state.params = InterferenceParams{key.c, key.c};
  state.budget = calibrate_noise(dep0, ch0, tmpl, ref_k, cfg.noise_db);
  state.ref = reference_interference(stats, state.params, state.budget, key.k);

  const std::size_t n_schemes = cfg.schemes.size();
  const int n_cells = topo.num_cells;
  RunOutput out;
  std::vector<RunRecord> recs(n_schemes);
  for (std::size_t s = 0; s < n_schemes; ++s) {
    recs[s].seed = key.seed;
    recs[s].scheme = cfg.schemes[s];
    recs[s].c = key.c;
    recs[s].k = key.k;
    recs[s].per_cell_wsr.assign(static_cast<std::size_t>(n_cells), 0.0);
  }

  for (int f = 0; f < cfg.frames; ++f) {
    state.frame = f;
    state.dep = redraw_users(topo, static_cast<std::uint64_t>(window + f));
    state.ch = generate_channels(state.dep, topo);
    auto wrng = stream(key.seed, static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(key.k), kWeightTag);
    state.weights = draw_weights(state.dep.num_users(), wrng);

    FrameOutcome fo;
    try {
      fo = run_frame(cfg, state, key.seed);
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " (frame " + std::to_string(f) + ")");
    }

    for (std::size_t s = 0; s < n_schemes; ++s) {
      const auto& slots = fo.slot_wsr[s];
      double frame_sum = 0.0;
      for (double v : slots) frame_sum += v;
      recs[s].frame_avg_wsr.push_back(frame_sum / static_cast<double>(slots.size()));
      recs[s].wallclock_s += fo.wallclock_s[s];
      for (int n = 0; n < n_cells; ++n)
        recs[s].per_cell_wsr[static_cast<std::size_t>(n)] += fo.cell_wsr[s][static_cast<std::size_t>(n)];
      if (cfg.keep_slots) {
        for (std::size_t t = 0; t < slots.size(); ++t)
          out.slots.push_back({key.seed, cfg.schemes[s], key.c, key.k, f, static_cast<int>(t),
                               fo.modes[s][t].to_string(), slots[t]});
      }
      if (cfg.keep_equilibria && fo.equilibria[s])
        out.equilibria.push_back({key.seed, cfg.schemes[s], key.c, key.k, f, *fo.equilibria[s]});
    }
  }

  const double total_slots = static_cast<double>(cfg.frames) * cfg.slots_per_frame;
  for (auto& r : recs) {
    double sum = 0.0;
    for (double v : r.frame_avg_wsr) sum += v;
    r.avg_network_wsr = sum / static_cast<double>(r.frame_avg_wsr.size());
    for (auto& v : r.per_cell_wsr) v /= total_slots;
  }
  out.records = std::move(recs);
  return out;
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kSip: return "sip";
    case Scheme::kApp: return "app";
    case Scheme::kOpt: return "opt";
    case Scheme::kStdd: return "stdd";
    case Scheme::kSwitch: return "switch";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "sip") return Scheme::kSip;
  if (lower == "app") return Scheme::kApp;
  if (lower == "opt") return Scheme::kOpt;
  if (lower == "stdd") return Scheme::kStdd;
  if (lower == "switch") return Scheme::kSwitch;
  throw Error("unknown scheme: " + std::string(s));
}

std::vector<Scheme> parse_scheme_list(std::string_view csv) {
  std::vector<Scheme> out;
  std::stringstream ss{std::string(csv)};
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_scheme(item));
  return out;
}

void ScenarioConfig::validate() const {
  topology.validate();
  if (schemes.empty()) throw Error("at least one scheme is required");
  if (seeds.empty()) throw Error("at least one seed is required");
  if (frames < 1) throw Error("frames must be >= 1");
  if (stats_window < 1) throw Error("stats_window must be >= 1");
  if (slots_per_frame < 1) throw Error("slots_per_frame must be >= 1");
  if (c_values.empty()) throw Error("at least one c value is required");
  for (double c : c_values) InterferenceParams{c, c}.validate();
  for (int k : k_values)
    if (k < 1) throw Error("users per cell must be >= 1");
  for (auto s : schemes) {
    if (s == Scheme::kStdd && slots_per_frame % 2 != 0) throw Error("uneven static split");
    if (s == Scheme::kSwitch && slots_per_frame < 5) throw Error("frame too short for fixed head/tail");
  }
}

PowerBudget calibrate_noise(const Deployment& dep, const ChannelSet& ch,
                            const PowerBudget& budget_template, int reference_k, double noise_db) {
  double sum = 0.0;
  for (int k = 0; k < dep.num_users(); ++k) sum += ch.H(dep.serving_cell[static_cast<std::size_t>(k)], k);
  const double mean_rx = sum / dep.num_users() * budget_template.alpha1 / reference_k;
  PowerBudget b = budget_template;
  b.sigma2 = std::pow(10.0, noise_db / 10.0) * mean_rx;
  return b;
}

WeightSet draw_weights(int num_users, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightSet w;
  w.uplink.resize(static_cast<std::size_t>(num_users));
  w.downlink.resize(static_cast<std::size_t>(num_users));
  // (0, 1]
  for (int k = 0; k < num_users; ++k) {
    w.uplink[static_cast<std::size_t>(k)] = 1.0 - unit(rng);
    w.downlink[static_cast<std::size_t>(k)] = 1.0 - unit(rng);
  }
  return w;
}

FrameOutcome run_frame(const ScenarioConfig& cfg, FrameState& state, std::uint64_t seed) {
  const FrameView view{state.dep, state.ch, state.ref, state.weights, state.budget, state.params};
  const int n_cells = state.dep.num_cells;
  const int slots = cfg.slots_per_frame;
  const std::size_t n_schemes = cfg.schemes.size();

  // W^s with the decoupled power rule is the true per-slot payoff, so every
  // scheme is scored against this table.
  auto t0 = Clock::now();
  const PayoffTable sip = build_payoff_table(PayoffFlavor::kSip, view);
  const double sip_build_s = seconds_since(t0);

  std::optional<PayoffTable> app;
  double app_build_s = 0.0;
  for (auto s : cfg.schemes)
    if ((s == Scheme::kApp || s == Scheme::kSwitch) && !app) {
      t0 = Clock::now();
      app = build_payoff_table(PayoffFlavor::kApp, view);
      app_build_s = seconds_since(t0);
    }

  FrameOutcome out;
  out.slot_wsr.resize(n_schemes);
  out.cell_wsr.assign(n_schemes, std::vector<double>(static_cast<std::size_t>(n_cells), 0.0));
  out.modes.resize(n_schemes);
  out.wallclock_s.assign(n_schemes, 0.0);
  out.equilibria.resize(n_schemes);

  for (std::size_t s = 0; s < n_schemes; ++s) {
    const Scheme scheme = cfg.schemes[s];
    t0 = Clock::now();
    std::vector<ModeVector> modes;
    double build_s = 0.0;
    switch (scheme) {
      case Scheme::kSip:
      case Scheme::kApp: {
        const PayoffTable& table = scheme == Scheme::kSip ? sip : *app;
        build_s = scheme == Scheme::kSip ? sip_build_s : app_build_s;
        auto report = solve_msne(table, cfg.solver);
        auto rng = stream(seed, static_cast<std::uint64_t>(state.frame), static_cast<std::uint64_t>(scheme), kSlotTag);
        modes = sample_modes(MixedStrategy{report.q}, slots, rng);
        out.equilibria[s] = std::move(report);
        break;
      }
      case Scheme::kOpt:
        build_s = sip_build_s;
        modes.assign(static_cast<std::size_t>(slots), opt_schedule(sip));
        break;
      case Scheme::kStdd:
        modes = stdd_schedule(n_cells, slots).slots;
        break;
      case Scheme::kSwitch:
        build_s = app_build_s;
        modes = switchpoint_schedule(*app, slots, state.switch_points, cfg.switchpoint_scope).slots;
        break;
    }
    out.wallclock_s[s] = seconds_since(t0) + build_s;

    for (const auto& z : modes) {
      const std::uint32_t idx = z.index();
      out.slot_wsr[s].push_back(sip.network(idx));
      for (int n = 0; n < n_cells; ++n) out.cell_wsr[s][static_cast<std::size_t>(n)] += sip(n, idx);
    }
    out.modes[s] = std::move(modes);
  }
  return out;
}

std::vector<double> empirical_quantiles(std::vector<double> samples, int points) {
  if (samples.empty()) throw Error("no samples for quantiles");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    const double p = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    // Smallest sample x with F_n(x) >= p.
    auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-12));
    rank = std::clamp<std::size_t>(rank, 1, samples.size());
    out.push_back(samples[rank - 1]);
  }
  return out;
}

ExperimentResult run_experiment(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<int> ks = cfg.k_values;
  if (ks.empty()) ks.push_back(cfg.topology.users_per_cell);

  std::vector<RunKey> keys;
  for (auto seed : cfg.seeds)
    for (double c : cfg.c_values)
      for (int k : ks) keys.push_back({seed, c, k});

  std::vector<RunOutput> outputs(keys.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      try {
        outputs[i] = run_one(cfg, keys[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(keys.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& o : outputs) {
    std::move(o.records.begin(), o.records.end(), std::back_inserter(result.records));
    std::move(o.slots.begin(), o.slots.end(), std::back_inserter(result.slots));
    std::move(o.equilibria.begin(), o.equilibria.end(), std::back_inserter(result.equilibria));
  }

  // CDF of per-frame average WSR, pooled over seeds and frames.
  for (auto scheme : cfg.schemes)
    for (double c : cfg.c_values)
      for (int k : ks) {
        std::vector<double> pooled;
        for (const auto& r : result.records)
          if (r.scheme == scheme && r.c == c && r.k == k)
            pooled.insert(pooled.end(), r.frame_avg_wsr.begin(), r.frame_avg_wsr.end());
        const auto qs = empirical_quantiles(pooled);
        for (std::size_t i = 0; i < qs.size(); ++i)
          result.cdf.push_back({scheme, c, k, static_cast<double>(i) / (qs.size() - 1), qs[i]});
      }
  return result;
}

void write_summary_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "seed,scheme,c,k,avg_network_wsr,wallclock_s\n";
  os.precision(17);
  for (const auto& r : records)
    os << r.seed << ',' << to_string(r.scheme) << ',' << r.c << ',' << r.k << ','
       << r.avg_network_wsr << ',' << r.wallclock_s << '\n';
}

void write_cdf_csv(std::ostream& os, const std::vector<CdfRow>& rows) {
  os << "scheme,c,k,quantile,wsr\n";
  os.precision(17);
  for (const auto& r : rows)
    os << to_string(r.scheme) << ',' << r.c << ',' << r.k << ',' << r.quantile << ',' << r.wsr << '\n';
}

void write_slots_csv(std::ostream& os, const std::vector<SlotRecord>& slots) {
  os << "seed,scheme,c,k,frame,slot,modes,network_wsr\n";
  os.precision(17);
  for (const auto& s : slots)
    os << s.seed << ',' << to_string(s.scheme) << ',' << s.c << ',' << s.k << ',' << s.frame << ','
       << s.slot << ',' << s.modes << ',' << s.network_wsr << '\n';
}

}  // namespace dtdd
