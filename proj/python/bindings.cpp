#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dtdd/baselines.hpp"
#include "dtdd/error.hpp"
#include "dtdd/game.hpp"
#include "dtdd/harness.hpp"
#include "dtdd/json_io.hpp"
#include "dtdd/power.hpp"

namespace py = pybind11;
using namespace dtdd;

namespace {

using Table = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Payoff tables cross the boundary as (2^N, N) arrays indexed [profile, cell].
PayoffTable to_table(const Table& values, const std::string& flavor) {
  const auto n = static_cast<int>(values.cols());
  if (n < 1 || n > PayoffTable::kMaxEnumerable || values.rows() != (Eigen::Index{1} << n))
    throw Error("payoff array must have shape (2**N, N)");
  return PayoffTable(n, parse_flavor(flavor), std::vector<double>(values.data(), values.data() + values.size()));
}

Table from_table(const PayoffTable& t) {
  Table out(t.num_profiles(), t.num_cells());
  std::copy(t.values().begin(), t.values().end(), out.data());
  return out;
}

py::dict report_dict(const EquilibriumReport& r) {
  py::dict d;
  d["q"] = r.q;
  d["residuals"] = r.residuals;
  d["boundary_flags"] = r.boundary_flags;
  d["social_welfare"] = r.social_welfare;
  d["solver_starts_used"] = r.solver_starts_used;
  d["distinct_equilibria"] = r.distinct_equilibria;
  return d;
}

struct Frame {
  Deployment dep;
  ChannelSet ch;
  ReferenceInterference ref;
  WeightSet weights;
  PowerBudget budget;
  InterferenceParams params;
};

// One drop with warm statistics, calibrated noise and random weights; the
// same construction the harness uses for a frame.
Frame make_frame(int num_cells, int users_per_cell, double c, std::uint64_t seed,
                 int stats_window, double tx_power_dbm, double noise_db) {
  TopologyConfig topo;
  topo.num_cells = num_cells;
  topo.users_per_cell = users_per_cell;
  topo.rng_seed = seed;
  topo.validate();
  Frame f;
  f.dep = generate_deployment(topo);
  f.ch = generate_channels(f.dep, topo);
  ChannelStatsAccumulator acc(f.dep);
  for (int d = 0; d < stats_window; ++d)
    acc.add(generate_channels(redraw_users(topo, static_cast<std::uint64_t>(d)), topo));
  const double alpha = dbm_to_watts(tx_power_dbm);
  f.budget = calibrate_noise(f.dep, f.ch, {alpha, alpha, 1.0}, users_per_cell, noise_db);
  f.params = {c, c};
  f.params.validate();
  f.ref = reference_interference(acc.finish(), f.params, f.budget, users_per_cell);
  std::mt19937_64 rng(seed);
  f.weights = draw_weights(f.dep.num_users(), rng);
  return f;
}

}  // namespace

PYBIND11_MODULE(_dtdd, m) {
  m.doc() = "Dynamic-TDD mode scheduling games: MS-NE solver, payoffs and baselines";
  py::register_exception<Error>(m, "DtddError", PyExc_ValueError);

  m.def("dbm_to_watts", &dbm_to_watts, py::arg("dbm"));

  m.def("water_fill", [](const std::vector<double>& w, const std::vector<double>& levels, double budget) {
    auto r = water_fill(w, levels, budget);
    return py::make_tuple(r.p, r.lambda ? py::cast(*r.lambda) : py::none());
  }, py::arg("weights"), py::arg("levels"), py::arg("budget"),
     "Weighted water-filling; returns (powers, multiplier or None).");

  m.def("channels", [](int num_cells, int users_per_cell, std::uint64_t seed) {
    TopologyConfig topo;
    topo.num_cells = num_cells;
    topo.users_per_cell = users_per_cell;
    topo.rng_seed = seed;
    topo.validate();
    const auto dep = generate_deployment(topo);
    const auto ch = generate_channels(dep, topo);
    py::dict d;
    d["H"] = ch.H;
    d["U"] = ch.U;
    d["B"] = ch.B;
    d["serving_cell"] = dep.serving_cell;
    d["block"] = dep.block_of_user;
    return d;
  }, py::arg("num_cells") = 7, py::arg("users_per_cell") = 15, py::arg("seed") = 1,
     "Gain matrices of drop 0 of the wrap-around layout.");

  m.def("payoff_tables", [](int num_cells, int users_per_cell, double c, std::uint64_t seed,
                            int stats_window, double tx_power_dbm, double noise_db) {
    const auto f = make_frame(num_cells, users_per_cell, c, seed, stats_window, tx_power_dbm, noise_db);
    const FrameView view{f.dep, f.ch, f.ref, f.weights, f.budget, f.params};
    return py::make_tuple(from_table(build_payoff_table(PayoffFlavor::kSip, view)),
                          from_table(build_payoff_table(PayoffFlavor::kApp, view)));
  }, py::arg("num_cells") = 7, py::arg("users_per_cell") = 15, py::arg("c") = 0.3,
     py::arg("seed") = 1, py::arg("stats_window") = 50, py::arg("tx_power_dbm") = 23.0,
     py::arg("noise_db") = -10.0,
     "SIP and APP payoff tables, each shaped (2**N, N), for one random frame.");

  m.def("solve_msne", [](const Table& values, int starts, std::uint64_t seed, bool scan_pure) {
    SolverOptions opts;
    opts.starts = starts;
    opts.seed = seed;
    opts.scan_pure = scan_pure;
    return report_dict(solve_msne(to_table(values, "sip"), opts));
  }, py::arg("payoffs"), py::arg("starts") = 32, py::arg("seed") = SolverOptions{}.seed,
     py::arg("scan_pure") = true);

  m.def("expected_payoff", [](const Table& values, int cell, int mode, const std::vector<double>& q) {
    return expected_payoff(cell, mode, MixedStrategy{q}, to_table(values, "sip"));
  }, py::arg("payoffs"), py::arg("cell"), py::arg("mode"), py::arg("q"));

  m.def("indifference_residuals", [](const Table& values, const std::vector<double>& q) {
    return indifference_residuals(MixedStrategy{q}, to_table(values, "sip"));
  }, py::arg("payoffs"), py::arg("q"));

  m.def("opt_schedule", [](const Table& values) {
    const auto z = opt_schedule(to_table(values, "sip"));
    std::vector<int> out;
    for (int n = 0; n < z.size(); ++n) out.push_back(z[n]);
    return out;
  }, py::arg("payoffs"));

  m.def("stdd_schedule", [](int num_cells, int slots) {
    std::vector<std::string> out;
    for (const auto& z : stdd_schedule(num_cells, slots).slots) out.push_back(z.to_string());
    return out;
  }, py::arg("num_cells"), py::arg("slots_per_frame") = 10);

  m.def("signaling_overhead", [](int n, int k) {
    const auto r = signaling_overhead(n, k);
    py::dict d;
    d["sip"] = r.scalars_per_frame_sip;
    d["app_fast"] = r.scalars_per_frame_app_fast;
    d["app_slow"] = r.scalars_per_window_app_slow;
    return d;
  }, py::arg("num_cells"), py::arg("users_per_cell"));

  m.def("run_experiment", [](const std::string& config_json) {
    const auto cfg = scenario_from_json(nlohmann::json::parse(config_json));
    ExperimentResult r;
    {
      py::gil_scoped_release release;
      r = run_experiment(cfg);
    }
    py::list summary, cdf;
    for (const auto& rec : r.records) {
      py::dict d;
      d["seed"] = rec.seed;
      d["scheme"] = std::string(to_string(rec.scheme));
      d["c"] = rec.c;
      d["k"] = rec.k;
      d["avg_network_wsr"] = rec.avg_network_wsr;
      d["wallclock_s"] = rec.wallclock_s;
      d["frame_avg_wsr"] = rec.frame_avg_wsr;
      summary.append(d);
    }
    for (const auto& row : r.cdf) {
      py::dict d;
      d["scheme"] = std::string(to_string(row.scheme));
      d["c"] = row.c;
      d["k"] = row.k;
      d["quantile"] = row.quantile;
      d["wsr"] = row.wsr;
      cdf.append(d);
    }
    return py::make_tuple(summary, cdf);
  }, py::arg("config_json"),
     "Runs a scenario given as a JSON string; returns (summary rows, cdf rows).");
}
