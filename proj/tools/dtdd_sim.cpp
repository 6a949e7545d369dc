// dtdd_sim: runs a dynamic-TDD scheduling experiment and writes
//   <out>/summary.csv    seed,scheme,c,k,avg_network_wsr,wallclock_s
//   <out>/cdf.csv        scheme,c,k,quantile,wsr
//   <out>/slots.csv      raw per-slot scores (--dump-slots)
//   <out>/equilibria.json per-frame equilibrium reports (--dump-eq)
//
// Usage:
//   dtdd_sim --config scenario.json --sweep c=0:1:0.25 --schemes sip,app,opt,stdd,switch \
//            --seeds 20 --out results/

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dtdd/error.hpp"
#include "dtdd/harness.hpp"
#include "dtdd/json_io.hpp"

namespace {

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw dtdd::Error("c sweep must be start:stop:step with step > 0");
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (int i = 0; i <= count; ++i) out.push_back(parts[0] + i * parts[2]);
  return out;
}

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void apply_sweep(const std::string& sweep, dtdd::ScenarioConfig& cfg) {
  const auto eq = sweep.find('=');
  if (eq == std::string::npos) throw dtdd::Error("--sweep expects c=<start:stop:step> or k=<list>");
  const std::string key = sweep.substr(0, eq);
  const std::string value = sweep.substr(eq + 1);
  if (key == "c") {
    cfg.c_values = parse_range(value);
  } else if (key == "k") {
    cfg.k_values = parse_list(value);
  } else {
    throw dtdd::Error("unknown sweep variable: " + key);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-TDD mode scheduling simulator"};
  std::string config_path;
  std::vector<std::string> sweeps;
  std::string schemes;
  int seeds = 0;
  int frames = 0;
  int threads = 0;
  std::string out_dir = "out";
  bool dump_slots = false;
  bool dump_eq = false;
  app.add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);
  app.add_option("--sweep", sweeps, "c=<start:stop:step> or k=<list>");
  app.add_option("--schemes", schemes, "comma-separated subset of sip,app,opt,stdd,switch");
  app.add_option("--seeds", seeds, "number of seeds (1..n)");
  app.add_option("--frames", frames, "frames per run");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--dump-slots", dump_slots, "write raw per-slot scores");
  app.add_flag("--dump-eq", dump_eq, "write per-frame equilibrium reports");
  CLI11_PARSE(app, argc, argv);

  try {
    dtdd::ScenarioConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      cfg = dtdd::scenario_from_json(nlohmann::json::parse(in));
    }
    for (const auto& s : sweeps) apply_sweep(s, cfg);
    if (!schemes.empty()) cfg.schemes = dtdd::parse_scheme_list(schemes);
    if (seeds > 0) {
      cfg.seeds.clear();
      for (int i = 1; i <= seeds; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
    }
    if (frames > 0) cfg.frames = frames;
    if (threads > 0) cfg.threads = threads;
    cfg.keep_slots = dump_slots;
    cfg.keep_equilibria = dump_eq;

    const auto result = dtdd::run_experiment(cfg);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    {
      std::ofstream f(dir / "summary.csv");
      dtdd::write_summary_csv(f, result.records);
    }
    {
      std::ofstream f(dir / "cdf.csv");
      dtdd::write_cdf_csv(f, result.cdf);
    }
    if (dump_slots) {
      std::ofstream f(dir / "slots.csv");
      dtdd::write_slots_csv(f, result.slots);
    }
    if (dump_eq) {
      std::ofstream f(dir / "equilibria.json");
      f << nlohmann::json(result.equilibria).dump(1) << '\n';
    }

    std::map<std::tuple<std::string, double, int>, std::pair<double, int>> means;
    for (const auto& r : result.records) {
      auto& m = means[{std::string(dtdd::to_string(r.scheme)), r.c, r.k}];
      m.first += r.avg_network_wsr;
      ++m.second;
    }
    std::cout << std::left << std::setw(8) << "scheme" << std::setw(8) << "c" << std::setw(6) << "k"
              << "mean_wsr\n";
    for (const auto& [key, v] : means)
      std::cout << std::setw(8) << std::get<0>(key) << std::setw(8) << std::get<1>(key)
                << std::setw(6) << std::get<2>(key) << v.first / v.second << '\n';
  } catch (const std::exception& e) {
    std::cerr << "dtdd_sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
