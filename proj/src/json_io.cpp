#include "dtdd/json_io.hpp"

#include "dtdd/error.hpp"

namespace dtdd {
namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

json points_to_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({p.x, p.y});
  return a;
}

std::vector<Point> points_from_json(const json& j) {
  std::vector<Point> pts;
  for (const auto& p : j) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return pts;
}

constexpr const char* kRefKeys[2][2] = {{"ul_from_ul", "ul_from_dl"}, {"dl_from_ul", "dl_from_dl"}};

}  // namespace

void to_json(json& j, const Deployment& dep) {
  j = json{{"num_cells", dep.num_cells},
           {"users_per_cell", dep.users_per_cell},
           {"bs_positions", points_to_json(dep.bs_positions)},
           {"user_positions", points_to_json(dep.user_positions)},
           {"serving_cell", dep.serving_cell},
           {"block_of_user", dep.block_of_user}};
}

void from_json(const json& j, Deployment& dep) {
  dep.num_cells = j.at("num_cells").get<int>();
  dep.users_per_cell = j.at("users_per_cell").get<int>();
  dep.bs_positions = points_from_json(j.at("bs_positions"));
  dep.user_positions = points_from_json(j.at("user_positions"));
  dep.serving_cell = j.at("serving_cell").get<std::vector<int>>();
  dep.block_of_user = j.at("block_of_user").get<std::vector<int>>();
  if (static_cast<int>(dep.bs_positions.size()) != dep.num_cells ||
      static_cast<int>(dep.user_positions.size()) != dep.num_users() ||
      static_cast<int>(dep.serving_cell.size()) != dep.num_users() ||
      static_cast<int>(dep.block_of_user.size()) != dep.num_users())
    throw Error("deployment JSON sizes are inconsistent");
}

void to_json(json& j, const ChannelSet& ch) {
  j = json{{"H", matrix_to_json(ch.H)}, {"U", matrix_to_json(ch.U)}, {"B", matrix_to_json(ch.B)}};
}

void from_json(const json& j, ChannelSet& ch) {
  ch.H = matrix_from_json(j.at("H"));
  ch.U = matrix_from_json(j.at("U"));
  ch.B = matrix_from_json(j.at("B"));
}

void to_json(json& j, const ReferenceInterference& ref) {
  const int n = ref.num_cells();
  j = json::object();
  for (int zn = 0; zn < 2; ++zn)
    for (int zm = 0; zm < 2; ++zm) {
      Eigen::MatrixXd m(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a, b) = ref(a, b, zn, zm);
      j[kRefKeys[zn][zm]] = matrix_to_json(m);
    }
}

void from_json(const json& j, ReferenceInterference& ref) {
  const auto first = matrix_from_json(j.at(kRefKeys[0][0]));
  ref = ReferenceInterference(static_cast<int>(first.rows()));
  for (int zn = 0; zn < 2; ++zn)
    for (int zm = 0; zm < 2; ++zm) {
      const auto m = matrix_from_json(j.at(kRefKeys[zn][zm]));
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b)
          ref.at(static_cast<int>(a), static_cast<int>(b), zn, zm) = m(a, b);
    }
}

void to_json(json& j, const EquilibriumReport& r) {
  j = json{{"q", r.q},
           {"residuals", r.residuals},
           {"boundary_flags", r.boundary_flags},
           {"social_welfare", r.social_welfare},
           {"solver_starts_used", r.solver_starts_used},
           {"distinct_equilibria", r.distinct_equilibria}};
}

void from_json(const json& j, EquilibriumReport& r) {
  r.q = j.at("q").get<std::vector<double>>();
  r.residuals = j.at("residuals").get<std::vector<double>>();
  r.boundary_flags = j.at("boundary_flags").get<std::vector<int>>();
  r.social_welfare = j.at("social_welfare").get<double>();
  r.solver_starts_used = j.at("solver_starts_used").get<int>();
  r.distinct_equilibria = j.value("distinct_equilibria", 0);
}

void to_json(json& j, const EquilibriumRecord& r) {
  j = json{{"seed", r.seed}, {"scheme", std::string(to_string(r.scheme))}, {"c", r.c},
           {"k", r.k},       {"frame", r.frame},                             {"equilibrium", r.report}};
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig cfg;
  if (j.contains("topology")) {
    const auto& t = j.at("topology");
    cfg.topology.num_cells = t.value("num_cells", cfg.topology.num_cells);
    cfg.topology.users_per_cell = t.value("users_per_cell", cfg.topology.users_per_cell);
    cfg.topology.cell_side = t.value("cell_side", cfg.topology.cell_side);
    cfg.topology.min_link_distance = t.value("min_link_distance", cfg.topology.min_link_distance);
  }
  if (j.contains("c")) {
    const auto& c = j.at("c");
    cfg.c_values = c.is_array() ? c.get<std::vector<double>>() : std::vector<double>{c.get<double>()};
  }
  if (j.contains("k")) cfg.k_values = j.at("k").get<std::vector<int>>();
  cfg.tx_power_dbm = j.value("tx_power_dbm", cfg.tx_power_dbm);
  cfg.noise_db = j.value("noise_db", cfg.noise_db);
  if (j.contains("noise_reference_k")) cfg.noise_reference_k = j.at("noise_reference_k").get<int>();
  cfg.slots_per_frame = j.value("slots_per_frame", cfg.slots_per_frame);
  cfg.frames = j.value("frames", cfg.frames);
  cfg.stats_window = j.value("stats_window", cfg.stats_window);
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j.at("schemes")) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
  }
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      cfg.seeds = s.get<std::vector<std::uint64_t>>();
    } else {
      cfg.seeds.clear();
      for (std::uint64_t i = 1; i <= s.get<std::uint64_t>(); ++i) cfg.seeds.push_back(i);
    }
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    cfg.solver.starts = s.value("starts", cfg.solver.starts);
    cfg.solver.residual_tol = s.value("residual_tol", cfg.solver.residual_tol);
    cfg.solver.distinct_tol = s.value("distinct_tol", cfg.solver.distinct_tol);
    cfg.solver.scan_pure = s.value("scan_pure", cfg.solver.scan_pure);
  }
  if (j.contains("switchpoint_scope")) {
    const auto scope = j.at("switchpoint_scope").get<std::string>();
    if (scope == "per_cell") cfg.switchpoint_scope = SwitchpointScope::kPerCell;
    else if (scope == "global") cfg.switchpoint_scope = SwitchpointScope::kGlobal;
    else throw Error("switchpoint_scope must be per_cell or global");
  }
  cfg.threads = j.value("threads", cfg.threads);
  return cfg;
}

}  // namespace dtdd
