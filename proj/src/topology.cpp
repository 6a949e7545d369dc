#include "dtdd/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "dtdd/error.hpp"

namespace dtdd {
namespace {

struct Axial {
  int i;
  int j;
};

// Unit steps of the hexagonal lattice in axial coordinates, ordered
// counter-clockwise starting at 0 degrees.
constexpr std::array<Axial, 6> kDirections{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

Point to_plane(Axial a, double isd) {
  return {isd * (a.i + 0.5 * a.j), isd * (std::sqrt(3.0) / 2.0) * a.j};
}

int rings_for(int num_cells) {
  int r = 0;
  while (3 * r * (r + 1) + 1 < num_cells) ++r;
  return r;
}

std::mt19937_64 drop_stream(std::uint64_t seed, std::uint64_t drop) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(drop), static_cast<std::uint32_t>(drop >> 32),
                    0x746f706fU};
  return std::mt19937_64(seq);
}

}  // namespace

void TopologyConfig::validate() const {
  if (num_cells < 1) throw Error("num_cells must be >= 1");
  if (users_per_cell < 1) throw Error("users_per_cell must be >= 1");
  if (!(cell_side > 0.0)) throw Error("cell_side must be > 0");
  if (!(min_link_distance > 0.0)) throw Error("min_link_distance must be > 0");
}

HexLayout::HexLayout(const TopologyConfig& cfg)
    : rings_(rings_for(cfg.num_cells)),
      side_(cfg.cell_side),
      isd_(std::sqrt(3.0) * cfg.cell_side) {
  std::vector<Axial> sites{{0, 0}};
  for (int r = 1; r <= rings_; ++r) {
    Axial h{kDirections[4].i * r, kDirections[4].j * r};
    for (const auto& d : kDirections) {
      for (int s = 0; s < r; ++s) {
        sites.push_back(h);
        h.i += d.i;
        h.j += d.j;
      }
    }
  }
  sites.resize(static_cast<std::size_t>(cfg.num_cells));
  for (const auto& a : sites) centers_.push_back(to_plane(a, isd_));

  // Cluster of R rings repeats along (R+1, R) and its 60-degree rotations.
  Axial t{rings_ + 1, rings_};
  for (int k = 0; k < 6; ++k) {
    shifts_.push_back(to_plane(t, isd_));
    t = Axial{-t.j, t.i + t.j};
  }
}

bool HexLayout::inside_cell(int cell, Point p) const {
  const Point c = centers_.at(static_cast<std::size_t>(cell));
  const double dx = p.x - c.x;
  const double dy = p.y - c.y;
  const double apothem = isd_ / 2.0;
  const double h = std::sqrt(3.0) / 2.0;
  const double eps = 1e-9 * isd_;
  return std::abs(dx) <= apothem + eps && std::abs(0.5 * dx + h * dy) <= apothem + eps &&
         std::abs(-0.5 * dx + h * dy) <= apothem + eps;
}

double HexLayout::wrapped_distance(Point a, Point b) const {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  double best = std::hypot(dx, dy);
  for (const auto& s : shifts_) best = std::min(best, std::hypot(dx + s.x, dy + s.y));
  return best;
}

double wrapped_distance(Point a, Point b, const TopologyConfig& cfg) {
  return HexLayout(cfg).wrapped_distance(a, b);
}

double path_gain(double distance, double min_link_distance) {
  constexpr double kRefDistance = 1.0;
  const double d = std::max(distance, min_link_distance);
  const double r = kRefDistance / d;
  return r * r;
}

Deployment redraw_users(const TopologyConfig& cfg, std::uint64_t drop) {
  cfg.validate();
  const HexLayout layout(cfg);
  const int n_cells = cfg.num_cells;
  const int k_users = cfg.users_per_cell;

  Deployment dep;
  dep.num_cells = n_cells;
  dep.users_per_cell = k_users;
  dep.bs_positions = layout.centers();
  dep.user_positions.reserve(static_cast<std::size_t>(n_cells * k_users));

  auto rng = drop_stream(cfg.rng_seed, drop);
  const double half_w = layout.inter_site_distance() / 2.0;
  std::uniform_real_distribution<double> ux(-half_w, half_w);
  std::uniform_real_distribution<double> uy(-cfg.cell_side, cfg.cell_side);
  if (cfg.min_link_distance >= half_w) throw Error("min_link_distance exceeds the cell apothem");

  for (int n = 0; n < n_cells; ++n) {
    const Point c = dep.bs_positions[static_cast<std::size_t>(n)];
    for (int b = 0; b < k_users; ++b) {
      Point p;
      do {
        p = Point{c.x + ux(rng), c.y + uy(rng)};
      } while (!layout.inside_cell(n, p) ||
               std::hypot(p.x - c.x, p.y - c.y) < cfg.min_link_distance);
      dep.user_positions.push_back(p);
      dep.serving_cell.push_back(n);
      dep.block_of_user.push_back(b);
    }
  }
  return dep;
}

Deployment generate_deployment(const TopologyConfig& cfg) { return redraw_users(cfg, 0); }

ChannelSet generate_channels(const Deployment& dep, const TopologyConfig& cfg) {
  const HexLayout layout(cfg);
  const int n_cells = dep.num_cells;
  const int n_users = dep.num_users();
  const double dmin = cfg.min_link_distance;
  auto gain = [&](Point a, Point b) { return path_gain(layout.wrapped_distance(a, b), dmin); };

  ChannelSet ch;
  ch.H.resize(n_cells, n_users);
  ch.U = Eigen::MatrixXd::Zero(n_users, n_users);
  ch.B = Eigen::MatrixXd::Zero(n_cells, n_cells);
  for (int n = 0; n < n_cells; ++n)
    for (int k = 0; k < n_users; ++k)
      ch.H(n, k) = gain(dep.bs_positions[static_cast<std::size_t>(n)],
                        dep.user_positions[static_cast<std::size_t>(k)]);
  for (int j = 0; j < n_users; ++j)
    for (int k = j + 1; k < n_users; ++k) {
      const double g = gain(dep.user_positions[static_cast<std::size_t>(j)],
                            dep.user_positions[static_cast<std::size_t>(k)]);
      ch.U(j, k) = g;
      ch.U(k, j) = g;
    }
  for (int m = 0; m < n_cells; ++m)
    for (int n = m + 1; n < n_cells; ++n) {
      const double g = gain(dep.bs_positions[static_cast<std::size_t>(m)],
                            dep.bs_positions[static_cast<std::size_t>(n)]);
      ch.B(m, n) = g;
      ch.B(n, m) = g;
    }
  return ch;
}

ChannelStatsAccumulator::ChannelStatsAccumulator(const Deployment& dep)
    : n_(dep.num_cells),
      k_(dep.users_per_cell),
      sum_h_(Eigen::MatrixXd::Zero(n_, n_)),
      sum_u_(Eigen::MatrixXd::Zero(n_, n_)),
      sum_b_(Eigen::MatrixXd::Zero(n_, n_)) {}

void ChannelStatsAccumulator::add(const ChannelSet& ch) {
  if (ch.H.rows() != n_ || ch.H.cols() != n_ * k_ || ch.U.rows() != n_ * k_ ||
      ch.B.rows() != n_)
    throw Error("channel sample dimensions do not match the deployment");
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      double h = 0.0;
      double u = 0.0;
      for (int blk = 0; blk < k_; ++blk) {
        h += ch.H(a, b * k_ + blk);
        if (a != b) u += ch.U(a * k_ + blk, b * k_ + blk);
      }
      sum_h_(a, b) += h / k_;
      sum_u_(a, b) += u / k_;
      sum_b_(a, b) += ch.B(a, b);
    }
  }
  ++count_;
}

ChannelStats ChannelStatsAccumulator::finish() const {
  if (count_ == 0) throw Error("no channel samples");
  ChannelStats s;
  s.mean_h = sum_h_ / count_;
  s.mean_u = sum_u_ / count_;
  s.mean_b = sum_b_ / count_;
  s.window_frames = count_;
  return s;
}

ChannelStats estimate_channel_stats(std::span<const ChannelSet> samples, const Deployment& dep) {
  if (samples.empty()) throw Error("no channel samples");
  ChannelStatsAccumulator acc(dep);
  for (const auto& ch : samples) acc.add(ch);
  return acc.finish();
}

}  // namespace dtdd
