#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dtdd {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct TopologyConfig {
  int num_cells = 7;
  int users_per_cell = 15;
  double cell_side = 333.0;          // hexagon side (circumradius), meters
  double min_link_distance = 10.0;   // meters; also the path-loss clamp
  std::uint64_t rng_seed = 1;

  // Throws dtdd::Error when any field violates its range.
  void validate() const;
};

// Hexagonal cell layout wrapped onto a torus. The layout holds the smallest
// full hexagonal cluster (1, 7, 19, ... cells) that contains `num_cells`;
// base stations occupy the first `num_cells` sites in spiral order (center,
// then ring by ring). The cluster tiles the plane through six translation
// vectors, and distances are taken to the nearest replica.
class HexLayout {
 public:
  explicit HexLayout(const TopologyConfig& cfg);

  int num_cells() const { return static_cast<int>(centers_.size()); }
  int rings() const { return rings_; }
  double inter_site_distance() const { return isd_; }
  const std::vector<Point>& centers() const { return centers_; }
  // The six cluster translation vectors (the replica images besides the
  // identity).
  const std::vector<Point>& cluster_shifts() const { return shifts_; }

  bool inside_cell(int cell, Point p) const;
  double wrapped_distance(Point a, Point b) const;

 private:
  int rings_ = 0;
  double side_ = 0.0;
  double isd_ = 0.0;
  std::vector<Point> centers_;
  std::vector<Point> shifts_;
};

// Users are stored cell-major: user index k = cell * K + block.
struct Deployment {
  int num_cells = 0;
  int users_per_cell = 0;
  std::vector<Point> bs_positions;
  std::vector<Point> user_positions;
  std::vector<int> serving_cell;  // user -> cell
  std::vector<int> block_of_user; // user -> block in [0, K)

  int num_users() const { return num_cells * users_per_cell; }
  // The unique user of `cell` occupying `block`.
  int user_at(int cell, int block) const { return cell * users_per_cell + block; }
  std::span<const int> serving_cells() const { return serving_cell; }
};

// Linear power gains. H is N x NK (base station to user), U is NK x NK
// (user to user) and B is N x N (base station to base station).
struct ChannelSet {
  Eigen::MatrixXd H;
  Eigen::MatrixXd U;
  Eigen::MatrixXd B;
};

// Long-term per-cell-pair channel means.
//   mean_h(a, b): mean of H(a, k) over users k served by cell b
//   mean_u(m, n): mean of U(j, k) over co-block pairs j in cell m, k in cell n
//   mean_b(m, n): mean of B(m, n)
struct ChannelStats {
  Eigen::MatrixXd mean_h;
  Eigen::MatrixXd mean_u;
  Eigen::MatrixXd mean_b;
  int window_frames = 0;
};

double wrapped_distance(Point a, Point b, const TopologyConfig& cfg);

// LoS path-loss with exponent 2, referenced at 1 m and clamped at
// `min_link_distance`.
double path_gain(double distance, double min_link_distance);

Deployment generate_deployment(const TopologyConfig& cfg);

// Redraws user positions for drop index `drop` while keeping base stations
// and the user/cell/block maps. Drop 0 reproduces generate_deployment.
Deployment redraw_users(const TopologyConfig& cfg, std::uint64_t drop);

ChannelSet generate_channels(const Deployment& dep, const TopologyConfig& cfg);

// Streaming form of estimate_channel_stats, used when the samples are
// generated on the fly.
class ChannelStatsAccumulator {
 public:
  explicit ChannelStatsAccumulator(const Deployment& dep);

  void add(const ChannelSet& ch);
  int count() const { return count_; }
  ChannelStats finish() const;

 private:
  int n_ = 0;
  int k_ = 0;
  int count_ = 0;
  Eigen::MatrixXd sum_h_;
  Eigen::MatrixXd sum_u_;
  Eigen::MatrixXd sum_b_;
};

ChannelStats estimate_channel_stats(std::span<const ChannelSet> samples,
                                    const Deployment& dep);

}  // namespace dtdd
