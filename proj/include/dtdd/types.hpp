#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dtdd {

enum class Mode : std::uint8_t { kUplink = 0, kDownlink = 1 };

// Per-cell transmission direction for one slot (1 = DL, 0 = UL).
//
// Profiles are enumerated by their lexicographic rank: the vector read as a
// binary number with the first cell as the most significant bit.
class ModeVector {
 public:
  ModeVector() = default;
  explicit ModeVector(int num_cells, int value = 0)
      : z_(static_cast<std::size_t>(num_cells), static_cast<std::uint8_t>(value != 0)) {}
  ModeVector(std::initializer_list<int> bits);

  static ModeVector from_index(int num_cells, std::uint32_t index);
  std::uint32_t index() const;

  int size() const { return static_cast<int>(z_.size()); }
  int operator[](int n) const { return z_[static_cast<std::size_t>(n)]; }
  void set(int n, int value) { z_[static_cast<std::size_t>(n)] = static_cast<std::uint8_t>(value != 0); }
  bool is_downlink(int n) const { return (*this)[n] == 1; }

  std::string to_string() const;
  friend bool operator==(const ModeVector&, const ModeVector&) = default;

 private:
  std::vector<std::uint8_t> z_;
};

struct InterferenceParams {
  double c1 = 1.0;  // UL-to-DL cross-interference management factor
  double c2 = 1.0;  // DL-to-UL cross-interference management factor

  void validate() const;
};

struct PowerBudget {
  double alpha0 = 0.0;  // per-user UL power limit, W
  double alpha1 = 0.0;  // per-cell DL sum-power limit, W
  double sigma2 = 0.0;  // noise power, W

  void validate() const;
};

// Rate weights w_k(a) for user k in mode a.
struct WeightSet {
  std::vector<double> uplink;
  std::vector<double> downlink;

  double weight(int user, int mode) const {
    return mode == 1 ? downlink[static_cast<std::size_t>(user)]
                     : uplink[static_cast<std::size_t>(user)];
  }
  static WeightSet uniform(int num_users, double value = 1.0);
  void validate(int num_users) const;
};

struct PowerAllocation {
  std::vector<double> p;                     // per user, W
  std::vector<std::optional<double>> lambda; // per cell; set for DL cells with an active budget
};

enum class PayoffFlavor { kSip, kApp };

std::string_view to_string(PayoffFlavor f);
PayoffFlavor parse_flavor(std::string_view s);

double dbm_to_watts(double dbm);

}  // namespace dtdd
