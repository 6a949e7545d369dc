#include "dtdd/types.hpp"

#include <cmath>

#include "dtdd/error.hpp"

namespace dtdd {

ModeVector::ModeVector(std::initializer_list<int> bits) {
  for (int b : bits) z_.push_back(static_cast<std::uint8_t>(b != 0));
}

ModeVector ModeVector::from_index(int num_cells, std::uint32_t index) {
  ModeVector z(num_cells);
  for (int n = 0; n < num_cells; ++n) z.set(n, static_cast<int>((index >> (num_cells - 1 - n)) & 1U));
  return z;
}

std::uint32_t ModeVector::index() const {
  std::uint32_t idx = 0;
  for (auto b : z_) idx = (idx << 1) | b;
  return idx;
}

std::string ModeVector::to_string() const {
  std::string s;
  for (auto b : z_) s.push_back(b ? '1' : '0');
  return s;
}

void InterferenceParams::validate() const {
  if (!(c1 >= 0.0 && c1 <= 1.0)) throw Error("c1 must lie in [0, 1]");
  if (!(c2 >= 0.0 && c2 <= 1.0)) throw Error("c2 must lie in [0, 1]");
}

void PowerBudget::validate() const {
  if (!(alpha0 > 0.0)) throw Error("alpha0 must be > 0");
  if (!(alpha1 > 0.0)) throw Error("alpha1 must be > 0");
  if (!(sigma2 > 0.0)) throw Error("sigma2 must be > 0");
}

WeightSet WeightSet::uniform(int num_users, double value) {
  return {std::vector<double>(static_cast<std::size_t>(num_users), value),
          std::vector<double>(static_cast<std::size_t>(num_users), value)};
}

void WeightSet::validate(int num_users) const {
  if (static_cast<int>(uplink.size()) != num_users || static_cast<int>(downlink.size()) != num_users)
    throw Error("weight set size does not match the number of users");
  for (auto* v : {&uplink, &downlink})
    for (double w : *v)
      if (!(w >= 0.0 && w <= 1.0)) throw Error("weights must lie in [0, 1]");
}

std::string_view to_string(PayoffFlavor f) { return f == PayoffFlavor::kSip ? "SIP" : "APP"; }

PayoffFlavor parse_flavor(std::string_view s) {
  if (s == "SIP" || s == "sip") return PayoffFlavor::kSip;
  if (s == "APP" || s == "app") return PayoffFlavor::kApp;
  throw Error("unknown payoff flavor: " + std::string(s));
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

}  // namespace dtdd
