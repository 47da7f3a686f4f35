#include "wsn/channel.hpp"

#include <bit>
#include <cmath>

namespace wsn {

void ChannelSpec::validate() const {
  if (hop_probs.empty()) throw ConfigError("channel: M must be >= 1");
  for (double p : hop_probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("channel: hop probabilities must be in [0,1]");
}

bool ChannelSpec::has_noisy_hop() const {
  for (double p : hop_probs)
    if (p > 0.5) return true;
  return false;
}

OddSubsetFamily enumerate_odd_subsets(std::size_t hops) {
  if (hops < 1) throw ConfigError("channel: M must be >= 1");
  if (hops > kMaxEnumerableHops)
    throw ConfigError("channel: odd-subset enumeration capped at M = " +
                      std::to_string(kMaxEnumerableHops) +
                      "; use the closed-form path");
  OddSubsetFamily family;
  family.hops = hops;
  family.members.reserve(std::size_t(1) << (hops - 1));
  // Bitmask order is lexicographic over the index vectors with low hops first.
  const std::uint32_t full = (hops == 32) ? ~0u : ((1u << hops) - 1u);
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if ((std::popcount(mask) & 1u) == 0) continue;
    OddSubsetFamily::Member m;
    for (std::size_t j = 0; j < hops; ++j)
      ((mask >> j) & 1u ? m.subset : m.complement).push_back(int(j) + 1);
    family.members.push_back(std::move(m));
  }
  return family;
}

double flip_probability(const ChannelSpec& spec) {
  spec.validate();
  double prod = 1.0;
  for (double p : spec.hop_probs) prod *= 1.0 - 2.0 * p;
  return 0.5 * (1.0 - prod);
}

double flip_probability_enumerated(const ChannelSpec& spec) {
  spec.validate();
  const auto family = enumerate_odd_subsets(spec.hops());
  double total = 0.0;
  for (const auto& m : family.members) {
    double term = 1.0;
    for (int j : m.subset) term *= spec.hop_probs[std::size_t(j) - 1];
    for (int j : m.complement) term *= 1.0 - spec.hop_probs[std::size_t(j) - 1];
    total += term;
  }
  return total;
}

double flip_probability_equal(double p, std::size_t hops) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("channel: p must be in [0,1]");
  if (hops < 1) throw ConfigError("channel: M must be >= 1");
  return 0.5 * (1.0 - std::pow(1.0 - 2.0 * p, double(hops)));
}

}  // namespace wsn
