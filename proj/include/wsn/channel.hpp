#pragma once

#include <cstdint>
#include <vector>

#include "wsn/signal.hpp"

namespace wsn {

/// Ordered per-hop flip probabilities of a BSC cascade.
struct ChannelSpec {
  std::vector<double> hop_probs;  // p_1..p_M

  std::size_t hops() const { return hop_probs.size(); }
  void validate() const;
  /// True if any hop exceeds ½ (permitted, but outside the paper's plot range).
  bool has_noisy_hop() const;

  static ChannelSpec uniform(double p, std::size_t hops) {
    return ChannelSpec{std::vector<double>(hops, p)};
  }
};

/// All odd-cardinality subsets of {1..M} paired with their complements.
struct OddSubsetFamily {
  struct Member {
    std::vector<int> subset;      // hop indices flipping, 1-based
    std::vector<int> complement;  // remaining hops
  };
  std::size_t hops = 0;
  std::vector<Member> members;  // 2^(M-1) entries, lexicographic
};

// Enumeration guard: 2^(M-1) members get impractical past this point;
// use the closed-form path instead.
inline constexpr std::size_t kMaxEnumerableHops = 24;

OddSubsetFamily enumerate_odd_subsets(std::size_t hops);

/// End-to-end flip probability (1 − Π(1−2p_j))/2; O(M), any hop count.
double flip_probability(const ChannelSpec& spec);

/// Same quantity by explicit odd-subset enumeration; exact oracle, M <= 24.
double flip_probability_enumerated(const ChannelSpec& spec);

/// Uniform-p cascade closed form (1 − (1−2p)^M)/2.
double flip_probability_equal(double p, std::size_t hops);

}  // namespace wsn
