#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wsn/sensing.hpp"
#include "wsn/signal.hpp"

namespace wsn {

enum class RuleKind { Or, And, KOutOfN, Majority };

struct FusionRule {
  RuleKind kind = RuleKind::Majority;
  std::size_t k = 0;  // only for KOutOfN

  static FusionRule Or() { return {RuleKind::Or, 0}; }
  static FusionRule And() { return {RuleKind::And, 0}; }
  static FusionRule KOutOfN(std::size_t k) { return {RuleKind::KOutOfN, k}; }
  static FusionRule Majority() { return {RuleKind::Majority, 0}; }

  /// Vote threshold used when the rule acts on N inputs.
  std::size_t threshold(std::size_t sensors) const;
  std::string name() const;
};

/// Per-sample probability that a single sensor's bit arrives mismatched
/// against the true state, split by side of the threshold.
struct PerSampleMismatch {
  std::vector<double> q_below;  // over n ∈ 𝒮_S (x <= x_th)
  std::vector<double> q_above;  // over n ∈ 𝒮_S̄ (x > x_th)
};

struct ErrorReport {
  FusionRule rule;
  double p_e = 0.0;
  double type_I = 0.0;   // mean error probability over samples with θ[n] = 0
  double type_II = 0.0;  // mean error probability over samples with θ[n] = 1
  double f_0 = 0.0;
  double f_1 = 0.0;
  QuantizationConvention convention;
};

struct ReceivedVector {
  std::vector<std::uint8_t> bits;  // s_1[n]..s_N[n]
};

using TieCoin = std::function<int()>;

/// Fusion-center decision. The N-even exact split under MAJORITY (or
/// K-out-of-N with K = N/2) is resolved by the fair coin.
int decide(const FusionRule& rule, const ReceivedVector& received, const TieCoin& coin);

PerSampleMismatch per_sample_mismatch(const SensingProbabilities& sensing,
                                      double channel_flip,
                                      const StateSeries& states);

/// Binomial point mass C(N,K) q^K (1-q)^(N-K); log-gamma path above N = 60.
double prob_k_of_n_errors(double q, std::size_t k, std::size_t n);

/// Tail Σ_{k=K}^{N} of the above, summed smallest-first. When
/// subtract_half_split is set (N even, K = N/2), half the exact-split
/// mass is removed to account for the randomized tie.
double prob_at_least_k_errors(double q, std::size_t k, std::size_t n,
                              bool subtract_half_split = false);

ErrorReport error_probability(const FusionRule& rule, const PerSampleMismatch& mismatch,
                              const StateSeries& states, std::size_t sensors);

/// How K scales with N when taking the many-sensor limit of K-out-of-N.
enum class KGrowthPolicy { Fixed, ProportionalToN };

/// Limit of P_e as N → ∞. f_below/f_above are the frequencies of the
/// x <= x_th and x > x_th states. K-out-of-N requires an explicit growth
/// policy; under ProportionalToN a ratio K/N >= ½ vanishes, < ½ tends to 1.
double asymptotic_limit(const FusionRule& rule, double f_below, double f_above,
                        QuantizationConvention convention,
                        std::optional<KGrowthPolicy> policy = std::nullopt,
                        double k_ratio = 0.0);

}  // namespace wsn
