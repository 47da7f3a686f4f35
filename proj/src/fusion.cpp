#include "wsn/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace wsn {

std::size_t FusionRule::threshold(std::size_t sensors) const {
  switch (kind) {
    case RuleKind::Or:
      return 1;
    case RuleKind::And:
      return sensors;
    case RuleKind::Majority:
      return (sensors + 1) / 2;
    case RuleKind::KOutOfN:
      if (k < 1 || k > sensors)
        throw ConfigError("fusion: K must satisfy 1 <= K <= N");
      return k;
  }
  throw ConfigError("fusion: unknown rule");
}

std::string FusionRule::name() const {
  switch (kind) {
    case RuleKind::Or: return "OR";
    case RuleKind::And: return "AND";
    case RuleKind::Majority: return "MAJORITY";
    case RuleKind::KOutOfN: return std::to_string(k) + "-OUT-OF-N";
  }
  return "?";
}

int decide(const FusionRule& rule, const ReceivedVector& received, const TieCoin& coin) {
  const std::size_t n = received.bits.size();
  if (n == 0) throw ConfigError("decide: empty received vector");
  std::size_t ones = 0;
  for (auto b : received.bits) ones += (b != 0);
  const std::size_t zeros = n - ones;
  switch (rule.kind) {
    case RuleKind::Or:
      return ones > 0 ? 1 : 0;
    case RuleKind::And:
      return ones == n ? 1 : 0;
    case RuleKind::Majority:
      if (ones == zeros) return coin() & 1;
      return ones > zeros ? 1 : 0;
    case RuleKind::KOutOfN: {
      const std::size_t k = rule.threshold(n);
      const bool one_wins = ones >= k;
      const bool zero_wins = zeros >= k;
      if (one_wins != zero_wins) return one_wins ? 1 : 0;
      // Exact split (and the degenerate K <= N/2 double-quorum / K > N/2
      // no-quorum cases): randomized.
      return coin() & 1;
    }
  }
  throw ConfigError("decide: unknown rule");
}

PerSampleMismatch per_sample_mismatch(const SensingProbabilities& sensing,
                                      double channel_flip, const StateSeries& states) {
  if (!(channel_flip >= 0.0 && channel_flip <= 1.0))
    throw ConfigError("fusion: channel flip probability must be in [0,1]");
  if (sensing.p_below.size() != states.eta())
    throw ConfigError("fusion: sensing profile and state series length mismatch");
  PerSampleMismatch out;
  out.q_below.reserve(states.count_below());
  out.q_above.reserve(states.count_above());
  for (std::size_t n : states.below_idx)
    out.q_below.push_back(sensing.p_below[n] * channel_flip +
                          sensing.p_above[n] * (1.0 - channel_flip));
  for (std::size_t n : states.above_idx)
    out.q_above.push_back(sensing.p_above[n] * channel_flip +
                          sensing.p_below[n] * (1.0 - channel_flip));
  return out;
}

namespace {

// Exact up to n = 60; C(60,30) still fits in 64 bits.
constexpr std::size_t kExactBinomialLimit = 60;

std::uint64_t binomial_coefficient_u64(std::size_t n, std::size_t k) {
  if (k > n - k) k = n - k;
  std::uint64_t res = 1;
  for (std::size_t i = 0; i < k; ++i) {
    res *= n - i;
    res /= i + 1;
  }
  return res;
}

}  // namespace

double prob_k_of_n_errors(double q, std::size_t k, std::size_t n) {
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("fusion: q must be in [0,1]");
  if (k > n) throw ConfigError("fusion: K must satisfy 0 <= K <= N");
  if (q == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 1.0) return k == n ? 1.0 : 0.0;
  if (n <= kExactBinomialLimit) {
    return double(binomial_coefficient_u64(n, k)) * std::pow(q, double(k)) *
           std::pow(1.0 - q, double(n - k));
  }
  const double lc = std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
                    std::lgamma(double(n - k) + 1.0);
  return std::exp(lc + double(k) * std::log(q) +
                  double(n - k) * std::log1p(-q));
}

double prob_at_least_k_errors(double q, std::size_t k, std::size_t n,
                              bool subtract_half_split) {
  std::vector<double> terms;
  terms.reserve(n - k + 1);
  for (std::size_t j = k; j <= n; ++j) terms.push_back(prob_k_of_n_errors(q, j, n));
  std::sort(terms.begin(), terms.end());
  double tail = 0.0;
  for (double t : terms) tail += t;
  if (subtract_half_split) {
    if (n % 2 != 0 || k != n / 2)
      throw ConfigError("fusion: half-split correction needs even N and K = N/2");
    tail -= 0.5 * prob_k_of_n_errors(q, n / 2, n);
  }
  return std::clamp(tail, 0.0, 1.0);
}

ErrorReport error_probability(const FusionRule& rule, const PerSampleMismatch& mismatch,
                              const StateSeries& states, std::size_t sensors) {
  if (sensors < 1) throw ConfigError("fusion: N must be >= 1");
  if (mismatch.q_below.size() != states.count_below() ||
      mismatch.q_above.size() != states.count_above())
    throw ConfigError("fusion: mismatch lists inconsistent with state partition");

  const int s = states.convention.s_label;
  std::size_t k_below, k_above;
  bool half_split = false;
  switch (rule.kind) {
    case RuleKind::Or:
      // Error events: θ=0 side needs >=1 wrong, θ=1 side needs all wrong.
      k_below = (s == 0) ? 1 : sensors;
      k_above = (s == 0) ? sensors : 1;
      break;
    case RuleKind::And:
      k_below = (s == 0) ? sensors : 1;
      k_above = (s == 0) ? 1 : sensors;
      break;
    case RuleKind::Majority:
    case RuleKind::KOutOfN: {
      const std::size_t k = rule.threshold(sensors);
      k_below = k_above = k;
      half_split = (sensors % 2 == 0) && (k == sensors / 2);
      break;
    }
    default:
      throw ConfigError("fusion: unknown rule");
  }

  auto side_average = [&](const std::vector<double>& qs, std::size_t k) {
    if (qs.empty()) return 0.0;  // zero-frequency side drops out
    double sum = 0.0;
    for (double q : qs) sum += prob_at_least_k_errors(q, k, sensors, half_split);
    return sum / double(qs.size());
  };

  const double av_below = side_average(mismatch.q_below, k_below);
  const double av_above = side_average(mismatch.q_above, k_above);

  ErrorReport report;
  report.rule = rule;
  report.convention = states.convention;
  report.f_0 = states.state_frequency(0);
  report.f_1 = states.state_frequency(1);
  report.p_e = states.f_below() * av_below + states.f_above() * av_above;
  report.type_I = (s == 0) ? av_below : av_above;
  report.type_II = (s == 0) ? av_above : av_below;
  return report;
}

double asymptotic_limit(const FusionRule& rule, double f_below, double f_above,
                        QuantizationConvention convention,
                        std::optional<KGrowthPolicy> policy, double k_ratio) {
  if (std::abs(f_below + f_above - 1.0) > 1e-9)
    throw ConfigError("fusion: frequencies must sum to 1");
  const int s = convention.s_label;
  switch (rule.kind) {
    case RuleKind::Or:
      // Asymptotically always decides 1, erring on the θ=0 mass.
      return s == 0 ? f_below : f_above;
    case RuleKind::And:
      // Asymptotically always decides 0 (De Morgan dual of OR).
      return s == 0 ? f_above : f_below;
    case RuleKind::Majority:
      return 0.0;
    case RuleKind::KOutOfN:
      if (!policy)
        throw ConfigError(
            "fusion: K-out-of-N limit needs an explicit K growth policy");
      if (*policy == KGrowthPolicy::Fixed) return 1.0;  // K < ceil(N/2) eventually
      return k_ratio >= 0.5 ? 0.0 : 1.0;
  }
  throw ConfigError("fusion: unknown rule");
}

}  // namespace wsn
