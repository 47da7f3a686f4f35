#pragma once

#include <cstdint>
#include <vector>

#include "wsn/channel.hpp"
#include "wsn/fusion.hpp"
#include "wsn/sensing.hpp"
#include "wsn/signal.hpp"

namespace wsn {

/// Counter-based random stream: every draw is a pure function of
/// (seed, trial, sample, lane, draw), so results do not depend on
/// execution order or worker count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t trial, std::uint64_t sample, std::uint64_t lane,
                     std::uint64_t draw) const;
  /// Uniform in [0,1).
  double uniform(std::uint64_t trial, std::uint64_t sample, std::uint64_t lane,
                 std::uint64_t draw) const;
  /// Standard normal via Box-Muller on two uniforms (draw, draw+1).
  double gaussian(std::uint64_t trial, std::uint64_t sample, std::uint64_t lane,
                  std::uint64_t draw) const;

 private:
  std::uint64_t seed_;
};

struct TrialConfig {
  SignalSpec signal;
  double x_th = 4.5;
  QuantizationConvention convention;
  SensorModel sensors;
  ChannelSpec channel = ChannelSpec::uniform(0.1, 1);
  std::vector<FusionRule> rules = {FusionRule::Or(), FusionRule::And(),
                                   FusionRule::Majority()};
  std::size_t trials = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RuleRates {
  FusionRule rule;
  double p_e = 0.0;
  double type_I = 0.0;   // error rate on θ[n] = 0 observations
  double type_II = 0.0;  // error rate on θ[n] = 1 observations
  double std_err = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t errors_state0 = 0;
  std::uint64_t errors_state1 = 0;
};

struct SimulationResult {
  std::vector<RuleRates> rates;
  std::uint64_t seed = 0;
  std::uint64_t observations = 0;         // trials × η
  std::uint64_t observations_state0 = 0;  // trials × η_0
  std::uint64_t observations_state1 = 0;
};

/// Per-sensor, per-hop intermediate states for a sample window.
struct ChannelTrace {
  std::size_t first_sample = 0;
  std::size_t sample_count = 0;
  std::size_t sensors = 0;
  std::size_t hops = 0;
  // state(n, i, j) with j = 0..M; j = 0 is the sensed bit y_i[n].
  std::vector<std::uint8_t> states;

  std::uint8_t state(std::size_t n, std::size_t i, std::size_t j) const {
    return states[(n * sensors + i) * (hops + 1) + j];
  }
};

SimulationResult run_simulation(const TrialConfig& config, unsigned workers = 1);

/// Regenerates the trial-0 lattice S_{i,j}[n] for samples [first, first+count).
ChannelTrace capture_trace(const TrialConfig& config, std::size_t first,
                           std::size_t count);

/// Plain-text export, one row "n i j state" per lattice entry.
void write_trace(const ChannelTrace& trace, std::ostream& out);

}  // namespace wsn
