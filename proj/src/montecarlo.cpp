#include "wsn/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

namespace wsn {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t trial, std::uint64_t sample,
                               std::uint64_t lane, std::uint64_t draw) const {
  std::uint64_t h = mix64(seed_ ^ 0x8f1bbcdcbfa53e0bULL);
  h = mix64(h ^ trial);
  h = mix64(h ^ sample);
  h = mix64(h ^ lane);
  h = mix64(h ^ draw);
  return h;
}

double CounterRng::uniform(std::uint64_t trial, std::uint64_t sample,
                           std::uint64_t lane, std::uint64_t draw) const {
  return double(bits(trial, sample, lane, draw) >> 11) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t trial, std::uint64_t sample,
                            std::uint64_t lane, std::uint64_t draw) const {
  // u1 shifted away from 0 so the log stays finite.
  const double u1 = (double(bits(trial, sample, lane, draw) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform(trial, sample, lane, draw + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void TrialConfig::validate() const {
  signal.validate();
  sensors.validate();
  channel.validate();
  if (trials < 1) throw ConfigError("montecarlo: trials must be >= 1");
  if (rules.empty()) throw ConfigError("montecarlo: no fusion rules selected");
  for (const auto& r : rules) (void)r.threshold(sensors.sensors);
}

namespace {

// Draw layout per (trial, sample, lane = sensor): 0,1 gaussian pair,
// 2+j the flip uniform of hop j. Tie coins live on lane = N, draw = rule.
struct Tally {
  std::vector<std::uint64_t> errors;         // per rule
  std::vector<std::uint64_t> errors_state0;  // per rule
  std::vector<std::uint64_t> errors_state1;  // per rule
};

void simulate_trials(const TrialConfig& config, const SampledSignal& signal,
                     const StateSeries& states, std::size_t trial_begin,
                     std::size_t trial_end, Tally& tally,
                     std::vector<std::vector<std::uint64_t>>& per_trial_errors) {
  const CounterRng rng(config.seed);
  const std::size_t n_sensors = config.sensors.sensors;
  const std::size_t hops = config.channel.hops();
  const double sigma = config.sensors.sigma();
  const double mu = config.sensors.mu;
  const int s_label = config.convention.s_label;
  ReceivedVector received;
  received.bits.resize(n_sensors);

  for (std::size_t t = trial_begin; t < trial_end; ++t) {
    for (std::size_t n = 0; n < signal.size(); ++n) {
      for (std::size_t i = 0; i < n_sensors; ++i) {
        const double obs = signal.values[n] + mu + sigma * rng.gaussian(t, n, i, 0);
        std::uint8_t bit = std::uint8_t(obs <= config.x_th ? s_label : 1 - s_label);
        for (std::size_t j = 0; j < hops; ++j)
          if (rng.uniform(t, n, i, 2 + j) < config.channel.hop_probs[j]) bit ^= 1u;
        received.bits[i] = bit;
      }
      for (std::size_t r = 0; r < config.rules.size(); ++r) {
        const auto coin = [&] { return int(rng.bits(t, n, n_sensors, r) & 1u); };
        const int decision = decide(config.rules[r], received, coin);
        if (decision != int(states.theta[n])) {
          ++tally.errors[r];
          ++per_trial_errors[r][t];
          if (states.theta[n] == 0)
            ++tally.errors_state0[r];
          else
            ++tally.errors_state1[r];
        }
      }
    }
  }
}

}  // namespace

SimulationResult run_simulation(const TrialConfig& config, unsigned workers) {
  config.validate();
  if (workers < 1) workers = 1;
  const SampledSignal signal = sample_signal(config.signal);
  const StateSeries states = quantize(signal, config.x_th, config.convention);
  const std::size_t n_rules = config.rules.size();

  std::vector<Tally> tallies(workers);
  for (auto& tl : tallies) {
    tl.errors.assign(n_rules, 0);
    tl.errors_state0.assign(n_rules, 0);
    tl.errors_state1.assign(n_rules, 0);
  }
  std::vector<std::vector<std::uint64_t>> per_trial_errors(
      n_rules, std::vector<std::uint64_t>(config.trials, 0));

  // Contiguous trial blocks; the counter rng makes the partition irrelevant
  // to the drawn values, and integer tallies merge exactly.
  std::vector<std::thread> threads;
  const std::size_t per_block = (config.trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min<std::size_t>(std::size_t(w) * per_block, config.trials);
    const std::size_t end = std::min(begin + per_block, config.trials);
    threads.emplace_back([&, w, begin, end] {
      simulate_trials(config, signal, states, begin, end, tallies[w],
                      per_trial_errors);
    });
  }
  for (auto& th : threads) th.join();

  SimulationResult result;
  result.seed = config.seed;
  result.observations = std::uint64_t(config.trials) * signal.size();
  result.observations_state0 =
      std::uint64_t(config.trials) * states.state_indices(0).size();
  result.observations_state1 =
      std::uint64_t(config.trials) * states.state_indices(1).size();

  for (std::size_t r = 0; r < n_rules; ++r) {
    RuleRates rates;
    rates.rule = config.rules[r];
    for (unsigned w = 0; w < workers; ++w) {
      rates.errors += tallies[w].errors[r];
      rates.errors_state0 += tallies[w].errors_state0[r];
      rates.errors_state1 += tallies[w].errors_state1[r];
    }
    rates.p_e = double(rates.errors) / double(result.observations);
    rates.type_I = result.observations_state0
                       ? double(rates.errors_state0) / double(result.observations_state0)
                       : 0.0;
    rates.type_II = result.observations_state1
                        ? double(rates.errors_state1) / double(result.observations_state1)
                        : 0.0;
    if (config.trials > 1) {
      // Spread of the per-trial means.
      double mean = 0.0;
      for (auto e : per_trial_errors[r]) mean += double(e) / double(signal.size());
      mean /= double(config.trials);
      double var = 0.0;
      for (auto e : per_trial_errors[r]) {
        const double d = double(e) / double(signal.size()) - mean;
        var += d * d;
      }
      var /= double(config.trials - 1);
      rates.std_err = std::sqrt(var / double(config.trials));
    } else {
      rates.std_err =
          std::sqrt(rates.p_e * (1.0 - rates.p_e) / double(result.observations));
    }
    result.rates.push_back(rates);
  }
  return result;
}

ChannelTrace capture_trace(const TrialConfig& config, std::size_t first,
                           std::size_t count) {
  config.validate();
  const SampledSignal signal = sample_signal(config.signal);
  if (first + count > signal.size() || count == 0)
    throw ConfigError("trace: sample window out of range");
  const std::size_t n_sensors = config.sensors.sensors;
  const std::size_t hops = config.channel.hops();
  constexpr std::size_t kMaxEntries = 10'000'000;
  if (count * n_sensors * (hops + 1) > kMaxEntries)
    throw ConfigError("trace: requested window exceeds capture limit");

  const CounterRng rng(config.seed);
  const double sigma = config.sensors.sigma();
  ChannelTrace trace;
  trace.first_sample = first;
  trace.sample_count = count;
  trace.sensors = n_sensors;
  trace.hops = hops;
  trace.states.resize(count * n_sensors * (hops + 1));
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t n = first + w;
    for (std::size_t i = 0; i < n_sensors; ++i) {
      const double obs =
          signal.values[n] + config.sensors.mu + sigma * rng.gaussian(0, n, i, 0);
      std::uint8_t bit = std::uint8_t(obs <= config.x_th ? config.convention.s_label
                                                         : config.convention.complement());
      const std::size_t base = (w * n_sensors + i) * (hops + 1);
      trace.states[base] = bit;
      for (std::size_t j = 0; j < hops; ++j) {
        if (rng.uniform(0, n, i, 2 + j) < config.channel.hop_probs[j]) bit ^= 1u;
        trace.states[base + j + 1] = bit;
      }
    }
  }
  return trace;
}

void write_trace(const ChannelTrace& trace, std::ostream& out) {
  out << "# n i j state\n";
  for (std::size_t w = 0; w < trace.sample_count; ++w)
    for (std::size_t i = 0; i < trace.sensors; ++i)
      for (std::size_t j = 0; j <= trace.hops; ++j)
        out << trace.first_sample + w << ' ' << i << ' ' << j << ' '
            << int(trace.state(w, i, j)) << '\n';
}

}  // namespace wsn
