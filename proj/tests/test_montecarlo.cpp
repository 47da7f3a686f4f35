#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wsn/experiment.hpp"
#include "wsn/montecarlo.hpp"

using namespace wsn;

namespace {

TrialConfig table_config(std::size_t eta, std::size_t trials, std::uint64_t seed) {
  TrialConfig config;
  config.signal.eta = eta;
  config.x_th = 4.5;
  config.sensors = {0.0, 1.0, 3};
  config.channel = ChannelSpec::uniform(0.1, 1);
  config.trials = trials;
  config.seed = seed;
  return config;
}

bool identical(const SimulationResult& a, const SimulationResult& b) {
  if (a.rates.size() != b.rates.size()) return false;
  for (std::size_t r = 0; r < a.rates.size(); ++r) {
    if (a.rates[r].errors != b.rates[r].errors) return false;
    if (a.rates[r].p_e != b.rates[r].p_e) return false;
    if (a.rates[r].std_err != b.rates[r].std_err) return false;
    if (a.rates[r].errors_state0 != b.rates[r].errors_state0) return false;
    if (a.rates[r].errors_state1 != b.rates[r].errors_state1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identical seeds give bit-identical results, any worker count") {
  const TrialConfig config = table_config(400, 20, 99);
  const auto a = run_simulation(config, 1);
  const auto b = run_simulation(config, 1);
  const auto c = run_simulation(config, 4);
  const auto d = run_simulation(config, 7);
  CHECK(identical(a, b));
  CHECK(identical(a, c));
  CHECK(identical(a, d));
  TrialConfig other = config;
  other.seed = 100;
  CHECK_FALSE(identical(a, run_simulation(other, 1)));
}

TEST_CASE("a coin-flip channel drives every rule to one half") {
  TrialConfig config = table_config(1000, 50, 7);
  config.sensors.sensors = 1;
  config.channel = ChannelSpec::uniform(0.5, 1);
  for (const auto& rates : run_simulation(config).rates) {
    CHECK(std::abs(rates.p_e - 0.5) <= 3.0 * rates.std_err);
  }
}

TEST_CASE("no noise and clean channel gives exactly zero errors") {
  TrialConfig config = table_config(500, 5, 3);
  config.sensors.sigma2 = 1e-18;
  config.channel = ChannelSpec::uniform(0.0, 2);
  for (const auto& rates : run_simulation(config).rates) {
    CHECK(rates.errors == 0);
    CHECK(rates.p_e == 0.0);
  }
}

TEST_CASE("simulation agrees with the analytic pipeline across seeds") {
  int within = 0;
  const int seeds = 12;
  const TrialConfig base = table_config(300, 100, 0);
  const auto analytic = analyze(base);
  for (int s = 0; s < seeds; ++s) {
    TrialConfig config = base;
    config.seed = std::uint64_t(1000 + s);
    const auto sim = run_simulation(config);
    bool all = true;
    for (std::size_t r = 0; r < analytic.size(); ++r) {
      if (std::abs(sim.rates[r].p_e - analytic[r].p_e) > 3.0 * sim.rates[r].std_err)
        all = false;
    }
    within += all;
  }
  // 3-sigma misses on one of three rules occasionally; demand the bulk.
  CHECK(within >= seeds - 2);
}

TEST_CASE("empirical type rates recombine into the error rate by counting") {
  const auto sim = run_simulation(table_config(300, 30, 5));
  for (const auto& rates : sim.rates) {
    CHECK(rates.errors == rates.errors_state0 + rates.errors_state1);
    const double recombined =
        (double(sim.observations_state0) * rates.type_I +
         double(sim.observations_state1) * rates.type_II) /
        double(sim.observations);
    CHECK(rates.p_e == doctest::Approx(recombined).epsilon(1e-12));
  }
}

TEST_CASE("empirical hop flips match the channel closed form") {
  const CounterRng rng(12345);
  const ChannelSpec spec{{0.1, 0.25, 0.07}};
  const double expect = flip_probability(spec);
  std::uint64_t flips = 0;
  const std::uint64_t trials = 200000;
  for (std::uint64_t t = 0; t < trials; ++t) {
    int bit = 0;
    for (std::size_t j = 0; j < spec.hops(); ++j)
      if (rng.uniform(t, 0, 0, 2 + j) < spec.hop_probs[j]) bit ^= 1;
    flips += bit;
  }
  const double rate = double(flips) / double(trials);
  const double se = std::sqrt(expect * (1.0 - expect) / double(trials));
  CHECK(std::abs(rate - expect) <= 3.0 * se);
}

TEST_CASE("gaussian stream has the right first moments") {
  const CounterRng rng(8);
  double sum = 0.0, sum2 = 0.0;
  const std::size_t draws = 200000;
  for (std::size_t n = 0; n < draws; ++n) {
    const double z = rng.gaussian(0, n, 0, 0);
    sum += z;
    sum2 += z * z;
  }
  CHECK(sum / double(draws) == doctest::Approx(0.0).epsilon(0.01));
  CHECK(sum2 / double(draws) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("trace with clean channel copies the sensed bit") {
  TrialConfig config = table_config(100, 1, 11);
  config.channel = ChannelSpec::uniform(0.0, 3);
  const auto trace = capture_trace(config, 10, 20);
  for (std::size_t n = 0; n < trace.sample_count; ++n)
    for (std::size_t i = 0; i < trace.sensors; ++i)
      for (std::size_t j = 1; j <= trace.hops; ++j)
        CHECK(trace.state(n, i, j) == trace.state(n, i, 0));
}

TEST_CASE("trace with a certain flip complements the bit each hop") {
  TrialConfig config = table_config(50, 1, 11);
  config.channel = ChannelSpec::uniform(1.0, 1);
  const auto trace = capture_trace(config, 0, 50);
  for (std::size_t n = 0; n < trace.sample_count; ++n)
    for (std::size_t i = 0; i < trace.sensors; ++i)
      CHECK(trace.state(n, i, 1) == 1 - trace.state(n, i, 0));
}

TEST_CASE("trace is reproducible and bounded") {
  const TrialConfig config = table_config(300, 1, 21);
  const auto a = capture_trace(config, 0, 300);
  const auto b = capture_trace(config, 0, 300);
  CHECK(a.states == b.states);
  CHECK_THROWS_AS(capture_trace(config, 250, 100), ConfigError);

  TrialConfig huge = config;
  huge.signal.eta = 5000000;
  huge.sensors.sensors = 50;
  CHECK_THROWS_AS(capture_trace(huge, 0, 5000000), ConfigError);
}

TEST_CASE("trace decisions match decide() on the received vectors") {
  const TrialConfig config = table_config(300, 1, 2);
  const auto trace = capture_trace(config, 0, 300);
  const auto sig = sample_signal(config.signal);
  const auto states = quantize(sig, config.x_th, config.convention);
  const CounterRng rng(config.seed);

  // Rebuild the per-rule error count of trial 0 from the trace and compare
  // with a single-trial simulation.
  TrialConfig one = config;
  one.trials = 1;
  const auto sim = run_simulation(one);
  for (std::size_t r = 0; r < config.rules.size(); ++r) {
    std::uint64_t errors = 0;
    for (std::size_t n = 0; n < trace.sample_count; ++n) {
      ReceivedVector received;
      for (std::size_t i = 0; i < trace.sensors; ++i)
        received.bits.push_back(trace.state(n, i, trace.hops));
      const auto coin = [&] { return int(rng.bits(0, n, trace.sensors, r) & 1u); };
      errors += decide(config.rules[r], received, coin) != int(states.theta[n]);
    }
    CHECK(errors == sim.rates[r].errors);
  }
}

TEST_CASE("trace export format") {
  TrialConfig config = table_config(10, 1, 0);
  config.sensors.sensors = 1;
  const auto trace = capture_trace(config, 0, 2);
  std::ostringstream out;
  write_trace(trace, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "# n i j state");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2 * 1 * (config.channel.hops() + 1));
}

TEST_CASE("bad configs rejected") {
  TrialConfig config = table_config(100, 0, 0);
  CHECK_THROWS_AS(run_simulation(config), ConfigError);
  config = table_config(100, 1, 0);
  config.rules = {FusionRule::KOutOfN(9)};  // K > N
  CHECK_THROWS_AS(run_simulation(config), ConfigError);
}
