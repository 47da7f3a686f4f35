#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "wsn/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void emit(const wsn::SweepResult& result, const std::string& out_path) {
  if (out_path.empty())
    wsn::write_csv(result, std::cout);
  else {
    wsn::write_csv_file(result, out_path);
    std::cerr << "wrote " << out_path << "\n";
  }
}

int cmd_run(const std::string& config_path, const wsn::KeyValueOverrides& overrides) {
  wsn::ExperimentConfig config = wsn::parse_config(config_path, overrides);
  const wsn::SweepResult result = wsn::run_experiment(config);
  emit(result, config.output_path);
  return 0;
}

int cmd_table2(std::uint64_t seed, std::size_t trials, unsigned workers) {
  wsn::TrialConfig trial;
  trial.signal.kind = wsn::SignalKind::ThreeHarmonic;
  trial.x_th = 4.5;
  trial.sensors = {0.0, 1.0, 3};
  trial.channel = wsn::ChannelSpec::uniform(0.1, 1);
  trial.trials = trials;
  trial.seed = seed;

  trial.signal.eta = 300;
  const auto coarse = wsn::analyze(trial);
  trial.signal.eta = 10000;
  const auto fine = wsn::analyze(trial);
  const auto sim = wsn::run_simulation(trial, workers);

  std::cout << std::fixed << std::setprecision(3);
  std::cout << "rule       analytic(eta=300)  analytic(eta=1e4)  simulated(" << trials
            << "x1e4, seed=" << seed << ")\n";
  for (std::size_t r = 0; r < trial.rules.size(); ++r) {
    std::cout << std::left << std::setw(11) << trial.rules[r].name() << std::right
              << std::setw(12) << coarse[r].p_e << std::setw(19) << fine[r].p_e
              << std::setw(17) << sim.rates[r].p_e << "  (+/- "
              << std::setprecision(4) << 3.0 * sim.rates[r].std_err
              << std::setprecision(3) << ")\n";
  }
  return 0;
}

wsn::ExperimentConfig figure_config(int figure) {
  wsn::ExperimentConfig config;
  config.base.signal.eta = 10000;
  config.base.sensors = {0.0, 1.0, 3};
  config.base.channel = wsn::ChannelSpec::uniform(0.1, 1);
  config.mode = wsn::RunMode::Analytic;
  switch (figure) {
    case 4: config.base.x_th = 4.5; break;
    case 5: config.base.x_th = 5.5; break;
    case 6: config.base.x_th = 3.0; break;
    case 7: config.base.x_th = 1.5; break;
    case 8:
      config.base.x_th = 4.5;
      config.axis = wsn::SweepAxis::Hops;
      config.sweep_values = wsn::parse_sweep_values("1:1:10");
      return config;
    case 9:
      config.base.x_th = 4.5;
      config.axis = wsn::SweepAxis::FlipProb;
      config.sweep_values = wsn::parse_sweep_values("0:0.05:0.5");
      return config;
    default:
      throw wsn::ConfigError("fig: expected a figure number in 4..9");
  }
  // Figs. 4-7 sweep the sensor count; the plotted grid is N = 1..41.
  config.axis = wsn::SweepAxis::Sensors;
  config.sweep_values = wsn::parse_sweep_values("1:1:41");
  return config;
}

int cmd_fig(int figure, const std::string& mode, std::uint64_t seed, std::string out,
            unsigned workers) {
  wsn::ExperimentConfig config = figure_config(figure);
  if (mode == "analytic")
    config.mode = wsn::RunMode::Analytic;
  else if (mode == "simulate")
    config.mode = wsn::RunMode::Simulate;
  else if (mode == "both")
    config.mode = wsn::RunMode::Both;
  else
    throw wsn::ConfigError("fig: unknown mode '" + mode + "'");
  config.base.seed = seed;
  config.workers = workers;
  if (out.empty()) out = "fig" + std::to_string(figure) + ".csv";
  emit(wsn::run_experiment(config), out);
  return 0;
}

int cmd_trace(const std::string& config_path, const wsn::KeyValueOverrides& overrides,
              std::size_t first, std::size_t count, const std::string& out_path) {
  const wsn::ExperimentConfig config = wsn::parse_config(config_path, overrides);
  const wsn::ChannelTrace trace = wsn::capture_trace(config.base, first, count);
  if (out_path.empty())
    wsn::write_trace(trace, std::cout);
  else {
    std::ofstream out(out_path);
    if (!out) throw wsn::ConfigError("trace: cannot write '" + out_path + "'");
    wsn::write_trace(trace, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average decision error of a sensor network with noisy sensing,\n"
               "BSC multi-hop links and OR/AND/K-out-of-N/MAJORITY fusion"};
  app.require_subcommand(1);

  std::string config_path, sweep, rules, mode, out;
  std::uint64_t seed = 0;
  bool seed_set = false, mode_set = false;
  std::size_t trials = 10;
  unsigned workers = 1;

  auto add_override_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value configuration file");
    cmd->add_option("--mode", mode, "analytic|simulate|both")->each([&](const std::string&) {
      mode_set = true;
    });
    cmd->add_option("--sweep", sweep, "axis=values, e.g. N=1:2:41 or p=0,0.1,0.2");
    cmd->add_option("--rules", rules, "or,and,majority,kofn:K");
    cmd->add_option("--seed", seed, "simulation seed")->each([&](const std::string&) {
      seed_set = true;
    });
    cmd->add_option("--out", out, "output csv path");
    cmd->add_option("--workers", workers, "simulation worker threads");
  };

  auto* run = app.add_subcommand("run", "run a configured sweep");
  add_override_flags(run);

  auto* table2 = app.add_subcommand("table2", "snapshot comparison table (x_th=4.5, N=3, M=1, p=0.1)");
  table2->add_option("--seed", seed, "simulation seed");
  table2->add_option("--trials", trials, "passes over the eta=1e4 grid");
  table2->add_option("--workers", workers, "simulation worker threads");

  int figure = 4;
  auto* fig = app.add_subcommand("fig", "figure data series (4..9)");
  fig->add_option("number", figure, "figure number")->required();
  fig->add_option("--mode", mode, "analytic|simulate|both");
  fig->add_option("--seed", seed, "simulation seed");
  fig->add_option("--out", out, "output csv path (default fig<k>.csv)");
  fig->add_option("--workers", workers, "simulation worker threads");

  std::size_t trace_first = 0, trace_count = 300;
  auto* trace = app.add_subcommand("trace", "per-hop state lattice for a sample window");
  add_override_flags(trace);
  trace->add_option("--first", trace_first, "first sample index");
  trace->add_option("--count", trace_count, "window length");

  CLI11_PARSE(app, argc, argv);

  try {
    wsn::KeyValueOverrides overrides;
    if (mode_set || (!mode.empty() && run->parsed())) overrides.entries.push_back({"mode", mode});
    if (!sweep.empty()) overrides.entries.push_back({"sweep", sweep});
    if (!rules.empty()) overrides.entries.push_back({"rules", rules});
    if (seed_set) overrides.entries.push_back({"seed", std::to_string(seed)});
    if (!out.empty() && (run->parsed() || trace->parsed()))
      overrides.entries.push_back({"out", out});
    if (workers != 1) overrides.entries.push_back({"workers", std::to_string(workers)});

    if (run->parsed()) return cmd_run(config_path, overrides);
    if (table2->parsed()) return cmd_table2(seed, trials, workers);
    if (fig->parsed())
      return cmd_fig(figure, mode.empty() ? "analytic" : mode, seed, out, workers);
    if (trace->parsed())
      return cmd_trace(config_path, overrides, trace_first, trace_count, out);
  } catch (const wsn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
