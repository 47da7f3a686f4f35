#include "wsn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace wsn {

void ExperimentConfig::validate() const {
  base.validate();
  if (sweep_values.empty()) throw ConfigError("experiment: empty sweep");
  for (double v : sweep_values) {
    switch (axis) {
      case SweepAxis::Sensors:
      case SweepAxis::Hops:
        if (v < 1.0 || v != std::floor(v))
          throw ConfigError("experiment: sweep values for " + axis_name(axis) +
                            " must be positive integers");
        break;
      case SweepAxis::FlipProb:
        if (!(v >= 0.0 && v <= 1.0))
          throw ConfigError("experiment: sweep values for p must be in [0,1]");
        break;
      case SweepAxis::Threshold:
        break;
    }
  }
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Sensors: return "N";
    case SweepAxis::Hops: return "M";
    case SweepAxis::FlipProb: return "p";
    case SweepAxis::Threshold: return "x_th";
  }
  return "?";
}

std::vector<ErrorReport> analyze(const TrialConfig& config) {
  config.validate();
  const SampledSignal signal = sample_signal(config.signal);
  const StateSeries states = quantize(signal, config.x_th, config.convention);
  const SensingProbabilities sensing =
      sensing_profile(signal, config.x_th, config.sensors);
  const double flip = flip_probability(config.channel);
  const PerSampleMismatch mismatch = per_sample_mismatch(sensing, flip, states);
  std::vector<ErrorReport> reports;
  reports.reserve(config.rules.size());
  for (const auto& rule : config.rules)
    reports.push_back(error_probability(rule, mismatch, states, config.sensors.sensors));
  return reports;
}

namespace {

TrialConfig apply_sweep_value(const ExperimentConfig& config, double value) {
  TrialConfig trial = config.base;
  switch (config.axis) {
    case SweepAxis::Sensors:
      trial.sensors.sensors = std::size_t(value);
      break;
    case SweepAxis::Hops:
      trial.channel = ChannelSpec::uniform(config.base.channel.hop_probs.at(0),
                                           std::size_t(value));
      break;
    case SweepAxis::FlipProb:
      trial.channel = ChannelSpec::uniform(value, config.base.channel.hops());
      break;
    case SweepAxis::Threshold:
      trial.x_th = value;
      break;
  }
  return trial;
}

}  // namespace

SweepResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  result.axis = config.axis;
  std::vector<double> values = config.sweep_values;
  std::sort(values.begin(), values.end());
  for (double value : values) {
    const TrialConfig trial = apply_sweep_value(config, value);
    std::vector<ErrorReport> analytic;
    if (config.mode != RunMode::Simulate) analytic = analyze(trial);
    SimulationResult sim;
    if (config.mode != RunMode::Analytic) sim = run_simulation(trial, config.workers);
    for (std::size_t r = 0; r < trial.rules.size(); ++r) {
      SweepRow row;
      row.sweep_value = value;
      row.rule = trial.rules[r];
      if (!analytic.empty()) {
        row.analytic_pe = analytic[r].p_e;
        row.analytic_type_I = analytic[r].type_I;
        row.analytic_type_II = analytic[r].type_II;
        row.f_0 = analytic[r].f_0;
        row.f_1 = analytic[r].f_1;
      }
      if (!sim.rates.empty()) {
        row.simulated_pe = sim.rates[r].p_e;
        row.simulated_type_I = sim.rates[r].type_I;
        row.simulated_type_II = sim.rates[r].type_II;
        row.std_err = sim.rates[r].std_err;
        if (analytic.empty()) {
          row.f_0 = double(sim.observations_state0) / double(sim.observations);
          row.f_1 = double(sim.observations_state1) / double(sim.observations);
        }
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

namespace {

void put_cell(std::ostream& out, const std::optional<double>& v) {
  if (v)
    out << *v;
  else
    out << "nan";
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "# wsn-fusion sweep csv v1\n";
  out << axis_name(result.axis)
      << ",rule,analytic_pe,simulated_pe,std_err,type_I,type_II,f_0,f_1\n";
  out << std::setprecision(12);
  for (const auto& row : result.rows) {
    out << row.sweep_value << ',' << row.rule.name() << ',';
    put_cell(out, row.analytic_pe);
    out << ',';
    put_cell(out, row.simulated_pe);
    out << ',';
    put_cell(out, row.std_err);
    out << ',';
    put_cell(out, row.analytic_type_I ? row.analytic_type_I : row.simulated_type_I);
    out << ',';
    put_cell(out, row.analytic_type_II ? row.analytic_type_II : row.simulated_type_II);
    out << ',' << row.f_0 << ',' << row.f_1 << '\n';
  }
}

void write_csv_file(const SweepResult& result, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigError("experiment: cannot write '" + tmp + "'");
    write_csv(result, out);
    if (!out.good()) throw ConfigError("experiment: write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("experiment: cannot move output into '" + path + "'");
}

std::vector<FusionRule> parse_rules(const std::string& text) {
  std::vector<FusionRule> rules;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    std::string lower = item;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    if (lower == "or")
      rules.push_back(FusionRule::Or());
    else if (lower == "and")
      rules.push_back(FusionRule::And());
    else if (lower == "majority")
      rules.push_back(FusionRule::Majority());
    else if (lower.rfind("kofn:", 0) == 0)
      rules.push_back(FusionRule::KOutOfN(std::stoul(lower.substr(5))));
    else
      throw ConfigError("experiment: unknown rule '" + item + "'");
  }
  if (rules.empty()) throw ConfigError("experiment: no rules given");
  return rules;
}

std::vector<double> parse_sweep_values(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    double start, step, stop;
    char c1, c2;
    std::istringstream ss(text);
    if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' ||
        step <= 0.0)
      throw ConfigError("experiment: bad range '" + text + "' (want start:step:stop)");
    for (double v = start; v <= stop + 1e-12 * std::max(1.0, std::abs(stop)); v += step)
      values.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) values.push_back(std::stod(item));
  }
  if (values.empty()) throw ConfigError("experiment: empty sweep '" + text + "'");
  return values;
}

namespace {

const std::map<std::string, std::string> kKeyHelp = {
    {"signal", "three-harmonic | file:<path>"},
    {"eta", "sample count"},
    {"tau", "sampling period"},
    {"x_th", "threshold"},
    {"s_label", "bit assigned to x <= x_th"},
    {"mu", "noise mean"},
    {"sigma2", "noise variance"},
    {"n", "sensor count"},
    {"m", "hop count (uniform channel)"},
    {"p", "per-hop flip probability (uniform channel)"},
    {"hop_probs", "comma list p_1..p_M"},
    {"rules", "or,and,majority,kofn:K"},
    {"trials", "simulation passes over the grid"},
    {"seed", "64-bit seed"},
    {"sweep", "axis=values, e.g. N=1:2:41"},
    {"mode", "analytic | simulate | both"},
    {"out", "csv path"},
    {"workers", "simulation worker threads"},
};

}  // namespace

ExperimentConfig parse_config_text(std::istream& in, const KeyValueOverrides& overrides) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  for (const auto& [key, value] : overrides.entries) kv[key] = value;

  for (const auto& [key, value] : kv)
    if (!kKeyHelp.count(key))
      throw ConfigError("config: unknown key '" + key + "'");

  ExperimentConfig config;
  TrialConfig& base = config.base;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  if (auto v = get("signal")) {
    if (*v == "three-harmonic")
      base.signal.kind = SignalKind::ThreeHarmonic;
    else if (v->rfind("file:", 0) == 0)
      base.signal = load_tabulated_signal(v->substr(5));
    else
      throw ConfigError("config: unknown signal '" + *v + "'");
  }
  if (auto v = get("eta")) {
    if (base.signal.kind == SignalKind::Tabulated)
      throw ConfigError("config: eta is fixed by the tabulated signal file");
    base.signal.eta = std::stoul(*v);
  }
  if (auto v = get("tau")) base.signal.tau = std::stod(*v);
  if (auto v = get("x_th")) base.x_th = std::stod(*v);
  if (auto v = get("s_label")) base.convention.s_label = std::stoi(*v);
  if (auto v = get("mu")) base.sensors.mu = std::stod(*v);
  if (auto v = get("sigma2")) base.sensors.sigma2 = std::stod(*v);
  if (auto v = get("n")) base.sensors.sensors = std::stoul(*v);
  if (get("hop_probs") && (get("m") || get("p")))
    throw ConfigError("config: give either hop_probs or m/p, not both");
  if (auto v = get("hop_probs")) {
    base.channel.hop_probs = parse_sweep_values(*v);
  } else {
    const std::size_t m = get("m") ? std::stoul(*get("m")) : 1;
    const double p = get("p") ? std::stod(*get("p")) : 0.1;
    base.channel = ChannelSpec::uniform(p, m);
  }
  if (auto v = get("rules")) base.rules = parse_rules(*v);
  if (auto v = get("trials")) base.trials = std::stoul(*v);
  if (auto v = get("seed")) base.seed = std::stoull(*v);
  if (auto v = get("workers")) config.workers = unsigned(std::stoul(*v));
  if (auto v = get("out")) config.output_path = *v;
  if (auto v = get("mode")) {
    if (*v == "analytic")
      config.mode = RunMode::Analytic;
    else if (*v == "simulate")
      config.mode = RunMode::Simulate;
    else if (*v == "both")
      config.mode = RunMode::Both;
    else
      throw ConfigError("config: unknown mode '" + *v + "'");
  }
  if (auto v = get("sweep")) {
    const auto eq = v->find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: sweep wants axis=values, e.g. N=1:2:41");
    const std::string axis = v->substr(0, eq);
    if (axis == "N")
      config.axis = SweepAxis::Sensors;
    else if (axis == "M")
      config.axis = SweepAxis::Hops;
    else if (axis == "p")
      config.axis = SweepAxis::FlipProb;
    else if (axis == "x_th")
      config.axis = SweepAxis::Threshold;
    else
      throw ConfigError("config: unknown sweep axis '" + axis + "'");
    config.sweep_values = parse_sweep_values(v->substr(eq + 1));
  } else {
    // Degenerate single-point sweep over the base configuration.
    config.axis = SweepAxis::Sensors;
    config.sweep_values = {double(base.sensors.sensors)};
  }
  config.validate();
  return config;
}

ExperimentConfig parse_config(const std::string& path, const KeyValueOverrides& overrides) {
  if (path.empty()) {
    std::istringstream empty;
    return parse_config_text(empty, overrides);
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config_text(in, overrides);
}

}  // namespace wsn
