#include "wsn/signal.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace wsn {

void SignalSpec::validate() const {
  if (eta < 1) throw ConfigError("signal: eta must be >= 1");
  if (!(tau > 0.0)) throw ConfigError("signal: tau must be > 0");
  if (kind == SignalKind::Tabulated && table.size() != eta)
    throw ConfigError("signal: tabulated sample count does not match eta");
}

SampledSignal sample_signal(const SignalSpec& spec) {
  spec.validate();
  SampledSignal out;
  out.grid = spec;
  out.values.reserve(spec.eta);
  if (spec.kind == SignalKind::Tabulated) {
    out.values = spec.table;
    return out;
  }
  const double eta = double(spec.eta);
  for (std::size_t n = 0; n < spec.eta; ++n) {
    const double t = double(n) * spec.tau;
    const double w = std::numbers::pi * t / eta;
    out.values.push_back(std::sin(12.0 * w) + std::cos(20.0 * w) +
                         std::sin(26.0 * w) + 3.0);
  }
  return out;
}

SignalSpec load_tabulated_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("signal: cannot open '" + path + "'");
  SignalSpec spec;
  spec.kind = SignalKind::Tabulated;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v;
    if (!(ss >> v))
      throw ConfigError("signal: bad value at " + path + ":" + std::to_string(lineno));
    spec.table.push_back(v);
  }
  if (spec.table.empty()) throw ConfigError("signal: '" + path + "' holds no samples");
  spec.eta = spec.table.size();
  return spec;
}

StateSeries quantize(const SampledSignal& signal, double x_th,
                     QuantizationConvention convention) {
  if (signal.values.empty()) throw ConfigError("quantize: empty signal");
  if (convention.s_label != 0 && convention.s_label != 1)
    throw ConfigError("quantize: s_label must be 0 or 1");
  StateSeries series;
  series.convention = convention;
  series.theta.reserve(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const bool below = signal.values[n] <= x_th;  // tie goes to state S
    series.theta.push_back(std::uint8_t(below ? convention.s_label
                                              : convention.complement()));
    (below ? series.below_idx : series.above_idx).push_back(n);
  }
  return series;
}

double average_over(const std::vector<double>& values,
                    const std::vector<std::size_t>& index_set) {
  if (index_set.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t idx : index_set) {
    if (idx >= values.size()) throw ConfigError("average_over: index out of range");
    sum += values[idx];
  }
  return sum / double(index_set.size());
}

}  // namespace wsn
