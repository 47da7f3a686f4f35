#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsn {

/// Thrown for invalid user-supplied configuration (bad η, τ, K range, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class SignalKind {
  ThreeHarmonic,  // sin(12πt/η) + cos(20πt/η) + sin(26πt/η) + 3
  Tabulated,      // user-supplied sample list
};

struct SignalSpec {
  SignalKind kind = SignalKind::ThreeHarmonic;
  std::size_t eta = 10000;  // sample count
  double tau = 1.0;         // sampling period, t_n = n·τ
  std::vector<double> table;  // samples for Tabulated; ignored otherwise

  void validate() const;
};

struct SampledSignal {
  std::vector<double> values;
  SignalSpec grid;

  std::size_t size() const { return values.size(); }
};

/// Bit label assigned to the below-threshold event x(t_n) <= x_th.
struct QuantizationConvention {
  int s_label = 0;

  int complement() const { return 1 - s_label; }
};

/// Quantized state series with the index partition by true state.
struct StateSeries {
  std::vector<std::uint8_t> theta;     // θ[n]
  std::vector<std::size_t> below_idx;  // samples with x(t_n) <= x_th (state S)
  std::vector<std::size_t> above_idx;  // samples with x(t_n) >  x_th (state S̄)
  QuantizationConvention convention;

  std::size_t eta() const { return theta.size(); }
  std::size_t count_below() const { return below_idx.size(); }
  std::size_t count_above() const { return above_idx.size(); }
  double f_below() const { return eta() ? double(count_below()) / double(eta()) : 0.0; }
  double f_above() const { return eta() ? double(count_above()) / double(eta()) : 0.0; }

  // Index set and frequency for a given state label (0 or 1).
  const std::vector<std::size_t>& state_indices(int label) const {
    return label == convention.s_label ? below_idx : above_idx;
  }
  double state_frequency(int label) const {
    return label == convention.s_label ? f_below() : f_above();
  }
};

SampledSignal sample_signal(const SignalSpec& spec);

/// Loads a tabulated signal: one real per line, blank lines and '#' comments skipped.
SignalSpec load_tabulated_signal(const std::string& path);

StateSeries quantize(const SampledSignal& signal, double x_th,
                     QuantizationConvention convention);

/// Mean of values restricted to index_set. The empty set averages to 0 so
/// that zero-frequency terms drop out of the error formulas.
double average_over(const std::vector<double>& values,
                    const std::vector<std::size_t>& index_set);

}  // namespace wsn
