#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsn/montecarlo.hpp"

namespace wsn {

enum class RunMode { Analytic, Simulate, Both };

enum class SweepAxis { Sensors, Hops, FlipProb, Threshold };

struct ExperimentConfig {
  TrialConfig base;
  SweepAxis axis = SweepAxis::Sensors;
  std::vector<double> sweep_values;
  RunMode mode = RunMode::Both;
  std::string output_path;  // empty: stdout only
  unsigned workers = 1;

  void validate() const;
};

struct SweepRow {
  double sweep_value = 0.0;
  FusionRule rule;
  std::optional<double> analytic_pe;
  std::optional<double> analytic_type_I;
  std::optional<double> analytic_type_II;
  std::optional<double> simulated_pe;
  std::optional<double> simulated_type_I;
  std::optional<double> simulated_type_II;
  std::optional<double> std_err;
  double f_0 = 0.0;
  double f_1 = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Sensors;
  std::vector<SweepRow> rows;  // ordered by sweep value, then rule
};

/// Full analytic pipeline for one configuration, one report per rule.
std::vector<ErrorReport> analyze(const TrialConfig& config);

SweepResult run_experiment(const ExperimentConfig& config);

std::string axis_name(SweepAxis axis);

/// Versioned CSV with a leading comment header.
void write_csv(const SweepResult& result, std::ostream& out);
/// Atomic variant: writes a sibling temp file, then renames over path.
void write_csv_file(const SweepResult& result, const std::string& path);

// -- configuration text format: one `key = value` per line, '#' comments,
//    lists comma-separated; unknown keys are rejected.
struct KeyValueOverrides {
  std::vector<std::pair<std::string, std::string>> entries;
};

ExperimentConfig parse_config(const std::string& path, const KeyValueOverrides& overrides);
ExperimentConfig parse_config_text(std::istream& in, const KeyValueOverrides& overrides);

std::vector<FusionRule> parse_rules(const std::string& text);
std::vector<double> parse_sweep_values(const std::string& text);  // "a:step:b" or "v1,v2,.."

}  // namespace wsn
