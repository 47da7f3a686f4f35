#pragma once

#include <vector>

#include "wsn/signal.hpp"

namespace wsn {

/// Additive Gaussian observation noise shared by all N sensors.
struct SensorModel {
  double mu = 0.0;
  double sigma2 = 1.0;
  std::size_t sensors = 3;  // N

  void validate() const {
    if (!(sigma2 > 0.0)) throw ConfigError("sensing: sigma^2 must be > 0");
    if (sensors < 1) throw ConfigError("sensing: N must be >= 1");
  }
  double sigma() const;
};

struct SensingProbabilities {
  std::vector<double> p_below;  // P(x_i(t_n) <= x_th)
  std::vector<double> p_above;  // complements
};

/// P(x + noise <= x_th) = ½(1 + erf((x_th − x − μ)/(σ√2))).
double observe_probability_below(double x, double x_th, const SensorModel& model);

SensingProbabilities sensing_profile(const SampledSignal& signal, double x_th,
                                     const SensorModel& model);

}  // namespace wsn
