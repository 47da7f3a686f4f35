#include "wsn/sensing.hpp"

#include <cmath>

namespace wsn {

double SensorModel::sigma() const { return std::sqrt(sigma2); }

double observe_probability_below(double x, double x_th, const SensorModel& model) {
  model.validate();
  const double z = (x_th - x - model.mu) / (model.sigma() * std::sqrt(2.0));
  return 0.5 * (1.0 + std::erf(z));
}

SensingProbabilities sensing_profile(const SampledSignal& signal, double x_th,
                                     const SensorModel& model) {
  if (signal.values.empty()) throw ConfigError("sensing: empty signal");
  SensingProbabilities out;
  out.p_below.reserve(signal.size());
  out.p_above.reserve(signal.size());
  for (double x : signal.values) {
    const double pb = observe_probability_below(x, x_th, model);
    out.p_below.push_back(pb);
    out.p_above.push_back(1.0 - pb);
  }
  return out;
}

}  // namespace wsn
