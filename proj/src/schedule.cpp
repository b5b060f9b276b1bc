#include "ladder/schedule.hpp"

#include <cmath>

#include "ladder/errors.hpp"

namespace ladder {

BiasSchedule BiasSchedule::sweep(double initial_bias, double rate, double rescale) {
  if (!std::isfinite(initial_bias) || !std::isfinite(rate) || rate == 0.0) {
    throw ConfigError("sweep needs a finite, non-zero rate");
  }
  if (initial_bias * rate >= 0.0) {
    throw ConfigError("sweep bias Delta0 and rate alpha must have opposite signs");
  }
  if (!(rescale >= 1.0)) throw ConfigError("rescale factor r must be >= 1");
  BiasSchedule s;
  s.mode_ = BiasMode::Sweep;
  s.start_ = rescale * initial_bias;
  s.rate_ = rate;
  s.rescale_ = rescale;
  s.duration_ = rescale * (-2.0 * initial_bias / rate);
  return s;
}

BiasSchedule BiasSchedule::quench(double final_bias, double duration) {
  if (!std::isfinite(final_bias)) throw ConfigError("quench bias must be finite");
  if (!(duration >= 0.0)) throw ConfigError("quench duration must be non-negative");
  BiasSchedule s;
  s.mode_ = BiasMode::Quench;
  s.start_ = final_bias;
  s.duration_ = duration;
  return s;
}

double BiasSchedule::operator()(double t) const {
  if (mode_ == BiasMode::Quench) return start_;
  return start_ + rate_ * t;
}

double BiasSchedule::end_bias() const { return mode_ == BiasMode::Quench ? start_ : -start_; }

}  // namespace ladder
