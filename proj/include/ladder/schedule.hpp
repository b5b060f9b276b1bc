#pragma once

#include <string>

namespace ladder {

enum class BiasMode { Sweep, Quench };

// Bias Delta(t) applied to every right-leg site.
//
// Sweep: Delta(t) = r*Delta0 + alpha*t on [0, r*T] with T = -2*Delta0/alpha;
// Delta0 and alpha must have opposite signs. Rescaling by r keeps alpha and
// stretches both the bias range and the sweep time.
// Quench: Delta(t) = Delta_f on [0, T_max].
class BiasSchedule {
 public:
  static BiasSchedule sweep(double initial_bias, double rate, double rescale = 1.0);
  static BiasSchedule quench(double final_bias, double duration);
  static BiasSchedule hold(double bias, double duration) { return quench(bias, duration); }

  BiasMode mode() const { return mode_; }
  double operator()(double t) const;
  double duration() const { return duration_; }

  // Sweep parameters; for a quench rate() is 0 and start/end are Delta_f.
  double rate() const { return rate_; }
  double rescale() const { return rescale_; }
  double start_bias() const { return start_; }
  double end_bias() const;
  double unscaled_initial_bias() const { return start_ / rescale_; }
  double sweep_time() const { return duration_ / rescale_; }  // T

 private:
  BiasMode mode_ = BiasMode::Quench;
  double start_ = 0.0;
  double rate_ = 0.0;
  double rescale_ = 1.0;
  double duration_ = 0.0;
};

}  // namespace ladder
