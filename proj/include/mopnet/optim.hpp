#ifndef MOPNET_OPTIM_HPP
#define MOPNET_OPTIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mopnet/net.hpp"

namespace mopnet {

enum class OptimizerKind { Sgd, RmsProp, Adam };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

enum class ScheduleKind { Constant, TimeDecay, SigmoidDrop };

/// Deterministic learning-rate rule. TimeDecay is evaluated per optimizer
/// iteration k (batches); SigmoidDrop per epoch kappa.
struct LearningRateSchedule {
  ScheduleKind kind = ScheduleKind::Constant;
  double t0 = 0.001;       // Constant / TimeDecay base rate
  double decay = 0.0;      // TimeDecay
  double t_start = 0.001;  // SigmoidDrop
  double t_end = 0.0001;
  int kappa_max = 1;

  void validate() const;
  /// Rate for optimizer iteration k (0-based) within epoch kappa (1-based).
  double rate(long k, int kappa) const;
};

/// t0 / (1 + decay * k)
double lr_time_decay(double t0, double decay, long k);

/// Sigmoid drop from t_start to t_end centered at 75% of kappa_max.
double lr_sigmoid_drop(int kappa, int kappa_max, double t_start, double t_end);

/// Per-optimizer accumulators. A state instance is owned by one training loop.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Sgd;
  long k = 0;  // completed step count; Adam bias correction uses k after increment

  // hyperparameters
  double momentum = 0.0;    // SGD M_O
  double beta = 0.9;        // RMSProp moving-average factor
  double beta1 = 0.9;       // Adam
  double beta2 = 0.999;     // Adam
  double epsilon = 1e-8;    // denominator guard; 1e-7 for RMSProp by default

  std::vector<double> velocity;  // SGD momentum buffer
  std::vector<double> mov;       // RMSProp squared-gradient moving average
  std::vector<double> m, v;      // Adam moment estimates

  static OptimizerState make(OptimizerKind kind, std::size_t n);
};

/// w -= t*g, or with momentum: v = v*M_O - t*g; w += v.
void sgd_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g, double t);

/// mov = beta*mov + (1-beta)*g^2; w -= t*g / (sqrt(mov) + eps).
void rmsprop_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g, double t);

/// Bias-corrected first/second moment update.
void adam_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g, double t);

/// Dispatch on state.kind.
void optimizer_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g,
                    double t);

}  // namespace mopnet

#endif  // MOPNET_OPTIM_HPP
