#ifndef MOPNET_TRAIN_HPP
#define MOPNET_TRAIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mopnet/data.hpp"
#include "mopnet/mo_optim.hpp"
#include "mopnet/net.hpp"
#include "mopnet/objectives.hpp"
#include "mopnet/optim.hpp"
#include "mopnet/pruning.hpp"

namespace mopnet {

/// How loss and regularizer gradients are combined into one descent direction.
/// Regularized: g_loss + lambda*g_reg. WeightedSum: (1-lambda)*g_loss + lambda*g_reg.
enum class ScalarizationForm { Regularized, WeightedSum };

std::string to_string(ScalarizationForm f);
ScalarizationForm scalarization_from_string(const std::string& s);

struct TrainConfig {
  NetworkSpec spec;

  bool multiobjective = false;
  OptimizerKind optimizer = OptimizerKind::Adam;
  MoOptimizerKind mo_optimizer = MoOptimizerKind::MAdam;
  double momentum = 0.0;  // SGD
  double beta = 0.9;      // RMSProp family
  double beta1 = 0.9;     // Adam family
  double beta2 = 0.999;
  std::optional<double> epsilon;  // default chosen per optimizer kind

  LearningRateSchedule schedule;

  RegularizerSpec regularizer;
  double lambda = 0.0;
  ScalarizationForm form = ScalarizationForm::Regularized;

  PruningPolicy pruning;

  int epochs = 10;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;

  void validate(const Dataset& train) const;
};

struct EpochMetrics {
  int epoch = 0;  // 0 is the pre-training state
  double lr = 0.0;
  double e_train = 0.0;
  double e_test = 0.0;
  double omega_l1 = 0.0;
  std::vector<std::size_t> omega_l0;
  double acc_train = 0.0;
  double acc_test = 0.0;
  std::size_t pruned_count = 0;
  std::size_t regrown_since_last = 0;

  static std::string csv_header(std::size_t dense_layers);
  std::string csv_row() const;
};

struct TrainResult {
  WeightVector weights;
  std::vector<EpochMetrics> per_epoch;
  ObjectivePoint final_point;
  std::vector<double> lambda_history;  // multiobjective runs only
  std::size_t null_steps = 0;
};

/// Runs the full training loop: seeded epoch shuffles, gradient scalarization
/// (or the min-norm subproblem for multiobjective runs), optimizer steps, and
/// pruning hooks. Deterministic for a fixed (config, data).
TrainResult train(const TrainConfig& config, const Dataset& train_data, const Dataset& test_data);

/// Objective-space snapshot of a weight vector over both dataset splits.
ObjectivePoint evaluate_point(const NetworkSpec& spec, const RegularizerSpec& reg,
                              const WeightVector& w, const Dataset& train_data,
                              const Dataset& test_data);

}  // namespace mopnet

#endif  // MOPNET_TRAIN_HPP
