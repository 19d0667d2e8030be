#include "mopnet/train.hpp"

#include <sstream>

namespace mopnet {

std::string to_string(ScalarizationForm f) {
  return f == ScalarizationForm::Regularized ? "regularized" : "weighted-sum";
}

ScalarizationForm scalarization_from_string(const std::string& s) {
  if (s == "regularized") return ScalarizationForm::Regularized;
  if (s == "weighted-sum") return ScalarizationForm::WeightedSum;
  throw ConfigError("unknown scalarization form: " + s);
}

void TrainConfig::validate(const Dataset& train_data) const {
  spec.validate();
  regularizer.validate(spec);
  schedule.validate();
  pruning.validate(spec);
  if (train_data.dim != spec.input_dim() || train_data.classes != spec.output_dim()) {
    throw ConfigError("dataset dimensions do not match network spec");
  }
  if (batch_size < 1 || batch_size > train_data.count) {
    throw ConfigError("batch size must satisfy 1 <= p <= |S|");
  }
  if (epochs < 1) throw ConfigError("epoch count must be >= 1");
  if (!multiobjective) {
    if (form == ScalarizationForm::WeightedSum && !(lambda >= 0.0 && lambda <= 1.0)) {
      throw ConfigError("weighted-sum lambda must lie in [0,1]");
    }
    if (form == ScalarizationForm::Regularized && lambda < 0.0) {
      throw ConfigError("regularization lambda must be >= 0");
    }
  }
}

std::string EpochMetrics::csv_header(std::size_t dense_layers) {
  std::ostringstream out;
  out << "epoch,lr,e_train,e_test,omega_l1";
  for (std::size_t l = 0; l < dense_layers; ++l) out << ",omega_l0_layer" << l;
  out << ",acc_train,acc_test,pruned_count,regrown_since_last";
  return out.str();
}

std::string EpochMetrics::csv_row() const {
  std::ostringstream out;
  out << epoch << ',' << format_double(lr) << ',' << format_double(e_train) << ','
      << format_double(e_test) << ',' << format_double(omega_l1);
  for (std::size_t c : omega_l0) out << ',' << c;
  out << ',' << format_double(acc_train) << ',' << format_double(acc_test) << ',' << pruned_count
      << ',' << regrown_since_last;
  return out.str();
}

ObjectivePoint evaluate_point(const NetworkSpec& spec, const RegularizerSpec& reg,
                              const WeightVector& w, const Dataset& train_data,
                              const Dataset& test_data) {
  RegularizerSpec l1 = reg;
  l1.kind = RegularizerKind::L1;

  ObjectivePoint pt;
  const Batch train_batch = as_batch(train_data);
  const Batch test_batch = as_batch(test_data);
  {
    LossGrad lg = loss_and_grad(spec, w, train_batch);
    pt.e_train = lg.loss;
    pt.acc_train = accuracy(lg.probs, train_batch.labels, train_batch.size, train_data.classes);
  }
  {
    LossGrad lg = loss_and_grad(spec, w, test_batch);
    pt.e_test = lg.loss;
    pt.acc_test = accuracy(lg.probs, test_batch.labels, test_batch.size, test_data.classes);
  }
  pt.omega_l1 = omega(spec, l1, w);
  pt.omega_l0 = nonzero_counts(spec, l1, w);
  return pt;
}

TrainResult train(const TrainConfig& config, const Dataset& train_data, const Dataset& test_data) {
  config.validate(train_data);

  WeightVector w = init_weights(config.spec, config.seed);
  const std::size_t n = w.size();

  OptimizerState so_state = OptimizerState::make(config.optimizer, n);
  so_state.momentum = config.momentum;
  so_state.beta = config.beta;
  so_state.beta1 = config.beta1;
  so_state.beta2 = config.beta2;
  if (config.epsilon) so_state.epsilon = *config.epsilon;

  MoOptimizerState mo_state = MoOptimizerState::make(config.mo_optimizer, n);
  mo_state.beta = config.beta;
  mo_state.beta1 = config.beta1;
  mo_state.beta2 = config.beta2;
  if (config.epsilon) mo_state.epsilon = *config.epsilon;

  PruneTracker tracker(n);
  const std::set<PruneHook> hooks = hook_points(config.pruning);
  std::size_t pruned_acc = 0, regrown_acc = 0;
  auto run_hook = [&](PruneHook h) {
    if (hooks.count(h)) {
      const PruneReport r = tracker.apply(config.spec, config.pruning, w);
      pruned_acc += r.pruned_count;
      regrown_acc += r.regrown_since_last;
    }
  };

  run_hook(PruneHook::AfterInit);

  TrainResult result;
  auto snapshot = [&](int epoch, double lr) {
    ObjectivePoint pt =
        evaluate_point(config.spec, config.regularizer, w, train_data, test_data);
    EpochMetrics m;
    m.epoch = epoch;
    m.lr = lr;
    m.e_train = pt.e_train;
    m.e_test = pt.e_test;
    m.omega_l1 = pt.omega_l1;
    m.omega_l0 = pt.omega_l0;
    m.acc_train = pt.acc_train;
    m.acc_test = pt.acc_test;
    m.pruned_count = pruned_acc;
    m.regrown_since_last = regrown_acc;
    pruned_acc = regrown_acc = 0;
    result.per_epoch.push_back(m);
    return pt;
  };
  snapshot(0, 0.0);

  long k = 0;  // optimizer iteration (batch) counter
  for (int kappa = 1; kappa <= config.epochs; ++kappa) {
    const std::uint64_t epoch_seed = mix_seed(config.seed, 0x5a5a5a5aULL, kappa);
    double last_lr = 0.0;
    for (Batch& batch : batches(train_data, config.batch_size, epoch_seed)) {
      const double t = config.schedule.rate(k, kappa);
      last_lr = t;
      LossGrad lg = loss_and_grad(config.spec, w, batch);
      const WeightVector g_reg = omega_gradient(config.spec, config.regularizer, w);

      if (config.multiobjective) {
        MultiGradient mg{std::move(lg.grad), g_reg};
        mo_optimizer_step(mo_state, w, mg, t);
      } else {
        std::vector<double> g(n);
        if (config.form == ScalarizationForm::WeightedSum) {
          for (std::size_t i = 0; i < n; ++i) {
            g[i] = (1.0 - config.lambda) * lg.grad[i] + config.lambda * g_reg[i];
          }
        } else {
          for (std::size_t i = 0; i < n; ++i) g[i] = lg.grad[i] + config.lambda * g_reg[i];
        }
        optimizer_step(so_state, w, g, t);
      }
      ++k;
      run_hook(PruneHook::AfterBatch);
    }
    run_hook(PruneHook::AfterEpoch);
    snapshot(kappa, last_lr);
  }

  run_hook(PruneHook::AfterTraining);

  result.weights = w;
  result.final_point = evaluate_point(config.spec, config.regularizer, w, train_data, test_data);
  result.final_point.lambda = config.lambda;
  result.final_point.seed = config.seed;
  result.final_point.epochs = config.epochs;
  result.lambda_history = std::move(mo_state.lambda_history);
  result.null_steps = mo_state.null_steps;
  return result;
}

}  // namespace mopnet
