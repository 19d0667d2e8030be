#include "mopnet/optim.hpp"

#include <cmath>

namespace mopnet {

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::RmsProp: return "rmsprop";
    case OptimizerKind::Adam: return "adam";
  }
  return "?";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "rmsprop") return OptimizerKind::RmsProp;
  if (s == "adam") return OptimizerKind::Adam;
  throw ConfigError("unknown optimizer kind: " + s);
}

void LearningRateSchedule::validate() const {
  switch (kind) {
    case ScheduleKind::Constant:
      if (!(t0 > 0.0)) throw ConfigError("constant learning rate must be positive");
      break;
    case ScheduleKind::TimeDecay:
      if (!(t0 > 0.0) || decay < 0.0) throw ConfigError("time-decay schedule needs t0 > 0, decay >= 0");
      break;
    case ScheduleKind::SigmoidDrop:
      if (!(t_start > 0.0) || !(t_end > 0.0) || t_end > t_start || kappa_max < 1) {
        throw ConfigError("sigmoid schedule needs 0 < t_end <= t_start and kappa_max >= 1");
      }
      break;
  }
}

double LearningRateSchedule::rate(long k, int kappa) const {
  switch (kind) {
    case ScheduleKind::Constant: return t0;
    case ScheduleKind::TimeDecay: return lr_time_decay(t0, decay, k);
    case ScheduleKind::SigmoidDrop: return lr_sigmoid_drop(kappa, kappa_max, t_start, t_end);
  }
  return t0;
}

double lr_time_decay(double t0, double decay, long k) {
  return t0 / (1.0 + decay * static_cast<double>(k));
}

double lr_sigmoid_drop(int kappa, int kappa_max, double t_start, double t_end) {
  const double z = (static_cast<double>(kappa) - 0.75 * kappa_max) / (0.075 * kappa_max);
  // stable logistic for large |z|
  const double sigma = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (std::exp(z) + 1.0);
  return -(t_start - t_end) * sigma + t_start;
}

OptimizerState OptimizerState::make(OptimizerKind kind, std::size_t n) {
  OptimizerState s;
  s.kind = kind;
  switch (kind) {
    case OptimizerKind::Sgd:
      s.velocity.assign(n, 0.0);
      break;
    case OptimizerKind::RmsProp:
      s.mov.assign(n, 0.0);
      s.epsilon = 1e-7;
      break;
    case OptimizerKind::Adam:
      s.m.assign(n, 0.0);
      s.v.assign(n, 0.0);
      s.epsilon = 1e-8;
      break;
  }
  return s;
}

namespace {

void check_step(const WeightVector& w, const std::vector<double>& g) {
  if (w.size() != g.size()) throw DimensionError("gradient length does not match weights");
  require_finite(g, "gradient");
}

}  // namespace

void sgd_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g, double t) {
  check_step(w, g);
  const std::size_t n = w.size();
  if (state.momentum == 0.0) {
    for (std::size_t i = 0; i < n; ++i) w[i] -= t * g[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      state.velocity[i] = state.velocity[i] * state.momentum - t * g[i];
      w[i] += state.velocity[i];
    }
  }
  ++state.k;
}

void rmsprop_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g, double t) {
  check_step(w, g);
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    state.mov[i] = state.beta * state.mov[i] + (1.0 - state.beta) * g[i] * g[i];
    const double update = g[i] / (std::sqrt(state.mov[i]) + state.epsilon);
    w[i] -= t * update;
  }
  ++state.k;
}

void adam_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g, double t) {
  check_step(w, g);
  const std::size_t n = w.size();
  const long k = state.k + 1;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(k));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(k));
  for (std::size_t i = 0; i < n; ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g[i] * g[i];
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    const double update = mhat / (std::sqrt(vhat) + state.epsilon);
    w[i] -= t * update;
  }
  state.k = k;
}

void optimizer_step(OptimizerState& state, WeightVector& w, const std::vector<double>& g,
                    double t) {
  switch (state.kind) {
    case OptimizerKind::Sgd: sgd_step(state, w, g, t); break;
    case OptimizerKind::RmsProp: rmsprop_step(state, w, g, t); break;
    case OptimizerKind::Adam: adam_step(state, w, g, t); break;
  }
}

}  // namespace mopnet
