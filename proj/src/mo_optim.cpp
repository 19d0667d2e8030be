#include "mopnet/mo_optim.hpp"

#include <algorithm>
#include <cmath>

namespace mopnet {

std::string to_string(MoOptimizerKind k) {
  switch (k) {
    case MoOptimizerKind::Smgd: return "smgd";
    case MoOptimizerKind::MRmsProp: return "mrmsprop";
    case MoOptimizerKind::MAdam: return "madam";
  }
  return "?";
}

MoOptimizerKind mo_optimizer_from_string(const std::string& s) {
  if (s == "smgd") return MoOptimizerKind::Smgd;
  if (s == "mrmsprop") return MoOptimizerKind::MRmsProp;
  if (s == "madam") return MoOptimizerKind::MAdam;
  throw ConfigError("unknown multiobjective optimizer kind: " + s);
}

SubproblemResult solve_subproblem(const std::vector<double>& g1, const std::vector<double>& g2) {
  if (g1.size() != g2.size()) throw DimensionError("subproblem gradients differ in length");
  require_finite(g1, "g1");
  require_finite(g2, "g2");
  const std::size_t n = g1.size();

  // minimize ||(1-l)g1 + l*g2||^2 over l in [0,1]:
  // l* = <g1 - g2, g1> / ||g1 - g2||^2, clamped
  double denom = 0.0, numer = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = g1[i] - g2[i];
    denom += d * d;
    numer += d * g1[i];
  }

  SubproblemResult res;
  res.lambda = denom < 1e-24 ? 0.5 : std::clamp(numer / denom, 0.0, 1.0);
  res.combined.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.combined[i] = (1.0 - res.lambda) * g1[i] + res.lambda * g2[i];
  }
  return res;
}

MoOptimizerState MoOptimizerState::make(MoOptimizerKind kind, std::size_t n) {
  MoOptimizerState s;
  s.kind = kind;
  switch (kind) {
    case MoOptimizerKind::Smgd:
      break;
    case MoOptimizerKind::MRmsProp:
      s.mov[0].assign(n, 0.0);
      s.mov[1].assign(n, 0.0);
      s.epsilon = 1e-7;
      break;
    case MoOptimizerKind::MAdam:
      for (int j = 0; j < 2; ++j) {
        s.m[j].assign(n, 0.0);
        s.v[j].assign(n, 0.0);
      }
      s.epsilon = 1e-8;
      break;
  }
  return s;
}

namespace {

void check_step(const WeightVector& w, const MultiGradient& mg) {
  if (mg.g_loss.size() != w.size() || mg.g_reg.size() != w.size()) {
    throw DimensionError("multigradient length does not match weights");
  }
  require_finite(mg.g_loss, "loss gradient");
  require_finite(mg.g_reg, "regularizer gradient");
}

void record(MoOptimizerState& state, const SubproblemResult& sub) {
  state.lambda_history.push_back(sub.lambda);
  bool all_zero = true;
  for (double x : sub.combined) {
    if (x != 0.0) { all_zero = false; break; }
  }
  if (all_zero) ++state.null_steps;
  ++state.k;
}

}  // namespace

void smgd_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg, double t) {
  check_step(w, mg);
  const SubproblemResult sub = solve_subproblem(mg.g_loss, mg.g_reg);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= t * sub.combined[i];
  record(state, sub);
}

void mrmsprop_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg, double t) {
  check_step(w, mg);
  const SubproblemResult sub = solve_subproblem(mg.g_loss, mg.g_reg);
  const double l1 = 1.0 - sub.lambda, l2 = sub.lambda;
  const std::vector<double>* g[2] = {&mg.g_loss, &mg.g_reg};
  for (std::size_t i = 0; i < w.size(); ++i) {
    double update = 0.0;
    const double lam[2] = {l1, l2};
    for (int j = 0; j < 2; ++j) {
      const double gj = (*g[j])[i];
      state.mov[j][i] = state.beta * state.mov[j][i] + (1.0 - state.beta) * gj * gj;
      update += lam[j] * gj / (std::sqrt(state.mov[j][i]) + state.epsilon);
    }
    w[i] -= t * update;
  }
  record(state, sub);
}

void madam_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg, double t) {
  check_step(w, mg);
  const SubproblemResult sub = solve_subproblem(mg.g_loss, mg.g_reg);
  const double lam[2] = {1.0 - sub.lambda, sub.lambda};
  const std::vector<double>* g[2] = {&mg.g_loss, &mg.g_reg};
  const long k = state.k + 1;  // shared bias-correction counter across banks
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(k));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(k));
  for (std::size_t i = 0; i < w.size(); ++i) {
    double update = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double gj = (*g[j])[i];
      state.m[j][i] = state.beta1 * state.m[j][i] + (1.0 - state.beta1) * gj;
      state.v[j][i] = state.beta2 * state.v[j][i] + (1.0 - state.beta2) * gj * gj;
      const double mhat = state.m[j][i] / c1;
      const double vhat = state.v[j][i] / c2;
      update += lam[j] * mhat / (std::sqrt(vhat) + state.epsilon);
    }
    w[i] -= t * update;
  }
  record(state, sub);
}

void mo_optimizer_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg,
                       double t) {
  switch (state.kind) {
    case MoOptimizerKind::Smgd: smgd_step(state, w, mg, t); break;
    case MoOptimizerKind::MRmsProp: mrmsprop_step(state, w, mg, t); break;
    case MoOptimizerKind::MAdam: madam_step(state, w, mg, t); break;
  }
}

}  // namespace mopnet
