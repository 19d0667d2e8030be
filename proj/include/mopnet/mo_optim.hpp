#ifndef MOPNET_MO_OPTIM_HPP
#define MOPNET_MO_OPTIM_HPP

#include <array>
#include <string>
#include <vector>

#include "mopnet/net.hpp"

namespace mopnet {

enum class MoOptimizerKind { Smgd, MRmsProp, MAdam };

std::string to_string(MoOptimizerKind k);
MoOptimizerKind mo_optimizer_from_string(const std::string& s);

/// Per-objective gradients: stochastic loss gradient and exact regularizer
/// gradient, equal lengths.
struct MultiGradient {
  std::vector<double> g_loss;
  std::vector<double> g_reg;
};

struct SubproblemResult {
  double lambda = 0.5;          // weight on g_reg
  std::vector<double> combined;  // (1-lambda)*g_loss + lambda*g_reg
};

/// Min-norm point of the segment [g1, g2]; closed form for two objectives.
/// Coinciding gradients give lambda = 0.5.
SubproblemResult solve_subproblem(const std::vector<double>& g1, const std::vector<double>& g2);

/// Two-objective optimizer state: one accumulator bank per objective and the
/// sequence of subproblem weights chosen so far.
struct MoOptimizerState {
  MoOptimizerKind kind = MoOptimizerKind::Smgd;
  long k = 0;
  double beta = 0.9;      // MRMSProp
  double beta1 = 0.9;     // MAdam
  double beta2 = 0.999;   // MAdam
  double epsilon = 1e-8;  // 1e-7 for MRMSProp by default

  std::array<std::vector<double>, 2> mov;  // MRMSProp banks
  std::array<std::vector<double>, 2> m, v; // MAdam banks
  std::vector<double> lambda_history;      // weight on the regularizer per step
  std::size_t null_steps = 0;              // Pareto-stationary batches (combined g = 0)

  static MoOptimizerState make(MoOptimizerKind kind, std::size_t n);
};

void smgd_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg, double t);
void mrmsprop_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg, double t);
void madam_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg, double t);

void mo_optimizer_step(MoOptimizerState& state, WeightVector& w, const MultiGradient& mg,
                       double t);

}  // namespace mopnet

#endif  // MOPNET_MO_OPTIM_HPP
