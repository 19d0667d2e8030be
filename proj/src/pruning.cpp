#include "mopnet/pruning.hpp"

#include <cmath>

namespace mopnet {

std::string to_string(PruneStrategy s) {
  switch (s) {
    case PruneStrategy::Batchwise: return "batchwise";
    case PruneStrategy::Epochwise: return "epochwise";
    case PruneStrategy::AfterTraining: return "after-training";
    case PruneStrategy::Off: return "off";
  }
  return "?";
}

PruneStrategy prune_strategy_from_string(const std::string& s) {
  if (s == "batchwise") return PruneStrategy::Batchwise;
  if (s == "epochwise") return PruneStrategy::Epochwise;
  if (s == "after-training") return PruneStrategy::AfterTraining;
  if (s == "off") return PruneStrategy::Off;
  throw ConfigError("unknown pruning strategy: " + s);
}

void PruningPolicy::validate(const NetworkSpec& spec) const {
  if (strategy == PruneStrategy::Off) return;
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("pruning threshold tau must lie in (0,1)");
  if (applies_to.empty()) throw ConfigError("pruning applies_to must not be empty");
  for (std::size_t l : applies_to) {
    if (l >= spec.num_layers()) {
      throw ConfigError("pruning layer index out of range: " + std::to_string(l));
    }
  }
}

namespace {

PruneReport prune_impl(const NetworkSpec& spec, const PruningPolicy& policy, WeightVector& w,
                       std::vector<std::uint8_t>* was_zero) {
  if (policy.strategy == PruneStrategy::Off) {
    throw ConfigError("prune called with strategy off");
  }
  policy.validate(spec);
  PruneReport report;
  for (std::size_t l : policy.applies_to) {
    const std::size_t off = spec.layer_offset(l);
    const std::size_t n = spec.layer_weight_count(l);  // biases excluded
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double& x = w[off + i];
      const bool prev_zero = was_zero && !was_zero->empty() && (*was_zero)[off + i];
      if (std::fabs(x) < policy.tau) {  // strict: exactly-tau survives
        if (x != 0.0) ++report.pruned_count;
        x = 0.0;
      } else {
        if (prev_zero) ++report.regrown_since_last;
        ++nonzero;
      }
      if (was_zero && !was_zero->empty()) (*was_zero)[off + i] = (x == 0.0) ? 1 : 0;
    }
    report.nonzero_per_layer.push_back(nonzero);
  }
  return report;
}

}  // namespace

PruneReport PruneTracker::apply(const NetworkSpec& spec, const PruningPolicy& policy,
                                WeightVector& w) {
  if (was_zero_.size() != w.size()) was_zero_.assign(w.size(), 0);
  return prune_impl(spec, policy, w, &was_zero_);
}

PruneReport prune(const NetworkSpec& spec, const PruningPolicy& policy, WeightVector& w) {
  return prune_impl(spec, policy, w, nullptr);
}

std::set<PruneHook> hook_points(const PruningPolicy& policy) {
  std::set<PruneHook> hooks;
  if (policy.strategy == PruneStrategy::Off) return hooks;
  if (policy.prune_at_init) hooks.insert(PruneHook::AfterInit);
  hooks.insert(PruneHook::AfterTraining);
  if (policy.strategy == PruneStrategy::Batchwise) {
    hooks.insert(PruneHook::AfterBatch);
    hooks.insert(PruneHook::AfterEpoch);
  } else if (policy.strategy == PruneStrategy::Epochwise) {
    hooks.insert(PruneHook::AfterEpoch);
  }
  return hooks;
}

}  // namespace mopnet
