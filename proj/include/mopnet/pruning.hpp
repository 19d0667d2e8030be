#ifndef MOPNET_PRUNING_HPP
#define MOPNET_PRUNING_HPP

#include <set>
#include <string>
#include <vector>

#include "mopnet/net.hpp"

namespace mopnet {

enum class PruneStrategy { Batchwise, Epochwise, AfterTraining, Off };

std::string to_string(PruneStrategy s);
PruneStrategy prune_strategy_from_string(const std::string& s);

enum class PruneHook { AfterInit, AfterBatch, AfterEpoch, AfterTraining };

/// Soft, unstructured magnitude pruning of dense-layer weights. Biases are
/// never pruned; weights with |w| < tau (strict) are set to exact zero.
struct PruningPolicy {
  PruneStrategy strategy = PruneStrategy::Off;
  double tau = 0.001;
  std::set<std::size_t> applies_to;  // dense layer indices
  bool prune_at_init = true;

  void validate(const NetworkSpec& spec) const;
};

struct PruneReport {
  std::size_t pruned_count = 0;        // coordinates zeroed by this call
  std::size_t regrown_since_last = 0;  // zero at the previous event, now >= tau
  std::vector<std::size_t> nonzero_per_layer;
};

/// Remembers which coordinates were zero at the previous prune event so that
/// soft-pruning regrowth can be reported.
class PruneTracker {
 public:
  PruneTracker() = default;
  explicit PruneTracker(std::size_t n) : was_zero_(n, 0) {}

  PruneReport apply(const NetworkSpec& spec, const PruningPolicy& policy, WeightVector& w);

 private:
  std::vector<std::uint8_t> was_zero_;
};

/// One pruning pass over w (in place); stateless variant of PruneTracker::apply.
PruneReport prune(const NetworkSpec& spec, const PruningPolicy& policy, WeightVector& w);

/// Which points of the training loop this policy prunes at.
std::set<PruneHook> hook_points(const PruningPolicy& policy);

}  // namespace mopnet

#endif  // MOPNET_PRUNING_HPP
