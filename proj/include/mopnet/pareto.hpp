#ifndef MOPNET_PARETO_HPP
#define MOPNET_PARETO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mopnet/objectives.hpp"

namespace mopnet {

/// Which objective pair dominance and knee detection work on.
enum class FrontObjectives {
  LossVsL1,     // (E_CE(test), Omega_l1)
  ErrorVsL0,    // (1 - acc(test), total Omega_l0)
};

std::string to_string(FrontObjectives o);
FrontObjectives front_objectives_from_string(const std::string& s);

/// The 2-d image of a point under the configured objective pair.
std::pair<double, double> objective_pair(const ObjectivePoint& p, FrontObjectives mode);

/// Mutable nondominated archive over a fixed objective pair. Reads are sorted
/// ascending by the second objective.
class FrontArchive {
 public:
  explicit FrontArchive(FrontObjectives mode = FrontObjectives::LossVsL1) : mode_(mode) {}

  /// Inserts and re-filters; returns false when the point was dominated.
  bool insert(const ObjectivePoint& p);

  const std::vector<ObjectivePoint>& points() const { return points_; }
  FrontObjectives mode() const { return mode_; }
  std::size_t size() const { return points_.size(); }

 private:
  FrontObjectives mode_;
  std::vector<ObjectivePoint> points_;
};

/// Exactly the points not weakly dominated by any other; duplicates collapse.
FrontArchive filter_nondominated(const std::vector<ObjectivePoint>& points, FrontObjectives mode);

/// The weighting at which the weighted sums of two mutually nondominated
/// points coincide: -diff1 / (diff2 - diff1) with diff = q - p.
double lambda_equalizing(const ObjectivePoint& p, const ObjectivePoint& q, FrontObjectives mode);

/// Max perpendicular distance to the extreme-point chord after min-max
/// normalization; ties break toward the smaller second objective. Fewer than
/// three points fall back to the smallest normalized distance to the ideal.
struct KneeResult {
  ObjectivePoint point;
  bool proper = false;  // true when found by the perpendicular-distance rule
};
std::optional<KneeResult> find_knee(const FrontArchive& archive);

/// Trains one weighting parameter and reports its objective-space outcome.
using TrainerFn =
    std::function<ObjectivePoint(double lambda, std::uint64_t seed, int epochs)>;

struct SearchBudget {
  int levels = 3;            // dichotomic depth / bisection iterations
  int epochs_per_probe = 2;  // reduced-epoch probes
  std::uint64_t seed = 0;
};

struct ProbeRecord {
  int level = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  ObjectivePoint point;
};

struct SearchResult {
  FrontArchive archive;
  std::optional<KneeResult> knee;
  std::vector<double> lambda_list;
  std::vector<ProbeRecord> probes;
  double interval_lo = 0.0;  // bisection: final knee interval
  double interval_hi = 0.0;
};

/// Dichotomic refinement of the weighting parameter; near-duplicate proposals
/// are replaced by a uniform draw around the colliding entry.
SearchResult stochastic_dichotomic_search(const TrainerFn& trainer, double lambda1, double lambda2,
                                          const SearchBudget& budget,
                                          FrontObjectives mode = FrontObjectives::LossVsL1);

/// Deterministic variant: near-duplicate proposals are discarded.
SearchResult dichotomic_search(const TrainerFn& trainer, double lambda1, double lambda2,
                               const SearchBudget& budget,
                               FrontObjectives mode = FrontObjectives::LossVsL1);

/// Midpoint bisection on the weighting parameter: each iteration probes a
/// tight symmetric pair around the interval midpoint and keeps the half whose
/// probe lies farther from the extreme-point chord (larger trade-off change),
/// halving the knee interval exactly once per iteration.
SearchResult bisection_search(const TrainerFn& trainer, double lambda_lo, double lambda_hi,
                              int iterations, int epochs_per_probe, std::uint64_t seed,
                              FrontObjectives mode = FrontObjectives::LossVsL1);

}  // namespace mopnet

#endif  // MOPNET_PARETO_HPP
