#include "mopnet/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mopnet {

std::string to_string(FrontObjectives o) {
  return o == FrontObjectives::LossVsL1 ? "loss-vs-l1" : "error-vs-l0";
}

FrontObjectives front_objectives_from_string(const std::string& s) {
  if (s == "loss-vs-l1") return FrontObjectives::LossVsL1;
  if (s == "error-vs-l0") return FrontObjectives::ErrorVsL0;
  throw ConfigError("unknown front objective pair: " + s);
}

std::pair<double, double> objective_pair(const ObjectivePoint& p, FrontObjectives mode) {
  if (mode == FrontObjectives::LossVsL1) return {p.e_test, p.omega_l1};
  return {1.0 - p.acc_test, static_cast<double>(p.omega_l0_total())};
}

namespace {

// a weakly dominates b
bool dominates(const std::pair<double, double>& a, const std::pair<double, double>& b) {
  return a.first <= b.first && a.second <= b.second &&
         (a.first < b.first || a.second < b.second);
}

}  // namespace

bool FrontArchive::insert(const ObjectivePoint& p) {
  const auto v = objective_pair(p, mode_);
  if (!std::isfinite(v.first) || !std::isfinite(v.second)) {
    throw NumericError("non-finite objective values");
  }
  for (const ObjectivePoint& q : points_) {
    const auto u = objective_pair(q, mode_);
    if (dominates(u, v) || u == v) return false;  // dominated or duplicate
  }
  std::erase_if(points_, [&](const ObjectivePoint& q) {
    return dominates(v, objective_pair(q, mode_));
  });
  points_.push_back(p);
  std::sort(points_.begin(), points_.end(), [&](const ObjectivePoint& a, const ObjectivePoint& b) {
    return objective_pair(a, mode_).second < objective_pair(b, mode_).second;
  });
  return true;
}

FrontArchive filter_nondominated(const std::vector<ObjectivePoint>& points, FrontObjectives mode) {
  FrontArchive archive(mode);
  for (const ObjectivePoint& p : points) archive.insert(p);
  return archive;
}

double lambda_equalizing(const ObjectivePoint& p, const ObjectivePoint& q, FrontObjectives mode) {
  const auto a = objective_pair(p, mode);
  const auto b = objective_pair(q, mode);
  const double diff1 = b.first - a.first;
  const double diff2 = b.second - a.second;
  if (diff1 == 0.0 || diff2 == 0.0) {
    throw ConfigError("degenerate point pair: objective difference has a zero component");
  }
  if ((diff1 > 0.0) == (diff2 > 0.0)) {
    throw ConfigError("points are not mutually nondominated");
  }
  return -diff1 / (diff2 - diff1);
}

std::optional<KneeResult> find_knee(const FrontArchive& archive) {
  const auto& pts = archive.points();
  if (pts.empty()) throw ConfigError("cannot identify a knee in an empty archive");

  double e_lo = std::numeric_limits<double>::infinity(), e_hi = -e_lo;
  double o_lo = e_lo, o_hi = -e_lo;
  for (const ObjectivePoint& p : pts) {
    const auto v = objective_pair(p, archive.mode());
    e_lo = std::min(e_lo, v.first);
    e_hi = std::max(e_hi, v.first);
    o_lo = std::min(o_lo, v.second);
    o_hi = std::max(o_hi, v.second);
  }
  const double e_range = e_hi - e_lo, o_range = o_hi - o_lo;
  auto normalized = [&](const ObjectivePoint& p) -> std::pair<double, double> {
    const auto v = objective_pair(p, archive.mode());
    return {e_range > 0.0 ? (v.first - e_lo) / e_range : 0.0,
            o_range > 0.0 ? (v.second - o_lo) / o_range : 0.0};
  };

  if (pts.size() < 3) {
    // fallback: closest to the ideal point in normalized space
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto [x, y] = normalized(pts[i]);
      const double d = std::hypot(x, y);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return KneeResult{pts[best], false};
  }

  // max perpendicular distance to the chord joining the two extreme points;
  // points are sorted ascending by the second objective, so ties keep the
  // smallest second-objective point
  const auto [x0, y0] = normalized(pts.front());
  const auto [x1, y1] = normalized(pts.back());
  const double cx = x1 - x0, cy = y1 - y0;
  const double clen = std::hypot(cx, cy);
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [x, y] = normalized(pts[i]);
    const double d = clen > 0.0 ? std::fabs(cx * (y - y0) - cy * (x - x0)) / clen
                                : std::hypot(x - x0, y - y0);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return KneeResult{pts[best], true};
}

namespace {

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SearchResult dichotomic_impl(const TrainerFn& trainer, double lambda1, double lambda2,
                             const SearchBudget& budget, FrontObjectives mode, bool stochastic) {
  if (!(lambda1 >= 0.0 && lambda1 < lambda2 && lambda2 < 1.0)) {
    throw ConfigError("dichotomic search requires 0 <= lambda1 < lambda2 < 1");
  }
  if (budget.levels < 1 || budget.epochs_per_probe < 1) {
    throw ConfigError("search budget must be positive");
  }

  SearchResult result;
  result.archive = FrontArchive(mode);
  result.lambda_list = {lambda1, lambda2};
  std::mt19937_64 rng(mix_seed(budget.seed, 0xd1c407ULL));

  for (int level = 1; level <= budget.levels; ++level) {
    for (std::size_t i = 0; i < result.lambda_list.size(); ++i) {
      const double lambda = result.lambda_list[i];
      const std::uint64_t seed = mix_seed(budget.seed, static_cast<std::uint64_t>(level), i);
      ObjectivePoint pt = trainer(lambda, seed, budget.epochs_per_probe);
      pt.lambda = lambda;
      pt.seed = seed;
      pt.epochs = budget.epochs_per_probe;
      result.archive.insert(pt);
      result.probes.push_back({level, lambda, seed, pt});
    }
    if (level == budget.levels) break;

    const std::vector<ObjectivePoint> cand = result.archive.points();  // sorted by 2nd objective
    for (std::size_t i = 1; i < cand.size(); ++i) {
      double lambda_new;
      try {
        lambda_new = lambda_equalizing(cand[i - 1], cand[i], mode);
      } catch (const ConfigError&) {
        continue;  // degenerate adjacent pair
      }
      const auto collision =
          std::find_if(result.lambda_list.begin(), result.lambda_list.end(),
                       [&](double l) { return std::fabs(l - lambda_new) <= 0.001; });
      if (collision != result.lambda_list.end()) {
        if (!stochastic) continue;
        const double hat = *collision;
        const double lo = std::max(0.9 * hat, lambda1);
        const double hi = std::min(1.1 * hat, lambda2);
        lambda_new = hi > lo ? lo + (hi - lo) * next_uniform(rng) : lo;
      }
      result.lambda_list.push_back(lambda_new);
    }
  }

  result.knee = find_knee(result.archive);
  return result;
}

}  // namespace

SearchResult stochastic_dichotomic_search(const TrainerFn& trainer, double lambda1, double lambda2,
                                          const SearchBudget& budget, FrontObjectives mode) {
  return dichotomic_impl(trainer, lambda1, lambda2, budget, mode, true);
}

SearchResult dichotomic_search(const TrainerFn& trainer, double lambda1, double lambda2,
                               const SearchBudget& budget, FrontObjectives mode) {
  return dichotomic_impl(trainer, lambda1, lambda2, budget, mode, false);
}

SearchResult bisection_search(const TrainerFn& trainer, double lambda_lo, double lambda_hi,
                              int iterations, int epochs_per_probe, std::uint64_t seed,
                              FrontObjectives mode) {
  if (!(lambda_lo < lambda_hi)) throw ConfigError("bisection requires lambda_lo < lambda_hi");
  if (iterations < 1 || epochs_per_probe < 1) throw ConfigError("search budget must be positive");

  SearchResult result;
  result.archive = FrontArchive(mode);
  std::vector<std::pair<double, ObjectivePoint>> probed;  // every probe, by lambda

  auto probe = [&](double lambda, int level) -> ObjectivePoint {
    const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(level), probed.size());
    ObjectivePoint pt = trainer(lambda, s, epochs_per_probe);
    pt.lambda = lambda;
    pt.seed = s;
    pt.epochs = epochs_per_probe;
    result.archive.insert(pt);
    result.probes.push_back({level, lambda, s, pt});
    result.lambda_list.push_back(lambda);
    probed.emplace_back(lambda, pt);
    return pt;
  };

  const ObjectivePoint pa0 = probe(lambda_lo, 0);
  const ObjectivePoint pb0 = probe(lambda_hi, 0);

  // Perpendicular distance to the chord joining the two extreme probes, after
  // min-max normalization over everything probed so far. Over a convex front
  // this is unimodal in lambda with its maximum at the knee.
  auto distance = [&](const ObjectivePoint& p) {
    double e_lo = std::numeric_limits<double>::infinity(), e_hi = -e_lo, o_lo = e_lo, o_hi = -e_lo;
    for (const auto& [l, q] : probed) {
      const auto v = objective_pair(q, mode);
      e_lo = std::min(e_lo, v.first);
      e_hi = std::max(e_hi, v.first);
      o_lo = std::min(o_lo, v.second);
      o_hi = std::max(o_hi, v.second);
    }
    if (!(e_hi > e_lo) || !(o_hi > o_lo)) {
      return std::numeric_limits<double>::quiet_NaN();  // flat front
    }
    auto norm = [&](const ObjectivePoint& q) -> std::pair<double, double> {
      const auto v = objective_pair(q, mode);
      return {(v.first - e_lo) / (e_hi - e_lo), (v.second - o_lo) / (o_hi - o_lo)};
    };
    const auto [x0, y0] = norm(pa0);
    const auto [x1, y1] = norm(pb0);
    const auto [x, y] = norm(p);
    const double cx = x1 - x0, cy = y1 - y0;
    const double clen = std::hypot(cx, cy);
    if (clen == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::fabs(cx * (y - y0) - cy * (x - x0)) / clen;
  };

  // Dichotomous refinement: probe a symmetric pair around the midpoint and
  // keep the half whose probe sits farther from the extreme chord.
  double a = lambda_lo, b = lambda_hi;
  for (int it = 1; it <= iterations; ++it) {
    const double m = 0.5 * (a + b);
    const double delta = 1e-3 * (b - a);
    const ObjectivePoint pl = probe(m - delta, it);
    const ObjectivePoint pr = probe(m + delta, it);
    const double dl = distance(pl);
    const double dr = distance(pr);
    if (std::isnan(dl) || std::isnan(dr)) break;  // degenerate front; stop refining
    if (dl >= dr) {
      b = m;
    } else {
      a = m;
    }
  }
  result.interval_lo = a;
  result.interval_hi = b;

  // a front that collapsed to a single point has no trade-off to report
  if (result.archive.size() >= 2) {
    result.knee = find_knee(result.archive);
  }
  return result;
}

}  // namespace mopnet
