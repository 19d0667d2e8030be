#ifndef MOPNET_OBJECTIVES_HPP
#define MOPNET_OBJECTIVES_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mopnet/net.hpp"

namespace mopnet {

enum class RegularizerKind { L1, L2, L0 };

std::string to_string(RegularizerKind kind);
RegularizerKind regularizer_from_string(const std::string& s);

/// Which complexity measure to use and which dense layers it covers.
/// Biases are never regularized.
struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::L1;
  std::set<std::size_t> applies_to;  // layer indices; empty is invalid

  static RegularizerSpec all_layers(const NetworkSpec& spec, RegularizerKind kind);
  void validate(const NetworkSpec& spec) const;
};

/// Omega value over the regularized weights: L1 sum of |w|, L2 half sum of
/// squares, L0 exact count of nonzeros.
double omega(const NetworkSpec& spec, const RegularizerSpec& reg, const WeightVector& w);

/// Exact (sub)gradient of omega; zero on biases and on layers outside
/// applies_to. L1 uses sign with the 0-at-0 convention. L0 is rejected.
WeightVector omega_gradient(const NetworkSpec& spec, const RegularizerSpec& reg,
                            const WeightVector& w);

/// Per-layer nonzero counts over the regularized layers (exact-zero test).
std::vector<std::size_t> nonzero_counts(const NetworkSpec& spec, const RegularizerSpec& reg,
                                        const WeightVector& w);

/// Eq-style weighted sum (1-lambda)*e + lambda*om, lambda in [0,1].
double weighted_sum(double e, double om, double lambda);

/// Regularization coefficient (Eq. E + lambda*Omega) <-> weighted-sum weight.
double lambda_reg_to_ws(double lambda_reg);
double lambda_ws_to_reg(double lambda_ws);

/// Fraction of rows where argmax(probs) == argmax(labels); argmax ties break
/// toward the lowest class index.
double accuracy(const std::vector<double>& probs, const std::vector<double>& labels,
                std::size_t rows, std::size_t classes);

/// A point in objective space plus run provenance; one CSV row per point.
struct ObjectivePoint {
  double e_train = 0.0;
  double e_test = 0.0;
  double omega_l1 = 0.0;
  std::vector<std::size_t> omega_l0;  // per regularized layer
  double acc_train = 0.0;
  double acc_test = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  int epochs = 0;

  std::size_t omega_l0_total() const;
  static std::string csv_header(std::size_t dense_layers);
  std::string csv_row() const;
};

}  // namespace mopnet

#endif  // MOPNET_OBJECTIVES_HPP
