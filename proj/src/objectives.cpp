#include "mopnet/objectives.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace mopnet {

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::L1: return "l1";
    case RegularizerKind::L2: return "l2";
    case RegularizerKind::L0: return "l0";
  }
  return "?";
}

RegularizerKind regularizer_from_string(const std::string& s) {
  if (s == "l1") return RegularizerKind::L1;
  if (s == "l2") return RegularizerKind::L2;
  if (s == "l0") return RegularizerKind::L0;
  throw ConfigError("unknown regularizer kind: " + s);
}

RegularizerSpec RegularizerSpec::all_layers(const NetworkSpec& spec, RegularizerKind kind) {
  RegularizerSpec reg;
  reg.kind = kind;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) reg.applies_to.insert(l);
  return reg;
}

void RegularizerSpec::validate(const NetworkSpec& spec) const {
  if (applies_to.empty()) throw ConfigError("regularizer applies_to must not be empty");
  for (std::size_t l : applies_to) {
    if (l >= spec.num_layers()) {
      throw ConfigError("regularizer layer index out of range: " + std::to_string(l));
    }
  }
}

double omega(const NetworkSpec& spec, const RegularizerSpec& reg, const WeightVector& w) {
  reg.validate(spec);
  require_finite(w, "weights");
  double acc = 0.0;
  for (std::size_t l : reg.applies_to) {
    const double* block = w.data() + spec.layer_offset(l);
    const std::size_t n = spec.layer_weight_count(l);  // biases excluded
    switch (reg.kind) {
      case RegularizerKind::L1:
        for (std::size_t i = 0; i < n; ++i) acc += std::fabs(block[i]);
        break;
      case RegularizerKind::L2:
        for (std::size_t i = 0; i < n; ++i) acc += 0.5 * block[i] * block[i];
        break;
      case RegularizerKind::L0:
        for (std::size_t i = 0; i < n; ++i) acc += (block[i] != 0.0) ? 1.0 : 0.0;
        break;
    }
  }
  return acc;
}

WeightVector omega_gradient(const NetworkSpec& spec, const RegularizerSpec& reg,
                            const WeightVector& w) {
  reg.validate(spec);
  if (reg.kind == RegularizerKind::L0) {
    throw ConfigError("l0 has zero gradient almost everywhere and cannot drive descent");
  }
  require_finite(w, "weights");
  WeightVector g(w.size(), 0.0);
  for (std::size_t l : reg.applies_to) {
    const std::size_t off = spec.layer_offset(l);
    const std::size_t n = spec.layer_weight_count(l);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = w[off + i];
      g[off + i] = (reg.kind == RegularizerKind::L2) ? x : (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0));
    }
  }
  return g;
}

std::vector<std::size_t> nonzero_counts(const NetworkSpec& spec, const RegularizerSpec& reg,
                                        const WeightVector& w) {
  std::vector<std::size_t> counts;
  for (std::size_t l : reg.applies_to) {
    const double* block = w.data() + spec.layer_offset(l);
    const std::size_t n = spec.layer_weight_count(l);
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (block[i] != 0.0) ++c;
    }
    counts.push_back(c);
  }
  return counts;
}

double weighted_sum(double e, double om, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("weighted-sum lambda must lie in [0,1]");
  }
  return (1.0 - lambda) * e + lambda * om;
}

double lambda_reg_to_ws(double lambda_reg) {
  if (!(lambda_reg >= 0.0)) throw ConfigError("regularization lambda must be >= 0");
  return lambda_reg / (1.0 + lambda_reg);
}

double lambda_ws_to_reg(double lambda_ws) {
  if (!(lambda_ws >= 0.0 && lambda_ws < 1.0)) {
    throw ConfigError("weighted-sum lambda must lie in [0,1) for conversion");
  }
  return lambda_ws / (1.0 - lambda_ws);
}

double accuracy(const std::vector<double>& probs, const std::vector<double>& labels,
                std::size_t rows, std::size_t classes) {
  if (probs.size() != rows * classes || labels.size() != rows * classes) {
    throw DimensionError("accuracy: matrix sizes inconsistent with declared shape");
  }
  if (rows == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* p = probs.data() + i * classes;
    const double* y = labels.data() + i * classes;
    std::size_t pa = 0, ya = 0;
    for (std::size_t c = 1; c < classes; ++c) {
      if (p[c] > p[pa]) pa = c;  // strict: ties keep the lowest index
      if (y[c] > y[ya]) ya = c;
    }
    if (pa == ya) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows);
}

std::size_t ObjectivePoint::omega_l0_total() const {
  return std::accumulate(omega_l0.begin(), omega_l0.end(), std::size_t{0});
}

std::string ObjectivePoint::csv_header(std::size_t dense_layers) {
  std::ostringstream out;
  out << "lambda,seed,epochs,e_train,e_test,omega_l1";
  for (std::size_t l = 0; l < dense_layers; ++l) out << ",omega_l0_layer" << l;
  out << ",acc_train,acc_test";
  return out.str();
}

std::string ObjectivePoint::csv_row() const {
  std::ostringstream out;
  out << format_double(lambda) << ',' << seed << ',' << epochs << ',' << format_double(e_train)
      << ',' << format_double(e_test) << ',' << format_double(omega_l1);
  for (std::size_t c : omega_l0) out << ',' << c;
  out << ',' << format_double(acc_train) << ',' << format_double(acc_test);
  return out.str();
}

}  // namespace mopnet
