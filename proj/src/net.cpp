#include "mopnet/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace mopnet {

namespace {

constexpr double kProbFloor = 1e-12;

// Uniform double in [0,1) from raw engine output; avoids the
// implementation-defined behavior of std::uniform_real_distribution.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::size_t NetworkSpec::layer_offset(std::size_t l) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < l; ++i) off += layer_param_count(i);
  return off;
}

std::size_t NetworkSpec::param_count() const { return layer_offset(num_layers()); }

void NetworkSpec::validate() const {
  if (layer_sizes.size() < 2) throw ConfigError("network needs at least input and output layers");
  for (std::size_t s : layer_sizes) {
    if (s < 1) throw ConfigError("every layer size must be >= 1");
  }
}

WeightVector init_weights(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  WeightVector w(spec.param_count(), 0.0);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const std::size_t n_in = spec.layer_sizes[l];
    const std::size_t n_out = spec.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(n_in + n_out));
    double* block = w.data() + spec.layer_offset(l);
    for (std::size_t i = 0; i < n_in * n_out; ++i) {
      block[i] = (2.0 * next_uniform(rng) - 1.0) * limit;
    }
    // biases stay zero
  }
  return w;
}

namespace {

void check_shapes(const NetworkSpec& spec, const WeightVector& w, const Batch& batch) {
  spec.validate();
  if (w.size() != spec.param_count()) {
    throw DimensionError("weight vector length " + std::to_string(w.size()) +
                         " does not match parameter count " + std::to_string(spec.param_count()));
  }
  if (batch.size < 1) throw DimensionError("batch must contain at least one sample");
  if (batch.input_dim != spec.input_dim() || batch.output_dim != spec.output_dim()) {
    throw DimensionError("batch dimensions do not match network spec");
  }
  if (batch.inputs.size() != batch.size * batch.input_dim ||
      batch.labels.size() != batch.size * batch.output_dim) {
    throw DimensionError("batch buffer sizes inconsistent with declared shape");
  }
}

// Activations per layer for one forward pass; activations[0] is the input.
std::vector<std::vector<double>> run_forward(const NetworkSpec& spec, const WeightVector& w,
                                             const Batch& batch) {
  const std::size_t m = batch.size;
  std::vector<std::vector<double>> acts(spec.num_layers() + 1);
  acts[0] = batch.inputs;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const std::size_t n_in = spec.layer_sizes[l];
    const std::size_t n_out = spec.layer_sizes[l + 1];
    const double* mat = w.data() + spec.layer_offset(l);
    const double* bias = spec.include_bias ? mat + n_in * n_out : nullptr;
    const std::vector<double>& in = acts[l];
    std::vector<double>& out = acts[l + 1];
    out.assign(m * n_out, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double* x = in.data() + i * n_in;
      double* z = out.data() + i * n_out;
      for (std::size_t o = 0; o < n_out; ++o) {
        const double* row = mat + o * n_in;
        double acc = bias ? bias[o] : 0.0;
        for (std::size_t j = 0; j < n_in; ++j) acc += row[j] * x[j];
        z[o] = acc;
      }
    }
    if (l + 1 < spec.num_layers()) {
      for (double& z : out) z = z > 0.0 ? z : 0.0;  // ReLU
    } else {
      // softmax with max-subtraction, floored at kProbFloor and renormalized
      for (std::size_t i = 0; i < m; ++i) {
        double* z = out.data() + i * n_out;
        double zmax = *std::max_element(z, z + n_out);
        if (!std::isfinite(zmax)) throw NumericError("non-finite logits in forward pass");
        double sum = 0.0;
        for (std::size_t o = 0; o < n_out; ++o) {
          z[o] = std::exp(z[o] - zmax);
          sum += z[o];
        }
        double renorm = 0.0;
        for (std::size_t o = 0; o < n_out; ++o) {
          z[o] = std::max(z[o] / sum, kProbFloor);
          renorm += z[o];
        }
        for (std::size_t o = 0; o < n_out; ++o) z[o] /= renorm;
      }
    }
  }
  return acts;
}

}  // namespace

std::vector<double> forward(const NetworkSpec& spec, const WeightVector& w, const Batch& batch) {
  check_shapes(spec, w, batch);
  return run_forward(spec, w, batch).back();
}

LossGrad loss_and_grad(const NetworkSpec& spec, const WeightVector& w, const Batch& batch) {
  check_shapes(spec, w, batch);
  const std::size_t m = batch.size;
  auto acts = run_forward(spec, w, batch);

  LossGrad res;
  res.probs = acts.back();
  res.grad.assign(w.size(), 0.0);

  const std::size_t d_out = spec.output_dim();
  double loss = 0.0;
  for (std::size_t i = 0; i < m * d_out; ++i) {
    if (batch.labels[i] != 0.0) loss -= batch.labels[i] * std::log(res.probs[i]);
  }
  res.loss = loss / static_cast<double>(m);

  // delta at the softmax layer: (probs - labels) / m
  std::vector<double> delta(m * d_out);
  for (std::size_t i = 0; i < m * d_out; ++i) {
    delta[i] = (res.probs[i] - batch.labels[i]) / static_cast<double>(m);
  }

  for (std::size_t l = spec.num_layers(); l-- > 0;) {
    const std::size_t n_in = spec.layer_sizes[l];
    const std::size_t n_out = spec.layer_sizes[l + 1];
    const double* mat = w.data() + spec.layer_offset(l);
    double* gmat = res.grad.data() + spec.layer_offset(l);
    double* gbias = spec.include_bias ? gmat + n_in * n_out : nullptr;
    const std::vector<double>& in = acts[l];

    for (std::size_t i = 0; i < m; ++i) {
      const double* x = in.data() + i * n_in;
      const double* d = delta.data() + i * n_out;
      for (std::size_t o = 0; o < n_out; ++o) {
        double* grow = gmat + o * n_in;
        const double dv = d[o];
        for (std::size_t j = 0; j < n_in; ++j) grow[j] += dv * x[j];
        if (gbias) gbias[o] += dv;
      }
    }

    if (l > 0) {
      std::vector<double> prev(m * n_in, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        const double* d = delta.data() + i * n_out;
        double* pd = prev.data() + i * n_in;
        for (std::size_t o = 0; o < n_out; ++o) {
          const double* row = mat + o * n_in;
          const double dv = d[o];
          for (std::size_t j = 0; j < n_in; ++j) pd[j] += dv * row[j];
        }
        // ReLU mask of the previous layer's activations
        const double* a = acts[l].data() + i * n_in;
        for (std::size_t j = 0; j < n_in; ++j) {
          if (a[j] <= 0.0) pd[j] = 0.0;
        }
      }
      delta.swap(prev);
    }
  }
  return res;
}

void save_checkpoint(const std::string& path, const NetworkSpec& spec, const WeightVector& w) {
  if (w.size() != spec.param_count()) throw DimensionError("checkpoint weight length mismatch");
  nlohmann::json header;
  header["layer_sizes"] = spec.layer_sizes;
  header["include_bias"] = spec.include_bias;
  header["n"] = w.size();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open checkpoint file for writing: " + path);
  out << header.dump() << "\n";
  out.write(reinterpret_cast<const char*>(w.data()),
            static_cast<std::streamsize>(w.size() * sizeof(double)));
  if (!out) throw FormatError("failed writing checkpoint: " + path);
}

std::pair<NetworkSpec, WeightVector> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("checkpoint missing header line: " + path);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("bad checkpoint header: " + std::string(e.what()));
  }
  NetworkSpec spec;
  spec.layer_sizes = header.at("layer_sizes").get<std::vector<std::size_t>>();
  spec.include_bias = header.at("include_bias").get<bool>();
  const auto n = header.at("n").get<std::size_t>();
  spec.validate();
  if (n != spec.param_count()) throw FormatError("checkpoint header n inconsistent with layer_sizes");
  WeightVector w(n);
  in.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double)) {
    throw FormatError("checkpoint truncated: " + path);
  }
  require_finite(w, "checkpoint weights");
  return {spec, w};
}

}  // namespace mopnet
