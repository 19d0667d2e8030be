#ifndef MOPNET_NET_HPP
#define MOPNET_NET_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mopnet/common.hpp"

namespace mopnet {

/// Fully connected feed-forward architecture: ReLU hidden layers, softmax output.
struct NetworkSpec {
  std::vector<std::size_t> layer_sizes;  // input dim, hidden dims..., output dim
  bool include_bias = true;

  std::size_t num_layers() const { return layer_sizes.size() - 1; }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }

  /// Weights of layer l: layer_sizes[l+1] x layer_sizes[l], row-major
  /// (output-neuron-major), biases appended after the matrix block.
  std::size_t layer_weight_count(std::size_t l) const {
    return layer_sizes[l] * layer_sizes[l + 1];
  }
  std::size_t layer_param_count(std::size_t l) const {
    return layer_weight_count(l) + (include_bias ? layer_sizes[l + 1] : 0);
  }
  std::size_t layer_offset(std::size_t l) const;
  std::size_t param_count() const;

  void validate() const;
};

/// Flat parameter store for all dense layers; layout fixed by NetworkSpec.
using WeightVector = std::vector<double>;

/// A mini-batch: row-major inputs (size x input_dim) and one-hot labels
/// (size x output_dim).
struct Batch {
  std::size_t size = 0;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::vector<double> inputs;
  std::vector<double> labels;
};

/// Glorot-uniform weights, zero biases; deterministic for a fixed seed.
WeightVector init_weights(const NetworkSpec& spec, std::uint64_t seed);

/// Class probabilities, one row per sample. Softmax uses max-subtraction and a
/// 1e-12 probability floor with renormalization.
std::vector<double> forward(const NetworkSpec& spec, const WeightVector& w, const Batch& batch);

struct LossGrad {
  double loss = 0.0;          // mean multiclass cross entropy over the batch
  WeightVector grad;          // same layout as the weight vector
  std::vector<double> probs;  // forward output, size x output_dim
};

/// Cross entropy of the batch and its exact backprop gradient.
LossGrad loss_and_grad(const NetworkSpec& spec, const WeightVector& w, const Batch& batch);

/// Checkpoint: one JSON header line, then N little-endian float64 values.
void save_checkpoint(const std::string& path, const NetworkSpec& spec, const WeightVector& w);
std::pair<NetworkSpec, WeightVector> load_checkpoint(const std::string& path);

}  // namespace mopnet

#endif  // MOPNET_NET_HPP
