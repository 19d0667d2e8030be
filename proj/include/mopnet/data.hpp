#ifndef MOPNET_DATA_HPP
#define MOPNET_DATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mopnet/net.hpp"

namespace mopnet {

/// Immutable sample store: inputs in [0,1], one-hot labels.
struct Dataset {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<double> inputs;        // count x dim, row-major
  std::vector<double> labels;        // count x classes, one-hot rows
  std::vector<std::uint8_t> raw_labels;  // class index per sample
  std::string name;
  std::uint64_t checksum = 0;

  void validate() const;
};

/// Reads an IDX image/label file pair (MNIST distribution format).
/// Pixels are scaled by 1/255; labels become one-hot over max label + 1.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

/// Writes a dataset back to the IDX pair format (inputs rescaled to bytes).
/// Requires dim to be a square number of pixels or uses rows=1 x cols=dim.
void save_idx(const Dataset& ds, const std::string& images_path, const std::string& labels_path);

/// Isotropic Gaussian class clusters with centers spaced `separation` apart on
/// coordinate axes, min-max normalized per dimension into [0,1].
Dataset synthetic_gaussian_blobs(std::size_t classes, std::size_t per_class, std::size_t dim,
                                 std::uint64_t seed, double separation);

/// First n samples chosen deterministically, stratified by label round-robin.
Dataset stratified_subset(const Dataset& ds, std::size_t n);

/// Seeded without-replacement batch split; trailing remainder < p is dropped.
std::vector<Batch> batches(const Dataset& ds, std::size_t p, std::uint64_t epoch_seed);

/// Full dataset as a single batch in stored order (for metric evaluation).
Batch as_batch(const Dataset& ds);

}  // namespace mopnet

#endif  // MOPNET_DATA_HPP
