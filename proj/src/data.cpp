#include "mopnet/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

namespace mopnet {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream& in, const char* field) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw FormatError(std::string("IDX file truncated while reading ") + field);
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller from raw uniforms; stable across standard libraries.
double next_normal(std::mt19937_64& rng) {
  double u1 = next_uniform(rng);
  while (u1 <= 0.0) u1 = next_uniform(rng);
  const double u2 = next_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

void finalize_labels(Dataset& ds) {
  ds.labels.assign(ds.count * ds.classes, 0.0);
  for (std::size_t i = 0; i < ds.count; ++i) {
    ds.labels[i * ds.classes + ds.raw_labels[i]] = 1.0;
  }
}

}  // namespace

void Dataset::validate() const {
  if (inputs.size() != count * dim || labels.size() != count * classes ||
      raw_labels.size() != count) {
    throw DimensionError("dataset buffer sizes inconsistent");
  }
  for (double x : inputs) {
    if (!(x >= 0.0 && x <= 1.0)) throw NumericError("dataset input outside [0,1]");
  }
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw FormatError("cannot open IDX image file: " + images_path);
  const std::uint32_t img_magic = read_be32(img, "image magic");
  if (img_magic != kImageMagic) {
    throw FormatError("bad IDX image magic in " + images_path + ": expected 0x803, got 0x" +
                      [&] { char b[16]; std::snprintf(b, sizeof(b), "%x", img_magic); return std::string(b); }());
  }
  const std::uint32_t n_images = read_be32(img, "image count");
  const std::uint32_t rows = read_be32(img, "image rows");
  const std::uint32_t cols = read_be32(img, "image cols");

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw FormatError("cannot open IDX label file: " + labels_path);
  const std::uint32_t lab_magic = read_be32(lab, "label magic");
  if (lab_magic != kLabelMagic) {
    throw FormatError("bad IDX label magic in " + labels_path);
  }
  const std::uint32_t n_labels = read_be32(lab, "label count");
  if (n_images != n_labels) {
    throw FormatError("IDX image count " + std::to_string(n_images) +
                      " does not match label count " + std::to_string(n_labels));
  }

  Dataset ds;
  ds.count = n_images;
  ds.dim = static_cast<std::size_t>(rows) * cols;
  ds.name = images_path;

  std::vector<std::uint8_t> pixels(ds.count * ds.dim);
  img.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(img.gcount()) != pixels.size()) {
    throw FormatError("IDX image file truncated: " + images_path);
  }
  ds.raw_labels.resize(ds.count);
  lab.read(reinterpret_cast<char*>(ds.raw_labels.data()), static_cast<std::streamsize>(ds.count));
  if (static_cast<std::size_t>(lab.gcount()) != ds.count) {
    throw FormatError("IDX label file truncated: " + labels_path);
  }

  std::uint8_t max_label = 0;
  for (std::uint8_t l : ds.raw_labels) max_label = std::max(max_label, l);
  ds.classes = std::size_t(max_label) + 1;

  ds.inputs.resize(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) ds.inputs[i] = pixels[i] / 255.0;
  finalize_labels(ds);
  ds.checksum = fnv1a(pixels) ^ fnv1a(ds.raw_labels);
  return ds;
}

void save_idx(const Dataset& ds, const std::string& images_path, const std::string& labels_path) {
  std::size_t rows = 1, cols = ds.dim;
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(double(ds.dim))));
  if (side * side == ds.dim) {
    rows = cols = side;
  }
  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw FormatError("cannot open IDX image file for writing: " + images_path);
  write_be32(img, kImageMagic);
  write_be32(img, static_cast<std::uint32_t>(ds.count));
  write_be32(img, static_cast<std::uint32_t>(rows));
  write_be32(img, static_cast<std::uint32_t>(cols));
  for (double x : ds.inputs) {
    const auto byte = static_cast<unsigned char>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
    img.put(static_cast<char>(byte));
  }
  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw FormatError("cannot open IDX label file for writing: " + labels_path);
  write_be32(lab, kLabelMagic);
  write_be32(lab, static_cast<std::uint32_t>(ds.count));
  lab.write(reinterpret_cast<const char*>(ds.raw_labels.data()),
            static_cast<std::streamsize>(ds.count));
}

Dataset synthetic_gaussian_blobs(std::size_t classes, std::size_t per_class, std::size_t dim,
                                 std::uint64_t seed, double separation) {
  if (classes < 1 || per_class < 1 || dim < 1) {
    throw ConfigError("synthetic blob parameters must be positive");
  }
  Dataset ds;
  ds.count = classes * per_class;
  ds.dim = dim;
  ds.classes = classes;
  ds.name = "blobs";
  ds.inputs.resize(ds.count * dim);
  ds.raw_labels.resize(ds.count);

  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < classes; ++c) {
    // class center: separation along axis (c mod dim), scaled to keep
    // centers distinct when classes exceed the dimension
    std::vector<double> center(dim, 0.0);
    center[c % dim] = separation * (1.0 + static_cast<double>(c / dim));
    for (std::size_t s = 0; s < per_class; ++s) {
      const std::size_t i = c * per_class + s;
      ds.raw_labels[i] = static_cast<std::uint8_t>(c);
      double* x = ds.inputs.data() + i * dim;
      for (std::size_t j = 0; j < dim; ++j) x[j] = center[j] + next_normal(rng);
    }
  }

  // per-dimension min-max normalization into [0,1]
  for (std::size_t j = 0; j < dim; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < ds.count; ++i) {
      lo = std::min(lo, ds.inputs[i * dim + j]);
      hi = std::max(hi, ds.inputs[i * dim + j]);
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < ds.count; ++i) {
      double& x = ds.inputs[i * dim + j];
      x = range > 0.0 ? (x - lo) / range : 0.5;
    }
  }
  finalize_labels(ds);
  ds.checksum = mix_seed(seed, classes, per_class * 1000003 + dim);
  return ds;
}

Dataset stratified_subset(const Dataset& ds, std::size_t n) {
  if (n > ds.count) throw ConfigError("subset size exceeds dataset size");
  std::vector<std::vector<std::size_t>> by_class(ds.classes);
  for (std::size_t i = 0; i < ds.count; ++i) by_class[ds.raw_labels[i]].push_back(i);

  std::vector<std::size_t> picked;
  picked.reserve(n);
  std::vector<std::size_t> cursor(ds.classes, 0);
  std::size_t cls = 0;
  while (picked.size() < n) {
    // round-robin over classes, skipping exhausted ones
    bool any = false;
    for (std::size_t t = 0; t < ds.classes && picked.size() < n; ++t) {
      const std::size_t c = (cls + t) % ds.classes;
      if (cursor[c] < by_class[c].size()) {
        picked.push_back(by_class[c][cursor[c]++]);
        any = true;
      }
    }
    if (!any) break;
    cls = 0;
  }
  std::sort(picked.begin(), picked.end());

  Dataset out;
  out.count = picked.size();
  out.dim = ds.dim;
  out.classes = ds.classes;
  out.name = ds.name + "/subset" + std::to_string(n);
  out.inputs.reserve(out.count * out.dim);
  out.raw_labels.reserve(out.count);
  for (std::size_t i : picked) {
    out.inputs.insert(out.inputs.end(), ds.inputs.begin() + i * ds.dim,
                      ds.inputs.begin() + (i + 1) * ds.dim);
    out.raw_labels.push_back(ds.raw_labels[i]);
  }
  finalize_labels(out);
  out.checksum = mix_seed(ds.checksum, n);
  return out;
}

std::vector<Batch> batches(const Dataset& ds, std::size_t p, std::uint64_t epoch_seed) {
  if (p < 1 || p > ds.count) {
    throw ConfigError("batch size must satisfy 1 <= p <= dataset size");
  }
  std::vector<std::size_t> perm(ds.count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(epoch_seed);
  // Fisher-Yates with raw engine output for cross-platform determinism
  for (std::size_t i = ds.count; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(perm[i - 1], perm[j]);
  }

  const std::size_t n_batches = ds.count / p;  // remainder dropped
  std::vector<Batch> out(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    Batch& batch = out[b];
    batch.size = p;
    batch.input_dim = ds.dim;
    batch.output_dim = ds.classes;
    batch.inputs.reserve(p * ds.dim);
    batch.labels.reserve(p * ds.classes);
    for (std::size_t s = 0; s < p; ++s) {
      const std::size_t i = perm[b * p + s];
      batch.inputs.insert(batch.inputs.end(), ds.inputs.begin() + i * ds.dim,
                          ds.inputs.begin() + (i + 1) * ds.dim);
      batch.labels.insert(batch.labels.end(), ds.labels.begin() + i * ds.classes,
                          ds.labels.begin() + (i + 1) * ds.classes);
    }
  }
  return out;
}

Batch as_batch(const Dataset& ds) {
  Batch b;
  b.size = ds.count;
  b.input_dim = ds.dim;
  b.output_dim = ds.classes;
  b.inputs = ds.inputs;
  b.labels = ds.labels;
  return b;
}

}  // namespace mopnet
