#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>

#include "mopnet/data.hpp"
#include "mopnet/net.hpp"
#include "mopnet/objectives.hpp"

using namespace mopnet;

namespace {

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Batch random_batch(const NetworkSpec& spec, std::size_t m, std::mt19937_64& rng) {
  Batch b;
  b.size = m;
  b.input_dim = spec.input_dim();
  b.output_dim = spec.output_dim();
  b.inputs.resize(m * b.input_dim);
  for (double& x : b.inputs) x = next_uniform(rng);
  b.labels.assign(m * b.output_dim, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    b.labels[i * b.output_dim + rng() % b.output_dim] = 1.0;
  }
  return b;
}

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("seed mixing is deterministic and spreads nearby inputs") {
  CHECK(mix_seed(42) == mix_seed(42));
  CHECK(mix_seed(42) != mix_seed(43));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 2, 4));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix_seed(i));
  CHECK(seen.size() == 1000);
}

TEST_CASE("double formatting survives a round trip") {
  for (double x : {0.0, 1.0, -1.5, 1e-300, 3.141592653589793, 0.1, 1e17, -2.2250738585072014e-308}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("parameter layout: offsets and counts") {
  NetworkSpec spec{{3, 2, 2}, true};
  CHECK(spec.num_layers() == 2);
  CHECK(spec.layer_weight_count(0) == 6);
  CHECK(spec.layer_param_count(0) == 8);
  CHECK(spec.layer_offset(1) == 8);
  CHECK(spec.param_count() == 14);

  NetworkSpec no_bias{{3, 2, 2}, false};
  CHECK(no_bias.param_count() == 10);

  CHECK_THROWS_AS(NetworkSpec({5}, true).validate(), ConfigError);
  CHECK_THROWS_AS(NetworkSpec({5, 0, 2}, true).validate(), ConfigError);
}

TEST_CASE("weight init: deterministic, bounded, zero biases") {
  NetworkSpec spec{{4, 3, 2}, true};
  const WeightVector w1 = init_weights(spec, 7);
  const WeightVector w2 = init_weights(spec, 7);
  CHECK(w1 == w2);
  CHECK(init_weights(spec, 8) != w1);

  const double limit0 = std::sqrt(6.0 / (4 + 3));
  for (std::size_t i = 0; i < spec.layer_weight_count(0); ++i) {
    CHECK(std::fabs(w1[i]) <= limit0);
  }
  // biases of layer 0 sit right after its weight block
  for (std::size_t i = spec.layer_weight_count(0); i < spec.layer_param_count(0); ++i) {
    CHECK(w1[i] == 0.0);
  }
}

TEST_CASE("forward: rows are probability distributions") {
  NetworkSpec spec{{5, 4, 3}, true};
  std::mt19937_64 rng(1);
  const WeightVector w = init_weights(spec, 1);
  const Batch b = random_batch(spec, 6, rng);
  const std::vector<double> p = forward(spec, w, b);
  REQUIRE(p.size() == 6 * 3);
  for (std::size_t i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(p[i * 3 + c] > 0.0);
      sum += p[i * 3 + c];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("forward: hand-computed softmax on a single linear layer") {
  NetworkSpec spec{{1, 2}, false};
  WeightVector w = {2.0, -1.0};  // logits 2x, -x
  Batch b;
  b.size = 1;
  b.input_dim = 1;
  b.output_dim = 2;
  b.inputs = {1.0};
  b.labels = {1.0, 0.0};
  const std::vector<double> p = forward(spec, w, b);
  const double z0 = std::exp(2.0), z1 = std::exp(-1.0);
  CHECK(p[0] == doctest::Approx(z0 / (z0 + z1)).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(z1 / (z0 + z1)).epsilon(1e-14));

  LossGrad lg = loss_and_grad(spec, w, b);
  CHECK(lg.loss == doctest::Approx(-std::log(z0 / (z0 + z1))).epsilon(1e-14));
}

TEST_CASE("uniform logits give loss ln(C)") {
  NetworkSpec spec{{3, 4}, true};
  WeightVector w(spec.param_count(), 0.0);
  std::mt19937_64 rng(2);
  const Batch b = random_batch(spec, 5, rng);
  LossGrad lg = loss_and_grad(spec, w, b);
  CHECK(lg.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("backprop matches central finite differences") {
  std::mt19937_64 rng(99);
  const double h = 1e-5;
  for (int trial = 0; trial < 5; ++trial) {
    NetworkSpec spec{{3 + std::size_t(trial % 2), 4, 2 + std::size_t(trial % 3)},
                     trial % 2 == 0};
    WeightVector w = init_weights(spec, 100 + trial);
    for (double& x : w) x += 0.05 * (2.0 * next_uniform(rng) - 1.0);  // nonzero biases too
    const Batch b = random_batch(spec, 4, rng);
    const LossGrad lg = loss_and_grad(spec, w, b);
    double max_rel = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      WeightVector wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      const double fd =
          (loss_and_grad(spec, wp, b).loss - loss_and_grad(spec, wm, b).loss) / (2.0 * h);
      const double denom = std::max({std::fabs(fd), std::fabs(lg.grad[i]), 1e-8});
      max_rel = std::max(max_rel, std::fabs(fd - lg.grad[i]) / denom);
    }
    CHECK(max_rel < 1e-4);
  }
}

TEST_CASE("shape mismatches are rejected") {
  NetworkSpec spec{{3, 2}, true};
  std::mt19937_64 rng(3);
  Batch b = random_batch(spec, 2, rng);
  WeightVector w(spec.param_count() + 1, 0.0);
  CHECK_THROWS_AS(forward(spec, w, b), DimensionError);
  w.resize(spec.param_count());
  b.inputs.pop_back();
  CHECK_THROWS_AS(forward(spec, w, b), DimensionError);
}

TEST_CASE("checkpoint round trip is exact") {
  NetworkSpec spec{{4, 3, 2}, true};
  const WeightVector w = init_weights(spec, 11);
  const std::string path = temp_path("ckpt_test.bin");
  save_checkpoint(path, spec, w);
  const auto [spec2, w2] = load_checkpoint(path);
  CHECK(spec2.layer_sizes == spec.layer_sizes);
  CHECK(spec2.include_bias == spec.include_bias);
  CHECK(w2 == w);

  // truncated payload
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
  CHECK_THROWS_AS(load_checkpoint(path), FormatError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path), FormatError);
}

TEST_CASE("omega values on a crafted weight vector") {
  NetworkSpec spec{{2, 2}, true};  // 4 weights + 2 biases
  WeightVector w = {1.0, -2.0, 0.0, 0.5, /*biases*/ 9.0, -9.0};
  RegularizerSpec reg = RegularizerSpec::all_layers(spec, RegularizerKind::L1);
  CHECK(omega(spec, reg, w) == doctest::Approx(3.5).epsilon(1e-15));  // biases excluded
  reg.kind = RegularizerKind::L2;
  CHECK(omega(spec, reg, w) == doctest::Approx(0.5 * (1 + 4 + 0 + 0.25)).epsilon(1e-15));
  reg.kind = RegularizerKind::L0;
  CHECK(omega(spec, reg, w) == 3.0);
  CHECK(nonzero_counts(spec, reg, w) == std::vector<std::size_t>{3});
}

TEST_CASE("omega gradient: signs, zero-at-zero, biases untouched") {
  NetworkSpec spec{{2, 2}, true};
  WeightVector w = {1.5, -0.25, 0.0, 3.0, 7.0, 7.0};
  RegularizerSpec reg = RegularizerSpec::all_layers(spec, RegularizerKind::L1);
  WeightVector g = omega_gradient(spec, reg, w);
  CHECK(g == WeightVector{1.0, -1.0, 0.0, 1.0, 0.0, 0.0});
  reg.kind = RegularizerKind::L2;
  g = omega_gradient(spec, reg, w);
  CHECK(g == WeightVector{1.5, -0.25, 0.0, 3.0, 0.0, 0.0});
  reg.kind = RegularizerKind::L0;
  CHECK_THROWS_AS(omega_gradient(spec, reg, w), ConfigError);
}

TEST_CASE("regularizer layer selection is honored") {
  NetworkSpec spec{{2, 2, 2}, false};  // two 4-weight layers
  WeightVector w(8, 1.0);
  RegularizerSpec reg;
  reg.kind = RegularizerKind::L1;
  reg.applies_to = {1};
  CHECK(omega(spec, reg, w) == 4.0);
  const WeightVector g = omega_gradient(spec, reg, w);
  for (std::size_t i = 0; i < 4; ++i) CHECK(g[i] == 0.0);
  for (std::size_t i = 4; i < 8; ++i) CHECK(g[i] == 1.0);

  reg.applies_to = {2};
  CHECK_THROWS_AS(omega(spec, reg, w), ConfigError);
  reg.applies_to = {};
  CHECK_THROWS_AS(omega(spec, reg, w), ConfigError);
}

TEST_CASE("weighted sum and lambda conversions") {
  CHECK(weighted_sum(2.0, 10.0, 0.25) == doctest::Approx(0.75 * 2.0 + 0.25 * 10.0));
  CHECK_THROWS_AS(weighted_sum(1.0, 1.0, 1.5), ConfigError);
  for (double lr : {0.0, 1e-4, 0.3, 5.0}) {
    CHECK(lambda_ws_to_reg(lambda_reg_to_ws(lr)) == doctest::Approx(lr).epsilon(1e-12));
  }
  CHECK(lambda_reg_to_ws(1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lambda_ws_to_reg(1.0), ConfigError);
}

TEST_CASE("accuracy: ties break toward the lowest class index") {
  // row 0: tie between class 0 and 1 -> predicted 0 (correct)
  // row 1: clear class 2 vs label 1 (wrong)
  std::vector<double> probs = {0.4, 0.4, 0.2, 0.1, 0.2, 0.7};
  std::vector<double> labels = {1.0, 0.0, 0.0, 0.0, 1.0, 0.0};
  CHECK(accuracy(probs, labels, 2, 3) == doctest::Approx(0.5));
  CHECK_THROWS_AS(accuracy(probs, labels, 3, 3), DimensionError);
}

TEST_CASE("synthetic blobs: shape, range, determinism, separability") {
  const Dataset ds = synthetic_gaussian_blobs(3, 40, 5, 21, 6.0);
  ds.validate();
  CHECK(ds.count == 120);
  CHECK(ds.classes == 3);
  CHECK(ds.dim == 5);
  const Dataset again = synthetic_gaussian_blobs(3, 40, 5, 21, 6.0);
  CHECK(ds.inputs == again.inputs);
  CHECK(ds.raw_labels == again.raw_labels);
  CHECK(synthetic_gaussian_blobs(3, 40, 5, 22, 6.0).inputs != ds.inputs);
  CHECK_THROWS_AS(synthetic_gaussian_blobs(0, 1, 1, 1, 1.0), ConfigError);
}

TEST_CASE("stratified subset balances classes") {
  const Dataset ds = synthetic_gaussian_blobs(4, 50, 3, 5, 6.0);
  const Dataset sub = stratified_subset(ds, 40);
  CHECK(sub.count == 40);
  std::vector<std::size_t> counts(4, 0);
  for (std::uint8_t l : sub.raw_labels) ++counts[l];
  for (std::size_t c : counts) CHECK(c == 10);
  CHECK_THROWS_AS(stratified_subset(ds, 201), ConfigError);
  // deterministic
  CHECK(stratified_subset(ds, 40).inputs == sub.inputs);
}

TEST_CASE("batches: seeded permutation partition, remainder dropped") {
  const Dataset ds = synthetic_gaussian_blobs(2, 25, 2, 9, 6.0);  // 50 samples
  const auto bs = batches(ds, 8, 1234);
  CHECK(bs.size() == 6);  // 50/8, remainder 2 dropped
  std::multiset<double> seen;
  for (const Batch& b : bs) {
    CHECK(b.size == 8);
    for (std::size_t i = 0; i < b.size; ++i) seen.insert(b.inputs[i * b.input_dim]);
  }
  CHECK(seen.size() == 48);  // no sample repeats within the epoch

  const auto bs2 = batches(ds, 8, 1234);
  CHECK(bs2[0].inputs == bs[0].inputs);
  const auto bs3 = batches(ds, 8, 1235);
  CHECK(bs3[0].inputs != bs[0].inputs);
  CHECK_THROWS_AS(batches(ds, 0, 1), ConfigError);
  CHECK_THROWS_AS(batches(ds, 51, 1), ConfigError);
}

TEST_CASE("IDX save/load round trip") {
  Dataset ds = synthetic_gaussian_blobs(3, 10, 16, 77, 6.0);  // 4x4 images
  const std::string imgs = temp_path("idx_imgs_test");
  const std::string lbls = temp_path("idx_lbls_test");
  save_idx(ds, imgs, lbls);
  const Dataset back = load_idx(imgs, lbls);
  CHECK(back.count == ds.count);
  CHECK(back.dim == ds.dim);
  CHECK(back.classes == ds.classes);
  CHECK(back.raw_labels == ds.raw_labels);
  for (std::size_t i = 0; i < ds.inputs.size(); ++i) {
    CHECK(std::fabs(back.inputs[i] - ds.inputs[i]) <= 0.5 / 255.0 + 1e-12);  // byte quantization
  }
  // corrupt the magic
  {
    std::FILE* f = std::fopen(imgs.c_str(), "r+b");
    std::fputc(0x7f, f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_idx(imgs, lbls), FormatError);
  std::filesystem::remove(imgs);
  std::filesystem::remove(lbls);
  CHECK_THROWS_AS(load_idx(imgs, lbls), FormatError);
}

TEST_CASE("objective point CSV shape") {
  ObjectivePoint p;
  p.lambda = 0.25;
  p.seed = 3;
  p.epochs = 2;
  p.omega_l0 = {10, 20};
  const std::string header = ObjectivePoint::csv_header(2);
  CHECK(header == "lambda,seed,epochs,e_train,e_test,omega_l1,omega_l0_layer0,omega_l0_layer1,"
                  "acc_train,acc_test");
  const std::string row = p.csv_row();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}
