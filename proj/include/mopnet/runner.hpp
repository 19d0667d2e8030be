#ifndef MOPNET_RUNNER_HPP
#define MOPNET_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mopnet/data.hpp"
#include "mopnet/pareto.hpp"
#include "mopnet/train.hpp"

namespace mopnet {

/// Where the samples come from: an IDX file pair or a generated blob dataset.
struct DatasetConfig {
  std::string kind = "blobs";  // "idx" | "blobs"

  // idx
  std::string images, labels, test_images, test_labels;

  // blobs
  std::size_t classes = 10;
  std::size_t per_class = 100;
  std::size_t test_per_class = 20;
  std::size_t dim = 16;
  double separation = 6.0;
  std::uint64_t data_seed = 1;

  // optional deterministic stratified subsets, 0 = use everything
  std::size_t train_subset = 0;
  std::size_t test_subset = 0;
};

struct SearchConfig {
  std::string kind = "bisection";  // "bisection" | "dichotomic" | "stochastic-dichotomic"
  double lo = 1e-5;
  double hi = 1e-1;
  int levels = 3;       // dichotomic depth or bisection iterations
  int probe_epochs = 2;
  FrontObjectives objectives = FrontObjectives::LossVsL1;
};

struct SmgdCompareConfig {
  double baseline_lambda = 3e-4;  // the fixed weighting the baseline trains with
};

/// Full experiment description; serializes canonically so a run can embed and
/// hash its exact configuration.
struct ExperimentConfig {
  DatasetConfig dataset;
  TrainConfig train;
  std::vector<double> lambda_list;  // sweep
  SearchConfig search;
  SmgdCompareConfig compare;
  std::string out_dir = "out";
  int jobs = 1;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_canonical_json() const;
  std::uint64_t config_hash() const;
};

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string config_json;
  std::string started_at, finished_at;
  std::vector<std::string> artifacts;
  ObjectivePoint final_point;
  std::optional<KneeResult> knee;

  void write(const std::string& path) const;
};

struct LoadedData {
  Dataset train;
  Dataset test;
};

LoadedData load_data(const DatasetConfig& cfg);

/// train: one run; writes metrics.csv, summary.csv, checkpoint.bin, manifest.json.
RunManifest cmd_train(const ExperimentConfig& cfg);

/// sweep: one independent run per lambda with derived seeds; writes front.csv.
/// Individual failures are recorded and the sweep continues; `ok` reports
/// whether every run succeeded.
struct SweepResult {
  RunManifest manifest;
  FrontArchive archive;
  std::vector<std::string> errors;
  bool ok = true;
};
SweepResult cmd_sweep(const ExperimentConfig& cfg);

/// knee: scalarization-parameter search with reduced-epoch probes.
RunManifest cmd_knee(const ExperimentConfig& cfg);

/// smgd-compare: fixed-lambda baseline vs the multiobjective optimizer with
/// matched seeds; writes paired curves and the lambda history.
struct CompareResult {
  RunManifest manifest;
  TrainResult baseline;
  TrainResult multi;
  double mean_lambda = 0.0;
};
CompareResult cmd_smgd_compare(const ExperimentConfig& cfg);

}  // namespace mopnet

#endif  // MOPNET_RUNNER_HPP
