#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mopnet/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("-c,--config", args.config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("-o,--out", args.out_dir, "output directory (overrides config)");
  sub->add_option("-s,--seed", args.seed, "master seed (overrides config)");
  sub->add_option("-j,--jobs", args.jobs, "worker threads for sweeps (overrides config)");
}

mopnet::ExperimentConfig load_config(const CommonArgs& args) {
  mopnet::ExperimentConfig cfg = mopnet::ExperimentConfig::from_json_file(args.config_path);
  if (args.out_dir) cfg.out_dir = *args.out_dir;
  if (args.seed) cfg.train.seed = *args.seed;
  if (args.jobs) cfg.jobs = *args.jobs;
  return cfg;
}

void print_point(const mopnet::ObjectivePoint& p) {
  std::cout << "  e_train=" << p.e_train << " e_test=" << p.e_test << " omega_l1=" << p.omega_l1
            << " omega_l0=" << p.omega_l0_total() << " acc_train=" << p.acc_train
            << " acc_test=" << p.acc_test << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biobjective neural network training and front exploration"};
  app.require_subcommand(1);

  CommonArgs train_args, sweep_args, knee_args, cmp_args;
  CLI::App* sub_train = app.add_subcommand("train", "single training run");
  CLI::App* sub_sweep = app.add_subcommand("sweep", "one run per lambda in lambda_list");
  CLI::App* sub_knee = app.add_subcommand("knee", "knee search over the weighting parameter");
  CLI::App* sub_cmp =
      app.add_subcommand("smgd-compare", "multiobjective optimizer vs fixed-lambda baseline");
  add_common(sub_train, train_args);
  add_common(sub_sweep, sweep_args);
  add_common(sub_knee, knee_args);
  add_common(sub_cmp, cmp_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sub_train->parsed()) {
      const mopnet::ExperimentConfig cfg = load_config(train_args);
      const mopnet::RunManifest m = mopnet::cmd_train(cfg);
      std::cout << "train complete; artifacts in " << cfg.out_dir << "\n";
      print_point(m.final_point);
    } else if (sub_sweep->parsed()) {
      const mopnet::ExperimentConfig cfg = load_config(sweep_args);
      const mopnet::SweepResult r = mopnet::cmd_sweep(cfg);
      std::cout << "sweep complete; " << r.archive.size() << " nondominated point(s), "
                << r.errors.size() << " failure(s); artifacts in " << cfg.out_dir << "\n";
      if (r.manifest.knee) {
        std::cout << "knee at lambda=" << r.manifest.knee->point.lambda << "\n";
        print_point(r.manifest.knee->point);
      }
      if (!r.ok) {
        for (const std::string& e : r.errors) std::cerr << "error: " << e << "\n";
        return 2;
      }
    } else if (sub_knee->parsed()) {
      const mopnet::ExperimentConfig cfg = load_config(knee_args);
      const mopnet::RunManifest m = mopnet::cmd_knee(cfg);
      std::cout << "knee search complete; artifacts in " << cfg.out_dir << "\n";
      if (m.knee) {
        std::cout << "knee at lambda=" << m.knee->point.lambda
                  << (m.knee->proper ? "" : " (fallback selection)") << "\n";
        print_point(m.knee->point);
      } else {
        std::cout << "no knee found (degenerate front)\n";
      }
    } else if (sub_cmp->parsed()) {
      const mopnet::ExperimentConfig cfg = load_config(cmp_args);
      const mopnet::CompareResult r = mopnet::cmd_smgd_compare(cfg);
      std::cout << "comparison complete; artifacts in " << cfg.out_dir << "\n";
      std::cout << "baseline (lambda=" << cfg.compare.baseline_lambda << "):\n";
      print_point(r.baseline.final_point);
      std::cout << "multiobjective (mean lambda=" << r.mean_lambda
                << ", null steps=" << r.multi.null_steps << "):\n";
      print_point(r.multi.final_point);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
