#include "mopnet/runner.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace mopnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open output file: " + path);
  out << text;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (j.contains(key)) return j.at(key).get<T>();
  return fallback;
}

DatasetConfig parse_dataset(const json& j) {
  DatasetConfig d;
  d.kind = get_or<std::string>(j, "kind", d.kind);
  if (d.kind == "idx") {
    d.images = j.at("images").get<std::string>();
    d.labels = j.at("labels").get<std::string>();
    d.test_images = j.at("test_images").get<std::string>();
    d.test_labels = j.at("test_labels").get<std::string>();
  } else if (d.kind == "blobs") {
    d.classes = get_or<std::size_t>(j, "classes", d.classes);
    d.per_class = get_or<std::size_t>(j, "per_class", d.per_class);
    d.test_per_class = get_or<std::size_t>(j, "test_per_class", d.test_per_class);
    d.dim = get_or<std::size_t>(j, "dim", d.dim);
    d.separation = get_or<double>(j, "separation", d.separation);
    d.data_seed = get_or<std::uint64_t>(j, "data_seed", d.data_seed);
  } else {
    throw ConfigError("dataset.kind must be \"idx\" or \"blobs\"");
  }
  d.train_subset = get_or<std::size_t>(j, "train_subset", 0);
  d.test_subset = get_or<std::size_t>(j, "test_subset", 0);
  return d;
}

json dump_dataset(const DatasetConfig& d) {
  json j;
  j["kind"] = d.kind;
  if (d.kind == "idx") {
    j["images"] = d.images;
    j["labels"] = d.labels;
    j["test_images"] = d.test_images;
    j["test_labels"] = d.test_labels;
  } else {
    j["classes"] = d.classes;
    j["per_class"] = d.per_class;
    j["test_per_class"] = d.test_per_class;
    j["dim"] = d.dim;
    j["separation"] = d.separation;
    j["data_seed"] = d.data_seed;
  }
  j["train_subset"] = d.train_subset;
  j["test_subset"] = d.test_subset;
  return j;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }

  std::vector<std::string> problems;
  ExperimentConfig cfg;
  try {
    cfg.dataset = parse_dataset(j.at("dataset"));
  } catch (const std::exception& e) {
    problems.emplace_back(std::string("dataset: ") + e.what());
  }

  try {
    const json& net = j.at("network");
    cfg.train.spec.layer_sizes = net.at("layer_sizes").get<std::vector<std::size_t>>();
    cfg.train.spec.include_bias = get_or<bool>(net, "include_bias", true);
    cfg.train.spec.validate();
  } catch (const std::exception& e) {
    problems.emplace_back(std::string("network: ") + e.what());
  }

  try {
    const json& opt = j.at("optimizer");
    const auto kind = opt.at("kind").get<std::string>();
    if (kind == "smgd" || kind == "mrmsprop" || kind == "madam") {
      cfg.train.multiobjective = true;
      cfg.train.mo_optimizer = mo_optimizer_from_string(kind);
    } else {
      cfg.train.optimizer = optimizer_from_string(kind);
    }
    cfg.train.momentum = get_or<double>(opt, "momentum", 0.0);
    cfg.train.beta = get_or<double>(opt, "beta", 0.9);
    cfg.train.beta1 = get_or<double>(opt, "beta1", 0.9);
    cfg.train.beta2 = get_or<double>(opt, "beta2", 0.999);
    if (opt.contains("epsilon")) cfg.train.epsilon = opt.at("epsilon").get<double>();
  } catch (const std::exception& e) {
    problems.emplace_back(std::string("optimizer: ") + e.what());
  }

  try {
    if (j.contains("schedule")) {
      const json& sch = j.at("schedule");
      const auto kind = get_or<std::string>(sch, "kind", "constant");
      if (kind == "constant") {
        cfg.train.schedule.kind = ScheduleKind::Constant;
        cfg.train.schedule.t0 = get_or<double>(sch, "t0", 0.001);
      } else if (kind == "time-decay") {
        cfg.train.schedule.kind = ScheduleKind::TimeDecay;
        cfg.train.schedule.t0 = get_or<double>(sch, "t0", 0.001);
        cfg.train.schedule.decay = get_or<double>(sch, "decay", 0.01);
      } else if (kind == "sigmoid-drop") {
        cfg.train.schedule.kind = ScheduleKind::SigmoidDrop;
        cfg.train.schedule.t_start = get_or<double>(sch, "t_start", 0.001);
        cfg.train.schedule.t_end = get_or<double>(sch, "t_end", 0.0001);
      } else {
        throw ConfigError("unknown schedule kind: " + kind);
      }
    }
  } catch (const std::exception& e) {
    problems.emplace_back(std::string("schedule: ") + e.what());
  }

  try {
    const json& reg = j.at("regularizer");
    cfg.train.regularizer.kind = regularizer_from_string(get_or<std::string>(reg, "kind", "l1"));
    cfg.train.lambda = get_or<double>(reg, "lambda", 0.0);
    cfg.train.form = scalarization_from_string(get_or<std::string>(reg, "form", "regularized"));
    if (reg.contains("applies_to")) {
      for (std::size_t l : reg.at("applies_to").get<std::vector<std::size_t>>()) {
        cfg.train.regularizer.applies_to.insert(l);
      }
    } else if (cfg.train.spec.layer_sizes.size() >= 2) {
      cfg.train.regularizer =
          RegularizerSpec::all_layers(cfg.train.spec, cfg.train.regularizer.kind);
    }
  } catch (const std::exception& e) {
    problems.emplace_back(std::string("regularizer: ") + e.what());
  }

  try {
    if (j.contains("pruning")) {
      const json& pr = j.at("pruning");
      cfg.train.pruning.strategy =
          prune_strategy_from_string(get_or<std::string>(pr, "strategy", "off"));
      cfg.train.pruning.tau = get_or<double>(pr, "tau", 0.001);
      cfg.train.pruning.prune_at_init = get_or<bool>(pr, "prune_at_init", true);
      if (pr.contains("applies_to")) {
        for (std::size_t l : pr.at("applies_to").get<std::vector<std::size_t>>()) {
          cfg.train.pruning.applies_to.insert(l);
        }
      } else {
        cfg.train.pruning.applies_to = cfg.train.regularizer.applies_to;
      }
    }
  } catch (const std::exception& e) {
    problems.emplace_back(std::string("pruning: ") + e.what());
  }

  cfg.train.epochs = get_or<int>(j, "epochs", 10);
  cfg.train.schedule.kappa_max = cfg.train.epochs;
  cfg.train.batch_size = get_or<std::size_t>(j, "batch_size", 32);
  cfg.train.seed = get_or<std::uint64_t>(j, "seed", 0);
  cfg.out_dir = get_or<std::string>(j, "out_dir", "out");
  cfg.jobs = get_or<int>(j, "jobs", 1);

  if (j.contains("lambda_list")) cfg.lambda_list = j.at("lambda_list").get<std::vector<double>>();

  if (j.contains("search")) {
    const json& s = j.at("search");
    cfg.search.kind = get_or<std::string>(s, "kind", "bisection");
    cfg.search.lo = get_or<double>(s, "lo", cfg.search.lo);
    cfg.search.hi = get_or<double>(s, "hi", cfg.search.hi);
    cfg.search.levels = get_or<int>(s, "levels", cfg.search.levels);
    cfg.search.probe_epochs = get_or<int>(s, "probe_epochs", cfg.search.probe_epochs);
    if (s.contains("objectives")) {
      cfg.search.objectives = front_objectives_from_string(s.at("objectives").get<std::string>());
    }
  }

  if (j.contains("compare")) {
    cfg.compare.baseline_lambda =
        get_or<double>(j.at("compare"), "baseline_lambda", cfg.compare.baseline_lambda);
  }

  if (!problems.empty()) {
    std::string msg = "invalid experiment config:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
  return cfg;
}

std::string ExperimentConfig::to_canonical_json() const {
  json j;
  j["dataset"] = dump_dataset(dataset);
  j["network"] = {{"layer_sizes", train.spec.layer_sizes},
                  {"include_bias", train.spec.include_bias}};
  json opt;
  opt["kind"] = train.multiobjective ? to_string(train.mo_optimizer) : to_string(train.optimizer);
  opt["momentum"] = train.momentum;
  opt["beta"] = train.beta;
  opt["beta1"] = train.beta1;
  opt["beta2"] = train.beta2;
  if (train.epsilon) opt["epsilon"] = *train.epsilon;
  j["optimizer"] = opt;
  json sch;
  switch (train.schedule.kind) {
    case ScheduleKind::Constant:
      sch = {{"kind", "constant"}, {"t0", train.schedule.t0}};
      break;
    case ScheduleKind::TimeDecay:
      sch = {{"kind", "time-decay"}, {"t0", train.schedule.t0}, {"decay", train.schedule.decay}};
      break;
    case ScheduleKind::SigmoidDrop:
      sch = {{"kind", "sigmoid-drop"},
             {"t_start", train.schedule.t_start},
             {"t_end", train.schedule.t_end}};
      break;
  }
  j["schedule"] = sch;
  j["regularizer"] = {
      {"kind", to_string(train.regularizer.kind)},
      {"lambda", train.lambda},
      {"form", to_string(train.form)},
      {"applies_to",
       std::vector<std::size_t>(train.regularizer.applies_to.begin(),
                                train.regularizer.applies_to.end())}};
  j["pruning"] = {{"strategy", to_string(train.pruning.strategy)},
                  {"tau", train.pruning.tau},
                  {"prune_at_init", train.pruning.prune_at_init},
                  {"applies_to",
                   std::vector<std::size_t>(train.pruning.applies_to.begin(),
                                            train.pruning.applies_to.end())}};
  j["epochs"] = train.epochs;
  j["batch_size"] = train.batch_size;
  j["seed"] = train.seed;
  j["lambda_list"] = lambda_list;
  j["search"] = {{"kind", search.kind},       {"lo", search.lo},
                 {"hi", search.hi},           {"levels", search.levels},
                 {"probe_epochs", search.probe_epochs},
                 {"objectives", to_string(search.objectives)}};
  j["compare"] = {{"baseline_lambda", compare.baseline_lambda}};
  j["out_dir"] = out_dir;
  j["jobs"] = jobs;
  return j.dump(2);
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a(to_canonical_json()); }

void RunManifest::write(const std::string& path) const {
  json j;
  j["config_hash"] = config_hash;
  j["config"] = json::parse(config_json);
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["artifacts"] = artifacts;
  j["final_point"] = json::parse("{}");
  j["final_point"]["e_train"] = final_point.e_train;
  j["final_point"]["e_test"] = final_point.e_test;
  j["final_point"]["omega_l1"] = final_point.omega_l1;
  j["final_point"]["omega_l0"] = final_point.omega_l0;
  j["final_point"]["acc_train"] = final_point.acc_train;
  j["final_point"]["acc_test"] = final_point.acc_test;
  j["final_point"]["lambda"] = final_point.lambda;
  if (knee) {
    j["knee"] = {{"lambda", knee->point.lambda},
                 {"e_test", knee->point.e_test},
                 {"omega_l1", knee->point.omega_l1},
                 {"proper", knee->proper}};
  }
  write_text(path, j.dump(2) + "\n");
}

LoadedData load_data(const DatasetConfig& cfg) {
  LoadedData data;
  if (cfg.kind == "idx") {
    data.train = load_idx(cfg.images, cfg.labels);
    data.test = load_idx(cfg.test_images, cfg.test_labels);
  } else {
    data.train = synthetic_gaussian_blobs(cfg.classes, cfg.per_class, cfg.dim, cfg.data_seed,
                                          cfg.separation);
    data.test = synthetic_gaussian_blobs(cfg.classes, cfg.test_per_class, cfg.dim,
                                         mix_seed(cfg.data_seed, 0x7e57ULL), cfg.separation);
  }
  if (cfg.train_subset > 0) data.train = stratified_subset(data.train, cfg.train_subset);
  if (cfg.test_subset > 0) data.test = stratified_subset(data.test, cfg.test_subset);
  return data;
}

namespace {

std::size_t dense_layer_count(const ExperimentConfig& cfg) {
  return cfg.train.regularizer.applies_to.size();
}

std::string metrics_csv(const ExperimentConfig& cfg, const TrainResult& res) {
  std::ostringstream out;
  out << EpochMetrics::csv_header(dense_layer_count(cfg)) << "\n";
  for (const EpochMetrics& m : res.per_epoch) out << m.csv_row() << "\n";
  return out.str();
}

std::string lambda_history_csv(const TrainResult& res, double reference_lambda) {
  std::ostringstream out;
  out << "iteration,lambda,reference_lambda\n";
  for (std::size_t i = 0; i < res.lambda_history.size(); ++i) {
    out << i << ',' << format_double(res.lambda_history[i]) << ','
        << format_double(reference_lambda) << "\n";
  }
  return out.str();
}

/// Runs fn(i) for i in [0,n) over `jobs` worker threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::size_t stride = static_cast<std::size_t>(jobs);
  for (std::size_t t = 0; t < stride; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += stride) fn(i);
    });
  }
  for (std::thread& w : workers) w.join();
}

}  // namespace

RunManifest cmd_train(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.config_hash = cfg.config_hash();
  manifest.config_json = cfg.to_canonical_json();
  manifest.started_at = now_iso8601();

  const LoadedData data = load_data(cfg.dataset);
  const TrainResult res = train(cfg.train, data.train, data.test);

  fs::create_directories(cfg.out_dir);
  const std::string metrics_path = cfg.out_dir + "/metrics.csv";
  write_text(metrics_path, metrics_csv(cfg, res));
  manifest.artifacts.push_back(metrics_path);

  const std::string summary_path = cfg.out_dir + "/summary.csv";
  write_text(summary_path, ObjectivePoint::csv_header(dense_layer_count(cfg)) + "\n" +
                               res.final_point.csv_row() + "\n");
  manifest.artifacts.push_back(summary_path);

  const std::string ckpt_path = cfg.out_dir + "/checkpoint.bin";
  save_checkpoint(ckpt_path, cfg.train.spec, res.weights);
  manifest.artifacts.push_back(ckpt_path);

  if (cfg.train.multiobjective) {
    const std::string hist_path = cfg.out_dir + "/lambda_history.csv";
    write_text(hist_path, lambda_history_csv(res, cfg.compare.baseline_lambda));
    manifest.artifacts.push_back(hist_path);
  }

  manifest.final_point = res.final_point;
  manifest.finished_at = now_iso8601();
  manifest.write(cfg.out_dir + "/manifest.json");
  return manifest;
}

SweepResult cmd_sweep(const ExperimentConfig& cfg) {
  if (cfg.lambda_list.empty()) throw ConfigError("sweep requires a nonempty lambda_list");
  SweepResult result;
  result.manifest.config_hash = cfg.config_hash();
  result.manifest.config_json = cfg.to_canonical_json();
  result.manifest.started_at = now_iso8601();
  result.archive = FrontArchive(cfg.search.objectives);

  const LoadedData data = load_data(cfg.dataset);

  const std::size_t n = cfg.lambda_list.size();
  std::vector<std::optional<ObjectivePoint>> points(n);
  std::vector<std::string> errors(n);
  parallel_for(n, cfg.jobs, [&](std::size_t i) {
    TrainConfig tc = cfg.train;
    tc.lambda = cfg.lambda_list[i];
    tc.seed = mix_seed(cfg.train.seed, 0x53eeeeULL, i);
    try {
      points[i] = train(tc, data.train, data.test).final_point;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (points[i]) {
      result.archive.insert(*points[i]);
    } else {
      result.errors.push_back("lambda=" + format_double(cfg.lambda_list[i]) + ": " + errors[i]);
      result.ok = false;
    }
  }

  std::optional<KneeResult> knee;
  if (result.archive.size() > 0) knee = find_knee(result.archive);

  fs::create_directories(cfg.out_dir);
  std::ostringstream front;
  front << ObjectivePoint::csv_header(dense_layer_count(cfg)) << ",is_nondominated,is_knee\n";
  auto in_archive = [&](const ObjectivePoint& p) {
    for (const ObjectivePoint& q : result.archive.points()) {
      if (q.lambda == p.lambda && q.seed == p.seed) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!points[i]) continue;
    const ObjectivePoint& p = *points[i];
    const bool nd = in_archive(p);
    const bool is_knee = knee && knee->point.lambda == p.lambda && knee->point.seed == p.seed;
    front << p.csv_row() << ',' << (nd ? 1 : 0) << ',' << (is_knee ? 1 : 0) << "\n";
  }
  const std::string front_path = cfg.out_dir + "/front.csv";
  write_text(front_path, front.str());
  result.manifest.artifacts.push_back(front_path);

  if (!result.errors.empty()) {
    std::ostringstream errs;
    for (const std::string& e : result.errors) errs << e << "\n";
    const std::string err_path = cfg.out_dir + "/sweep_errors.log";
    write_text(err_path, errs.str());
    result.manifest.artifacts.push_back(err_path);
  }

  result.manifest.knee = knee;
  if (knee) result.manifest.final_point = knee->point;
  result.manifest.finished_at = now_iso8601();
  result.manifest.write(cfg.out_dir + "/manifest.json");
  return result;
}

RunManifest cmd_knee(const ExperimentConfig& cfg) {
  if (!(cfg.search.lo >= 0.0 && cfg.search.lo < cfg.search.hi && cfg.search.hi < 1.0)) {
    throw ConfigError("knee search bounds must satisfy 0 <= lo < hi < 1");
  }
  RunManifest manifest;
  manifest.config_hash = cfg.config_hash();
  manifest.config_json = cfg.to_canonical_json();
  manifest.started_at = now_iso8601();

  const LoadedData data = load_data(cfg.dataset);

  TrainerFn trainer = [&](double lambda, std::uint64_t seed, int epochs) {
    TrainConfig tc = cfg.train;
    tc.lambda = lambda;
    tc.seed = seed;
    tc.epochs = epochs;
    tc.schedule.kappa_max = epochs;
    try {
      return train(tc, data.train, data.test).final_point;
    } catch (const std::exception& e) {
      throw NumericError("probe at lambda=" + format_double(lambda) + " failed: " + e.what());
    }
  };

  SearchResult sr;
  SearchBudget budget{cfg.search.levels, cfg.search.probe_epochs, cfg.train.seed};
  if (cfg.search.kind == "bisection") {
    sr = bisection_search(trainer, cfg.search.lo, cfg.search.hi, cfg.search.levels,
                          cfg.search.probe_epochs, cfg.train.seed, cfg.search.objectives);
  } else if (cfg.search.kind == "dichotomic") {
    sr = dichotomic_search(trainer, cfg.search.lo, cfg.search.hi, budget, cfg.search.objectives);
  } else if (cfg.search.kind == "stochastic-dichotomic") {
    sr = stochastic_dichotomic_search(trainer, cfg.search.lo, cfg.search.hi, budget,
                                      cfg.search.objectives);
  } else {
    throw ConfigError("unknown search kind: " + cfg.search.kind);
  }

  fs::create_directories(cfg.out_dir);
  std::ostringstream front;
  front << "level," << ObjectivePoint::csv_header(dense_layer_count(cfg))
        << ",is_nondominated,is_knee\n";
  auto in_archive = [&](const ObjectivePoint& p) {
    for (const ObjectivePoint& q : sr.archive.points()) {
      if (q.lambda == p.lambda && q.seed == p.seed) return true;
    }
    return false;
  };
  for (const ProbeRecord& pr : sr.probes) {
    const bool nd = in_archive(pr.point);
    const bool is_knee =
        sr.knee && sr.knee->point.lambda == pr.point.lambda && sr.knee->point.seed == pr.point.seed;
    front << pr.level << ',' << pr.point.csv_row() << ',' << (nd ? 1 : 0) << ','
          << (is_knee ? 1 : 0) << "\n";
  }
  const std::string front_path = cfg.out_dir + "/front.csv";
  write_text(front_path, front.str());
  manifest.artifacts.push_back(front_path);

  std::ostringstream probes;
  probes << "level,lambda,seed\n";
  for (const ProbeRecord& pr : sr.probes) {
    probes << pr.level << ',' << format_double(pr.lambda) << ',' << pr.seed << "\n";
  }
  const std::string probes_path = cfg.out_dir + "/probes.csv";
  write_text(probes_path, probes.str());
  manifest.artifacts.push_back(probes_path);

  manifest.knee = sr.knee;
  if (sr.knee) manifest.final_point = sr.knee->point;
  manifest.finished_at = now_iso8601();
  manifest.write(cfg.out_dir + "/manifest.json");
  return manifest;
}

CompareResult cmd_smgd_compare(const ExperimentConfig& cfg) {
  if (!cfg.train.multiobjective) {
    throw ConfigError("smgd-compare requires a multiobjective optimizer (smgd/mrmsprop/madam)");
  }

  CompareResult result;
  result.manifest.config_hash = cfg.config_hash();
  result.manifest.config_json = cfg.to_canonical_json();
  result.manifest.started_at = now_iso8601();

  const LoadedData data = load_data(cfg.dataset);

  TrainConfig base = cfg.train;
  base.multiobjective = false;
  switch (cfg.train.mo_optimizer) {
    case MoOptimizerKind::Smgd: base.optimizer = OptimizerKind::Sgd; break;
    case MoOptimizerKind::MRmsProp: base.optimizer = OptimizerKind::RmsProp; break;
    case MoOptimizerKind::MAdam: base.optimizer = OptimizerKind::Adam; break;
  }
  base.lambda = cfg.compare.baseline_lambda;
  base.form = ScalarizationForm::WeightedSum;

  result.baseline = train(base, data.train, data.test);
  result.multi = train(cfg.train, data.train, data.test);

  double sum = 0.0;
  for (double l : result.multi.lambda_history) sum += l;
  result.mean_lambda =
      result.multi.lambda_history.empty() ? 0.0 : sum / result.multi.lambda_history.size();

  fs::create_directories(cfg.out_dir);
  std::ostringstream cmp;
  cmp << "epoch,acc_train_baseline,acc_test_baseline,omega_l1_baseline,"
         "acc_train_multi,acc_test_multi,omega_l1_multi\n";
  for (std::size_t i = 0; i < result.baseline.per_epoch.size(); ++i) {
    const EpochMetrics& b = result.baseline.per_epoch[i];
    const EpochMetrics& m = result.multi.per_epoch[i];
    cmp << b.epoch << ',' << format_double(b.acc_train) << ',' << format_double(b.acc_test) << ','
        << format_double(b.omega_l1) << ',' << format_double(m.acc_train) << ','
        << format_double(m.acc_test) << ',' << format_double(m.omega_l1) << "\n";
  }
  const std::string cmp_path = cfg.out_dir + "/compare.csv";
  write_text(cmp_path, cmp.str());
  result.manifest.artifacts.push_back(cmp_path);

  const std::string hist_path = cfg.out_dir + "/lambda_history.csv";
  write_text(hist_path, lambda_history_csv(result.multi, cfg.compare.baseline_lambda));
  result.manifest.artifacts.push_back(hist_path);

  result.manifest.final_point = result.multi.final_point;
  result.manifest.finished_at = now_iso8601();
  result.manifest.write(cfg.out_dir + "/manifest.json");
  return result;
}

}  // namespace mopnet
