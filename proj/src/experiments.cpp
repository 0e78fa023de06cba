#include "beastal/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <thread>

#include "beastal/baselines.hpp"
#include "beastal/svg.hpp"
#include "beastal/trace_io.hpp"

namespace beastal {

namespace {

// splitmix64 finalizer; derives stable per-run seeds from a base seed and a
// role tag so no two jobs in an experiment share RNG streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

RuleKind parse_rule_or_throw(const std::string& name) {
  const auto rule = parse_rule(name);
  if (!rule) throw std::invalid_argument("unknown rule '" + name + "'");
  return *rule;
}

std::vector<RuleKind> parse_rules(const std::vector<std::string>& names) {
  if (names.size() == 1 && names[0] == "all") return all_rules();
  if (names.empty()) throw std::invalid_argument("no rules given");
  std::vector<RuleKind> rules;
  rules.reserve(names.size());
  for (const auto& name : names) rules.push_back(parse_rule_or_throw(name));
  return rules;
}

ResistanceInit parse_init(const std::string& name) {
  if (name == "ones") return ResistanceInit::AllOnes;
  if (name == "random") return ResistanceInit::UniformRandom;
  throw std::invalid_argument("unknown init '" + name + "' (expected ones|random)");
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
void maybe_set(const nlohmann::json& j, const char* key, T& field) {
  if (const auto it = j.find(key); it != j.end()) field = it->template get<T>();
}

void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                const char* command) {
  if (!j.is_object()) throw std::invalid_argument("config for " + std::string(command) +
                                                  " must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw std::invalid_argument("unknown config key '" + item.key() + "' for " + command);
    }
  }
}

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& thread : pool) thread.join();
}

double std_dev(const std::vector<double>& values, double mean) {
  if (values.empty()) return 0.0;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size()));
}

}  // namespace

nlohmann::json to_json(const TrainRegressionOptions& o) {
  return {{"inputs", o.inputs},   {"outputs", o.outputs}, {"hidden", o.hidden},
          {"M", o.m_values},      {"rule", o.rule},       {"alpha", o.alpha},
          {"beta", o.beta},       {"gamma", o.gamma},     {"anneal", o.anneal},
          {"steps", o.steps},     {"seed", o.seed},       {"init", o.init},
          {"out_dir", o.out_dir}};
}

nlohmann::json to_json(const SweepGridOptions& o) {
  return {{"max_inputs", o.max_inputs}, {"max_outputs", o.max_outputs}, {"rules", o.rules},
          {"alpha", o.alpha},           {"beta", o.beta},               {"gamma", o.gamma},
          {"steps", o.steps},           {"seeds", o.seeds},             {"window", o.window},
          {"jobs", o.jobs},             {"out_dir", o.out_dir}};
}

nlohmann::json to_json(const TrainClassificationOptions& o) {
  return {{"rules", o.rules},
          {"alpha", o.alpha},
          {"beta", o.beta},
          {"gamma", o.gamma},
          {"anneal", o.anneal},
          {"steps", o.steps},
          {"seeds", o.seeds},
          {"train_size", o.train_size},
          {"refresh_period", o.refresh_period},
          {"stratified", o.stratified},
          {"init", o.init},
          {"iris_path", o.iris_path},
          {"jobs", o.jobs},
          {"out_dir", o.out_dir}};
}

nlohmann::json to_json(const BaselinesOptions& o) {
  return {{"inputs", o.inputs},
          {"outputs", o.outputs},
          {"alpha", o.alpha},
          {"gd_alpha", o.gd_alpha},
          {"beta", o.beta},
          {"gamma", o.gamma},
          {"steps", o.steps},
          {"seed", o.seed},
          {"noniter_tasks", o.noniter_tasks},
          {"noniter_inputs", o.noniter_inputs},
          {"noniter_outputs", o.noniter_outputs},
          {"noniter_linear_steps", o.noniter_linear_steps},
          {"noniter_cubic_steps", o.noniter_cubic_steps},
          {"noniter_cubic_alpha", o.noniter_cubic_alpha},
          {"eval_samples", o.eval_samples},
          {"out_dir", o.out_dir}};
}

nlohmann::json to_json(const HiddenCompareOptions& o) {
  return {{"rules", o.rules}, {"alpha", o.alpha}, {"beta", o.beta},
          {"gamma", o.gamma}, {"steps", o.steps}, {"seed", o.seed},
          {"out_dir", o.out_dir}};
}

void apply_json(const nlohmann::json& j, TrainRegressionOptions& o) {
  check_keys(j,
             {"inputs", "outputs", "hidden", "M", "rule", "alpha", "beta", "gamma", "anneal",
              "steps", "seed", "init", "out_dir"},
             "train-regression");
  maybe_set(j, "inputs", o.inputs);
  maybe_set(j, "outputs", o.outputs);
  maybe_set(j, "hidden", o.hidden);
  maybe_set(j, "M", o.m_values);
  maybe_set(j, "rule", o.rule);
  maybe_set(j, "alpha", o.alpha);
  maybe_set(j, "beta", o.beta);
  maybe_set(j, "gamma", o.gamma);
  maybe_set(j, "anneal", o.anneal);
  maybe_set(j, "steps", o.steps);
  maybe_set(j, "seed", o.seed);
  maybe_set(j, "init", o.init);
  maybe_set(j, "out_dir", o.out_dir);
}

void apply_json(const nlohmann::json& j, SweepGridOptions& o) {
  check_keys(j,
             {"max_inputs", "max_outputs", "rules", "alpha", "beta", "gamma", "steps", "seeds",
              "window", "jobs", "out_dir"},
             "sweep-grid");
  maybe_set(j, "max_inputs", o.max_inputs);
  maybe_set(j, "max_outputs", o.max_outputs);
  maybe_set(j, "rules", o.rules);
  maybe_set(j, "alpha", o.alpha);
  maybe_set(j, "beta", o.beta);
  maybe_set(j, "gamma", o.gamma);
  maybe_set(j, "steps", o.steps);
  maybe_set(j, "seeds", o.seeds);
  maybe_set(j, "window", o.window);
  maybe_set(j, "jobs", o.jobs);
  maybe_set(j, "out_dir", o.out_dir);
}

void apply_json(const nlohmann::json& j, TrainClassificationOptions& o) {
  check_keys(j,
             {"rules", "alpha", "beta", "gamma", "anneal", "steps", "seeds", "train_size",
              "refresh_period", "stratified", "init", "iris_path", "jobs", "out_dir"},
             "train-classification");
  maybe_set(j, "rules", o.rules);
  maybe_set(j, "alpha", o.alpha);
  maybe_set(j, "beta", o.beta);
  maybe_set(j, "gamma", o.gamma);
  maybe_set(j, "anneal", o.anneal);
  maybe_set(j, "steps", o.steps);
  maybe_set(j, "seeds", o.seeds);
  maybe_set(j, "train_size", o.train_size);
  maybe_set(j, "refresh_period", o.refresh_period);
  maybe_set(j, "stratified", o.stratified);
  maybe_set(j, "init", o.init);
  maybe_set(j, "iris_path", o.iris_path);
  maybe_set(j, "jobs", o.jobs);
  maybe_set(j, "out_dir", o.out_dir);
}

void apply_json(const nlohmann::json& j, BaselinesOptions& o) {
  check_keys(j,
             {"inputs", "outputs", "alpha", "gd_alpha", "beta", "gamma", "steps", "seed",
              "noniter_tasks", "noniter_inputs", "noniter_outputs", "noniter_linear_steps",
              "noniter_cubic_steps", "noniter_cubic_alpha", "eval_samples", "out_dir"},
             "baselines");
  maybe_set(j, "inputs", o.inputs);
  maybe_set(j, "outputs", o.outputs);
  maybe_set(j, "alpha", o.alpha);
  maybe_set(j, "gd_alpha", o.gd_alpha);
  maybe_set(j, "beta", o.beta);
  maybe_set(j, "gamma", o.gamma);
  maybe_set(j, "steps", o.steps);
  maybe_set(j, "seed", o.seed);
  maybe_set(j, "noniter_tasks", o.noniter_tasks);
  maybe_set(j, "noniter_inputs", o.noniter_inputs);
  maybe_set(j, "noniter_outputs", o.noniter_outputs);
  maybe_set(j, "noniter_linear_steps", o.noniter_linear_steps);
  maybe_set(j, "noniter_cubic_steps", o.noniter_cubic_steps);
  maybe_set(j, "noniter_cubic_alpha", o.noniter_cubic_alpha);
  maybe_set(j, "eval_samples", o.eval_samples);
  maybe_set(j, "out_dir", o.out_dir);
}

void apply_json(const nlohmann::json& j, HiddenCompareOptions& o) {
  check_keys(j, {"rules", "alpha", "beta", "gamma", "steps", "seed", "out_dir"},
             "hidden-compare");
  maybe_set(j, "rules", o.rules);
  maybe_set(j, "alpha", o.alpha);
  maybe_set(j, "beta", o.beta);
  maybe_set(j, "gamma", o.gamma);
  maybe_set(j, "steps", o.steps);
  maybe_set(j, "seed", o.seed);
  maybe_set(j, "out_dir", o.out_dir);
}

void run_train_regression(const TrainRegressionOptions& options) {
  const NetworkTopology topology =
      build_topology(options.inputs, options.outputs, options.hidden);

  RegressionTask task;
  if (options.m_values.empty()) {
    task = gen_regression_task(options.inputs, options.outputs, options.seed);
  } else {
    if (static_cast<int>(options.m_values.size()) != options.inputs * options.outputs) {
      throw std::invalid_argument("--M needs inputs*outputs row-major values");
    }
    task.M.resize(options.outputs, options.inputs);
    for (int r = 0; r < options.outputs; ++r) {
      for (int c = 0; c < options.inputs; ++c) {
        task.M(r, c) = options.m_values[static_cast<std::size_t>(r * options.inputs + c)];
      }
    }
  }

  TrainerConfig config;
  config.alpha0 = options.alpha;
  config.beta = options.beta;
  config.gamma = options.gamma;
  config.steps = options.steps;
  config.rule = parse_rule_or_throw(options.rule);
  config.anneal = options.anneal;
  config.seed = options.seed;
  config.init = parse_init(options.init);

  const TrainingTrace trace = train(task, topology, config);

  ensure_dir(options.out_dir);
  nlohmann::json meta = to_json(options);
  meta["command"] = "train-regression";
  meta["version"] = kVersion;
  meta["task_matrix"] = matrix_to_json(task.M);

  write_trace_csv(join(options.out_dir, "trace.csv"), trace, topology, meta);
  write_json(join(options.out_dir, "topology.json"), topology_to_json(topology));

  nlohmann::json summary = meta;
  summary["result"] = trace_summary(trace);
  write_json(join(options.out_dir, "summary.json"), summary);

  SvgSeries series{"normalized loss", {}, {}};
  series.x.reserve(trace.records.size());
  series.y.reserve(trace.records.size());
  for (const auto& record : trace.records) {
    series.x.push_back(static_cast<double>(record.t));
    series.y.push_back(record.loss_norm);
  }
  SvgOptions svg;
  svg.title = "Regression training, rule " + std::string(rule_name(config.rule));
  svg.y_label = "normalized MSE";
  svg.log_y = true;
  emit_svg_curve(join(options.out_dir, "loss.svg"), {series}, svg);

  std::cout << "train-regression: final loss " << format_double(trace.records.back().loss_norm)
            << ", trailing mean " << format_double(trailing_mean_loss(trace, 100))
            << ", outputs in " << options.out_dir << "\n";
}

void run_sweep_grid(const SweepGridOptions& options) {
  if (options.max_inputs < 1 || options.max_outputs < 1) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (options.seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
  if (options.window < 1) throw std::invalid_argument("window must be positive");
  const std::vector<RuleKind> rules = parse_rules(options.rules);

  struct RunSpec {
    int n_in, n_out;
    RuleKind rule;
    std::uint64_t seed;
  };
  struct RunResult {
    double final_loss = 0.0;
    bool ok = false;
    std::string error;
  };

  std::vector<RunSpec> specs;
  for (int i = 1; i <= options.max_inputs; ++i) {
    for (int o = 1; o <= options.max_outputs; ++o) {
      for (RuleKind rule : rules) {
        for (std::uint64_t base : options.seeds) {
          const std::uint64_t cell_tag = static_cast<std::uint64_t>(i) * 256 + o;
          specs.push_back({i, o, rule, mix_seed(base, cell_tag)});
        }
      }
    }
  }

  std::vector<RunResult> results(specs.size());
  parallel_for(specs.size(), options.jobs, [&](std::size_t idx) {
    const RunSpec& spec = specs[idx];
    try {
      const NetworkTopology topology = build_topology(spec.n_in, spec.n_out);
      const RegressionTask task = gen_regression_task(spec.n_in, spec.n_out, spec.seed);
      TrainerConfig config;
      config.alpha0 = options.alpha;
      config.beta = options.beta;
      config.gamma = options.gamma;
      config.steps = options.steps;
      config.rule = spec.rule;
      config.anneal = spec.rule == RuleKind::CubicDeltaP;
      config.seed = spec.seed;
      const TrainingTrace trace = train(task, topology, config);
      results[idx] = {trailing_mean_loss(trace, options.window), true, {}};
    } catch (const std::exception& e) {
      results[idx] = {0.0, false, e.what()};
    }
  });

  ensure_dir(options.out_dir);
  nlohmann::json meta = to_json(options);
  meta["command"] = "sweep-grid";
  meta["version"] = kVersion;

  std::vector<std::vector<std::string>> rows;
  auto cells = nlohmann::json::array();
  std::size_t idx = 0;
  int failed_cells = 0;
  for (int i = 1; i <= options.max_inputs; ++i) {
    for (int o = 1; o <= options.max_outputs; ++o) {
      for (RuleKind rule : rules) {
        std::vector<double> finals;
        std::string first_error;
        nlohmann::json seed_results = nlohmann::json::array();
        for (std::uint64_t base : options.seeds) {
          const RunResult& r = results[idx++];
          if (r.ok) {
            finals.push_back(r.final_loss);
            seed_results.push_back({{"seed", base}, {"final_loss", r.final_loss}});
          } else {
            if (first_error.empty()) first_error = r.error;
            seed_results.push_back({{"seed", base}, {"error", r.error}});
          }
        }
        const bool ok = finals.size() == options.seeds.size();
        double mean = std::numeric_limits<double>::quiet_NaN();
        double dev = std::numeric_limits<double>::quiet_NaN();
        if (!finals.empty()) {
          mean = std::accumulate(finals.begin(), finals.end(), 0.0) /
                 static_cast<double>(finals.size());
          dev = std_dev(finals, mean);
        }
        if (!ok) ++failed_cells;
        rows.push_back({std::to_string(i), std::to_string(o), std::string(rule_name(rule)),
                        format_double(mean), format_double(dev), ok ? "ok" : "failed"});
        cells.push_back({{"n_inputs", i},
                         {"n_outputs", o},
                         {"rule", rule_name(rule)},
                         {"mean_loss", mean},
                         {"std_loss", dev},
                         {"status", ok ? "ok" : "failed"},
                         {"error", first_error},
                         {"runs", seed_results}});
      }
    }
  }

  write_table_csv(join(options.out_dir, "sweep.csv"), meta,
                  {"n_inputs", "n_outputs", "rule", "mean_loss", "std_loss", "status"}, rows);
  nlohmann::json summary = meta;
  summary["cells"] = cells;
  write_json(join(options.out_dir, "summary.json"), summary);

  std::cout << "sweep-grid: " << rows.size() << " cells (" << failed_cells << " failed), "
            << specs.size() << " runs, outputs in " << options.out_dir << "\n";
}

void run_train_classification(const TrainClassificationOptions& options) {
  const std::string iris_path = options.iris_path.empty() ? "data/iris.csv" : options.iris_path;
  const IrisDataset dataset = load_iris(iris_path);
  const std::vector<RuleKind> rules = parse_rules(options.rules);
  if (options.seeds.empty()) throw std::invalid_argument("classification needs seeds");
  const NetworkTopology topology = build_topology(4, 3);
  const ResistanceInit init = parse_init(options.init);

  struct RunSlot {
    std::vector<double> accuracy;  // per recorded step
    std::vector<long> t;
    double final_accuracy = 0.0;
  };
  const std::size_t n_rules = rules.size();
  const std::size_t n_seeds = options.seeds.size();
  std::vector<RunSlot> slots(n_rules * n_seeds);

  parallel_for(slots.size(), options.jobs, [&](std::size_t idx) {
    const RuleKind rule = rules[idx / n_seeds];
    const std::uint64_t seed = options.seeds[idx % n_seeds];
    const DatasetSplit split =
        split_dataset(dataset, options.train_size, seed, options.stratified);
    TrainerConfig config;
    config.alpha0 = options.alpha;
    config.beta = options.beta;
    config.gamma = options.gamma;
    config.steps = options.steps;
    config.rule = rule;
    config.anneal = options.anneal;
    config.seed = seed;
    config.target_refresh_period = options.refresh_period;
    config.init = init;
    const ClassificationOutcome outcome = train(dataset, split, topology, config);
    RunSlot& slot = slots[idx];
    slot.accuracy.reserve(outcome.trace.records.size());
    slot.t.reserve(outcome.trace.records.size());
    for (const auto& record : outcome.trace.records) {
      slot.t.push_back(record.t);
      slot.accuracy.push_back(record.accuracy);
    }
    slot.final_accuracy = slot.accuracy.empty() ? 0.0 : slot.accuracy.back();
  });

  ensure_dir(options.out_dir);
  nlohmann::json meta = to_json(options);
  meta["command"] = "train-classification";
  meta["version"] = kVersion;
  meta["iris_path_resolved"] = iris_path;

  std::vector<SvgSeries> curves;
  std::vector<std::vector<std::string>> result_rows;
  auto rule_summaries = nlohmann::json::array();
  for (std::size_t r = 0; r < n_rules; ++r) {
    const std::string name(rule_name(rules[r]));
    const RunSlot& first = slots[r * n_seeds];

    std::vector<double> mean_accuracy(first.t.size(), 0.0);
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const RunSlot& slot = slots[r * n_seeds + s];
      for (std::size_t k = 0; k < mean_accuracy.size(); ++k) {
        mean_accuracy[k] += slot.accuracy[k] / static_cast<double>(n_seeds);
      }
    }

    std::vector<std::vector<std::string>> acc_rows;
    acc_rows.reserve(first.t.size());
    SvgSeries series{name, {}, {}};
    for (std::size_t k = 0; k < first.t.size(); ++k) {
      acc_rows.push_back({std::to_string(first.t[k]), format_double(mean_accuracy[k])});
      series.x.push_back(static_cast<double>(first.t[k]));
      series.y.push_back(mean_accuracy[k]);
    }
    nlohmann::json rule_meta = meta;
    rule_meta["rule"] = name;
    write_table_csv(join(options.out_dir, "accuracy_" + name + ".csv"), rule_meta,
                    {"t", "accuracy"}, acc_rows);
    curves.push_back(std::move(series));

    std::vector<double> finals;
    finals.reserve(n_seeds);
    for (std::size_t s = 0; s < n_seeds; ++s) finals.push_back(slots[r * n_seeds + s].final_accuracy);
    const double mean =
        std::accumulate(finals.begin(), finals.end(), 0.0) / static_cast<double>(n_seeds);
    const double dev = std_dev(finals, mean);
    result_rows.push_back({name, format_double(mean), format_double(dev)});
    rule_summaries.push_back({{"rule", name},
                              {"final_accuracy_mean", mean},
                              {"final_accuracy_std", dev},
                              {"per_seed_final", finals}});
    std::cout << "train-classification: rule " << name << " final accuracy " << mean << " +- "
              << dev << "\n";
  }

  write_table_csv(join(options.out_dir, "results.csv"), meta,
                  {"rule", "final_accuracy_mean", "final_accuracy_std"}, result_rows);
  nlohmann::json summary = meta;
  summary["rules"] = rule_summaries;
  write_json(join(options.out_dir, "summary.json"), summary);

  SvgOptions svg;
  svg.title = "Iris test accuracy";
  svg.y_label = "accuracy";
  svg.epoch_marker_period = options.refresh_period;
  emit_svg_curve(join(options.out_dir, "accuracy.svg"), curves, svg);
  std::cout << "train-classification: outputs in " << options.out_dir << "\n";
}

void run_baselines(const BaselinesOptions& options) {
  ensure_dir(options.out_dir);
  nlohmann::json meta = to_json(options);
  meta["command"] = "baselines";
  meta["version"] = kVersion;

  // Paired GD-vs-scheme comparison plus the cosine diagnostic on one task.
  const NetworkTopology topology = build_topology(options.inputs, options.outputs);
  const RegressionTask task =
      gen_regression_task(options.inputs, options.outputs, mix_seed(options.seed, 1));
  const std::uint64_t run_seed = mix_seed(options.seed, 2);

  TrainerConfig config;
  config.alpha0 = options.alpha;
  config.beta = options.beta;
  config.gamma = options.gamma;
  config.steps = options.steps;
  config.rule = RuleKind::LinearDeltaP;
  config.seed = run_seed;
  config.max_trace_records = std::max(config.max_trace_records, options.steps);
  const ResistanceState r_init = initial_resistances(topology, config);
  const TrainingTrace trace = train(task, topology, config);

  GdConfig gd_config;
  gd_config.alpha = options.gd_alpha;
  gd_config.steps = options.steps;
  gd_config.seed = run_seed;
  const GdTrace gd = gd_train(task, topology, gd_config);

  const Eigen::VectorXd r_beastal = trace.records.back().resistances;
  const Eigen::VectorXd r_gd = gd.records.back().conductances.cwiseInverse();
  std::vector<std::vector<std::string>> compare_rows;
  double max_rel_dev = 0.0;
  for (int e = 0; e < topology.edge_count(); ++e) {
    compare_rows.push_back(
        {std::to_string(e), format_double(r_beastal(e)), format_double(r_gd(e))});
    max_rel_dev = std::max(
        max_rel_dev, std::abs(r_beastal(e) - r_gd(e)) / std::max(r_beastal(e), r_gd(e)));
  }
  write_table_csv(join(options.out_dir, "gd_compare.csv"), meta,
                  {"edge", "R_beastal", "R_gd"}, compare_rows);

  const SimilarityTrace cosine = cosine_trace(trace, r_init, topology);
  std::vector<std::vector<std::string>> cosine_rows;
  cosine_rows.reserve(cosine.c.size());
  long positive = 0;
  double last_quarter_sum = 0.0;
  long last_quarter_count = 0;
  const long quarter_start = options.steps - options.steps / 4;
  for (std::size_t i = 0; i < cosine.c.size(); ++i) {
    cosine_rows.push_back({std::to_string(cosine.t[i]), format_double(cosine.c[i])});
    if (cosine.c[i] > 0.0) ++positive;
    if (cosine.t[i] >= quarter_start) {
      last_quarter_sum += cosine.c[i];
      ++last_quarter_count;
    }
  }
  nlohmann::json cosine_meta = meta;
  cosine_meta["undefined_steps"] = cosine.undefined_steps;
  write_table_csv(join(options.out_dir, "cosine.csv"), cosine_meta, {"t", "C"}, cosine_rows);

  const double positive_fraction =
      static_cast<double>(positive) / static_cast<double>(options.steps);
  const double last_quarter_mean =
      last_quarter_count > 0 ? last_quarter_sum / static_cast<double>(last_quarter_count) : 0.0;

  // One-shot imprinting of the analytic optimum vs trained networks on a
  // batch of random tasks. All three schemes are scored the same way: mean
  // normalized loss of the final resistance state over fresh random inputs.
  std::vector<std::vector<std::string>> noniter_rows;
  auto noniter_json = nlohmann::json::array();
  for (int i = 0; i < options.noniter_tasks; ++i) {
    const NetworkTopology topo =
        build_topology(options.noniter_inputs, options.noniter_outputs);
    const RegressionTask t =
        gen_regression_task(options.noniter_inputs, options.noniter_outputs,
                            mix_seed(options.seed, 100 + static_cast<std::uint64_t>(i)));
    const ResistanceState r_star = analytic_optimal_resistances(t, topo);
    const std::uint64_t eval_seed = mix_seed(options.seed, 200 + static_cast<std::uint64_t>(i));
    const NoniterResult non =
        noniterative_scheme(t, topo, r_star, options.gamma, options.eval_samples, eval_seed);

    const auto trained_loss = [&](const TrainingTrace& tr) {
      const ResistanceState final_state{tr.records.back().resistances};
      return evaluate_regression_loss(t, topo, final_state, options.eval_samples, eval_seed);
    };
    TrainerConfig run;
    run.alpha0 = options.alpha;
    run.beta = options.beta;
    run.gamma = options.gamma;
    run.steps = options.noniter_linear_steps;
    run.seed = mix_seed(options.seed, 300 + static_cast<std::uint64_t>(i));
    run.rule = RuleKind::LinearDeltaP;
    const double loss_linear = trained_loss(train(t, topo, run));
    run.rule = RuleKind::CubicDeltaP;
    run.anneal = true;
    run.alpha0 = options.noniter_cubic_alpha;
    run.beta = 2.0;
    run.steps = options.noniter_cubic_steps;
    const double loss_cubic = trained_loss(train(t, topo, run));

    noniter_rows.push_back({std::to_string(i), format_double(non.normalized_loss),
                            format_double(loss_linear), format_double(loss_cubic)});
    noniter_json.push_back({{"task", i},
                            {"loss_noniter", non.normalized_loss},
                            {"loss_linear", loss_linear},
                            {"loss_cubic", loss_cubic}});
  }
  write_table_csv(join(options.out_dir, "noniter.csv"), meta,
                  {"task", "loss_noniter", "loss_linear", "loss_cubic"}, noniter_rows);

  nlohmann::json summary = meta;
  summary["gd_compare"] = {{"max_relative_deviation", max_rel_dev},
                           {"beastal_final_loss", trace.records.back().loss_norm},
                           {"gd_final_loss", gd.records.back().loss_norm}};
  summary["cosine"] = {{"positive_fraction", positive_fraction},
                       {"last_quarter_mean", last_quarter_mean},
                       {"undefined_steps", cosine.undefined_steps}};
  summary["noniter"] = noniter_json;
  write_json(join(options.out_dir, "summary.json"), summary);

  std::cout << "baselines: max GD deviation " << format_double(max_rel_dev)
            << ", cosine positive fraction " << format_double(positive_fraction)
            << ", last-quarter mean C " << format_double(last_quarter_mean) << ", outputs in "
            << options.out_dir << "\n";
}

void run_hidden_compare(const HiddenCompareOptions& options) {
  const std::vector<RuleKind> rules = parse_rules(options.rules);

  std::vector<std::pair<std::string, RegressionTask>> tasks;
  tasks.emplace_back("1in5out_a", gen_regression_task(1, 5, mix_seed(options.seed, 1)));
  tasks.emplace_back("1in5out_b", gen_regression_task(1, 5, mix_seed(options.seed, 2)));
  tasks.emplace_back("6in7out", gen_regression_task(6, 7, mix_seed(options.seed, 3)));

  TrainerConfig base;
  base.alpha0 = options.alpha;
  base.beta = options.beta;
  base.gamma = options.gamma;
  base.steps = options.steps;
  base.seed = mix_seed(options.seed, 4);

  const std::vector<HiddenComparisonRow> rows = hidden_layer_comparison(tasks, rules, base);

  ensure_dir(options.out_dir);
  nlohmann::json meta = to_json(options);
  meta["command"] = "hidden-compare";
  meta["version"] = kVersion;

  std::vector<std::vector<std::string>> csv_rows;
  auto rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    csv_rows.push_back({row.task_id, row.hidden ? "1" : "0", std::string(rule_name(row.rule)),
                        format_double(row.final_loss), format_double(row.final_loss_std)});
    rows_json.push_back({{"task", row.task_id},
                         {"hidden", row.hidden},
                         {"rule", rule_name(row.rule)},
                         {"final_loss", row.final_loss},
                         {"final_loss_std", row.final_loss_std}});
  }
  write_table_csv(join(options.out_dir, "hidden.csv"), meta,
                  {"task", "hidden", "rule", "final_loss", "final_loss_std"}, csv_rows);
  nlohmann::json summary = meta;
  summary["rows"] = rows_json;
  write_json(join(options.out_dir, "summary.json"), summary);

  std::cout << "hidden-compare: " << rows.size() << " rows, outputs in " << options.out_dir
            << "\n";
}

}  // namespace beastal
