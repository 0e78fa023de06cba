#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <string_view>

#include "CLI11.hpp"
#include "beastal/common.hpp"
#include "beastal/experiments.hpp"
#include "json.hpp"

namespace {

#ifndef BEASTAL_DEFAULT_IRIS_PATH
#define BEASTAL_DEFAULT_IRIS_PATH "data/iris.csv"
#endif

// The JSON config file (if any) must be applied to the option struct before
// CLI11 binds flags over it, so the file path and the subcommand name are
// pulled out of argv ahead of the real parse.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return std::string(arg.substr(9));
  }
  return {};
}

std::string find_subcommand(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (!arg.empty() && arg[0] != '-') return std::string(arg);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  using beastal::apply_json;

  CLI::App app{"Self-adjusting resistor network training simulator"};
  app.set_version_flag("--version", std::string(beastal::kVersion));
  app.require_subcommand(0, 1);

  const std::string config_path = find_config_path(argc, argv);
  const std::string subcommand = find_subcommand(argc, argv);
  nlohmann::json config_doc = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return 2;
    }
    try {
      in >> config_doc;
    } catch (const std::exception& e) {
      std::cerr << "error: config file " << config_path << " is not valid JSON: " << e.what()
                << "\n";
      return 2;
    }
  }
  const bool have_config = !config_path.empty();

  beastal::TrainRegressionOptions train_opts;
  beastal::SweepGridOptions sweep_opts;
  beastal::TrainClassificationOptions cls_opts;
  beastal::BaselinesOptions base_opts;
  beastal::HiddenCompareOptions hidden_opts;
  cls_opts.iris_path = BEASTAL_DEFAULT_IRIS_PATH;

  try {
    if (have_config) {
      if (subcommand == "train-regression") apply_json(config_doc, train_opts);
      else if (subcommand == "sweep-grid") apply_json(config_doc, sweep_opts);
      else if (subcommand == "train-classification") apply_json(config_doc, cls_opts);
      else if (subcommand == "baselines") apply_json(config_doc, base_opts);
      else if (subcommand == "hidden-compare") apply_json(config_doc, hidden_opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::string config_echo;  // bound so --config is a recognized flag
  std::function<void()> action;

  auto* train_cmd = app.add_subcommand(
      "train-regression", "Train one network on a linear regression task");
  {
    auto* inputs = train_cmd->add_option("--inputs", train_opts.inputs, "Input node count");
    auto* outputs = train_cmd->add_option("--outputs", train_opts.outputs, "Output node count");
    if (!have_config) {
      inputs->required();
      outputs->required();
    }
    train_cmd->add_option("--M", train_opts.m_values,
                          "Task matrix, row-major comma list (default: random from seed)")
        ->delimiter(',');
    train_cmd->add_option("--rule", train_opts.rule,
                          "Evolution rule: linear|cubic|flow|power|instantaneous");
    train_cmd->add_option("--alpha", train_opts.alpha, "Learning rate");
    train_cmd->add_option("--beta", train_opts.beta, "Annealing exponent");
    train_cmd->add_option("--gamma", train_opts.gamma, "Resistance response scale");
    train_cmd->add_flag("--anneal", train_opts.anneal, "Anneal the learning rate");
    train_cmd->add_flag("--hidden", train_opts.hidden, "Insert a hidden layer");
    train_cmd->add_option("--steps", train_opts.steps, "Training steps");
    train_cmd->add_option("--seed", train_opts.seed, "Run seed");
    train_cmd->add_option("--init", train_opts.init, "Initial resistances: ones|random");
    train_cmd->add_option("--out", train_opts.out_dir, "Output directory");
    train_cmd->add_option("--config", config_echo, "JSON config file (flags override it)");
    train_cmd->callback([&] { action = [&] { beastal::run_train_regression(train_opts); }; });
  }

  auto* sweep_cmd = app.add_subcommand(
      "sweep-grid", "Sweep network sizes, averaging final loss over seeds");
  {
    sweep_cmd->add_option("--max-inputs", sweep_opts.max_inputs, "Largest input count");
    sweep_cmd->add_option("--max-outputs", sweep_opts.max_outputs, "Largest output count");
    sweep_cmd->add_option("--rules", sweep_opts.rules, "Rules to sweep (or 'all')")
        ->delimiter(',');
    sweep_cmd->add_option("--alpha", sweep_opts.alpha, "Learning rate");
    sweep_cmd->add_option("--beta", sweep_opts.beta, "Annealing exponent (cubic runs)");
    sweep_cmd->add_option("--gamma", sweep_opts.gamma, "Resistance response scale");
    sweep_cmd->add_option("--steps", sweep_opts.steps, "Training steps per run");
    sweep_cmd->add_option("--seeds", sweep_opts.seeds, "Seed list")->delimiter(',');
    sweep_cmd->add_option("--window", sweep_opts.window, "Records averaged at the run tail");
    sweep_cmd->add_option("--jobs", sweep_opts.jobs, "Concurrent runs (0 = auto)");
    sweep_cmd->add_option("--out", sweep_opts.out_dir, "Output directory");
    sweep_cmd->add_option("--config", config_echo, "JSON config file (flags override it)");
    sweep_cmd->callback([&] { action = [&] { beastal::run_sweep_grid(sweep_opts); }; });
  }

  auto* cls_cmd = app.add_subcommand(
      "train-classification", "Train 4-in/3-out networks on the Iris dataset");
  {
    cls_cmd->add_option("--rules", cls_opts.rules, "Rules to run (or 'all')")->delimiter(',');
    cls_cmd->add_option("--alpha", cls_opts.alpha, "Learning rate");
    cls_cmd->add_option("--beta", cls_opts.beta, "Annealing exponent");
    cls_cmd->add_option("--gamma", cls_opts.gamma, "Resistance response scale");
    cls_cmd->add_flag("--anneal", cls_opts.anneal, "Anneal the learning rate");
    cls_cmd->add_option("--steps", cls_opts.steps, "Training steps per run");
    cls_cmd->add_option("--seeds", cls_opts.seeds, "Seed list")->delimiter(',');
    cls_cmd->add_option("--train-size", cls_opts.train_size, "Training samples (of 150)");
    cls_cmd->add_option("--refresh-period", cls_opts.refresh_period,
                        "Steps between target re-tokenizations");
    cls_cmd->add_flag("--stratified", cls_opts.stratified,
                      "Split with equal per-species training counts");
    cls_cmd->add_option("--init", cls_opts.init, "Initial resistances: ones|random");
    cls_cmd->add_option("--iris-path", cls_opts.iris_path, "Iris CSV file");
    cls_cmd->add_option("--jobs", cls_opts.jobs, "Concurrent runs (0 = auto)");
    cls_cmd->add_option("--out", cls_opts.out_dir, "Output directory");
    cls_cmd->add_option("--config", config_echo, "JSON config file (flags override it)");
    cls_cmd->callback([&] { action = [&] { beastal::run_train_classification(cls_opts); }; });
  }

  auto* base_cmd = app.add_subcommand(
      "baselines", "Gradient-descent pairing, cosine diagnostic, one-shot scheme");
  {
    base_cmd->add_option("--inputs", base_opts.inputs, "GD-comparison task inputs");
    base_cmd->add_option("--outputs", base_opts.outputs, "GD-comparison task outputs");
    base_cmd->add_option("--alpha", base_opts.alpha, "Scheme learning rate");
    base_cmd->add_option("--gd-alpha", base_opts.gd_alpha, "Gradient-descent learning rate");
    base_cmd->add_option("--beta", base_opts.beta, "Annealing exponent (cubic runs)");
    base_cmd->add_option("--gamma", base_opts.gamma, "Resistance response scale");
    base_cmd->add_option("--steps", base_opts.steps, "Steps for the paired runs");
    base_cmd->add_option("--seed", base_opts.seed, "Base seed");
    base_cmd->add_option("--noniter-tasks", base_opts.noniter_tasks,
                         "Random tasks for the one-shot comparison");
    base_cmd->add_option("--noniter-inputs", base_opts.noniter_inputs, "One-shot task inputs");
    base_cmd->add_option("--noniter-outputs", base_opts.noniter_outputs,
                         "One-shot task outputs");
    base_cmd->add_option("--noniter-linear-steps", base_opts.noniter_linear_steps,
                         "Steps for the linear-rule reference runs");
    base_cmd->add_option("--noniter-cubic-steps", base_opts.noniter_cubic_steps,
                         "Steps for the annealed cubic reference runs");
    base_cmd->add_option("--noniter-cubic-alpha", base_opts.noniter_cubic_alpha,
                         "Initial learning rate for the annealed cubic references");
    base_cmd->add_option("--eval-samples", base_opts.eval_samples,
                         "Evaluation samples for the one-shot loss");
    base_cmd->add_option("--out", base_opts.out_dir, "Output directory");
    base_cmd->add_option("--config", config_echo, "JSON config file (flags override it)");
    base_cmd->callback([&] { action = [&] { beastal::run_baselines(base_opts); }; });
  }

  auto* hidden_cmd = app.add_subcommand(
      "hidden-compare", "Final losses with and without a hidden layer");
  {
    hidden_cmd->add_option("--rules", hidden_opts.rules, "Rules to compare")->delimiter(',');
    hidden_cmd->add_option("--alpha", hidden_opts.alpha, "Learning rate");
    hidden_cmd->add_option("--beta", hidden_opts.beta, "Annealing exponent (cubic runs)");
    hidden_cmd->add_option("--gamma", hidden_opts.gamma, "Resistance response scale");
    hidden_cmd->add_option("--steps", hidden_opts.steps, "Training steps per run");
    hidden_cmd->add_option("--seed", hidden_opts.seed, "Base seed");
    hidden_cmd->add_option("--out", hidden_opts.out_dir, "Output directory");
    hidden_cmd->add_option("--config", config_echo, "JSON config file (flags override it)");
    hidden_cmd->callback([&] { action = [&] { beastal::run_hidden_compare(hidden_opts); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!action) {
    std::cout << app.help();
    return 0;
  }
  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
