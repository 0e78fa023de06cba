#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace beastal {

// Each subcommand owns an options struct. Values resolve in three layers:
// built-in defaults, then a JSON config file, then command-line flags; the
// merged result is echoed into every output's metadata.

struct TrainRegressionOptions {
  int inputs = 2;
  int outputs = 1;
  bool hidden = false;
  std::vector<double> m_values;  // row-major task matrix; empty = random from seed
  std::string rule = "linear";
  double alpha = 0.3;
  double beta = 1.0;
  double gamma = 1.0;
  bool anneal = false;
  long steps = 5000;
  std::uint64_t seed = 0;
  std::string init = "ones";  // or "random"
  std::string out_dir = "out/train-regression";
};

struct SweepGridOptions {
  int max_inputs = 7;
  int max_outputs = 7;
  std::vector<std::string> rules = {"linear", "cubic"};
  double alpha = 0.3;
  double beta = 1.0;
  double gamma = 1.0;
  long steps = 5000;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7};
  long window = 400;  // records averaged at the tail of each run
  int jobs = 0;       // 0 = hardware concurrency
  std::string out_dir = "out/sweep-grid";
};

struct TrainClassificationOptions {
  std::vector<std::string> rules = {"linear"};  // or the single entry "all"
  double alpha = 0.3;
  double beta = 1.0;
  double gamma = 1.0;
  bool anneal = false;
  long steps = 2000;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7};
  int train_size = 30;
  int refresh_period = 30;
  bool stratified = false;
  std::string init = "ones";
  std::string iris_path;  // empty = built-in dataset path
  int jobs = 0;
  std::string out_dir = "out/train-classification";
};

struct BaselinesOptions {
  int inputs = 4;  // dimensions of the GD-comparison task
  int outputs = 6;
  double alpha = 0.3;
  double gd_alpha = 0.5;
  double beta = 1.0;
  double gamma = 1.0;
  long steps = 4000;
  std::uint64_t seed = 0;
  int noniter_tasks = 8;  // random 3-in/2-out instances for the one-shot scheme
  int noniter_inputs = 3;
  int noniter_outputs = 2;
  long noniter_linear_steps = 20000;
  long noniter_cubic_steps = 50000;
  double noniter_cubic_alpha = 0.22;  // annealed runs settle only in a narrow band
  int eval_samples = 1000;
  std::string out_dir = "out/baselines";
};

struct HiddenCompareOptions {
  std::vector<std::string> rules = {"linear", "cubic"};
  double alpha = 0.3;
  double beta = 1.0;
  double gamma = 1.0;
  long steps = 8000;
  std::uint64_t seed = 0;
  std::string out_dir = "out/hidden-compare";
};

nlohmann::json to_json(const TrainRegressionOptions& options);
nlohmann::json to_json(const SweepGridOptions& options);
nlohmann::json to_json(const TrainClassificationOptions& options);
nlohmann::json to_json(const BaselinesOptions& options);
nlohmann::json to_json(const HiddenCompareOptions& options);

void apply_json(const nlohmann::json& j, TrainRegressionOptions& options);
void apply_json(const nlohmann::json& j, SweepGridOptions& options);
void apply_json(const nlohmann::json& j, TrainClassificationOptions& options);
void apply_json(const nlohmann::json& j, BaselinesOptions& options);
void apply_json(const nlohmann::json& j, HiddenCompareOptions& options);

// Runners create out_dir, write their files, and print a short result
// summary to stdout; failures throw.
void run_train_regression(const TrainRegressionOptions& options);
void run_sweep_grid(const SweepGridOptions& options);
void run_train_classification(const TrainClassificationOptions& options);
void run_baselines(const BaselinesOptions& options);
void run_hidden_compare(const HiddenCompareOptions& options);

}  // namespace beastal
