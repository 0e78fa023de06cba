#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "beastal/flow.hpp"

namespace beastal {

/// Linear regression target y = amplification * M x. M is nonnegative with
/// row sums capped at 0.75 so the desired outputs stay reachable by a
/// passive network; amplification records the user-facing rescale factor.
struct RegressionTask {
  Eigen::MatrixXd M;  // n_outputs x n_inputs
  double amplification = 1.0;
};

/// Random task with entries uniform in [0,1]; rows whose sum exceeds 0.75
/// are rescaled onto the cap.
RegressionTask gen_regression_task(int n_inputs, int n_outputs, std::uint64_t seed);

Eigen::VectorXd desired_output(const RegressionTask& task, const Eigen::VectorXd& x);

inline constexpr std::array<std::string_view, 3> kIrisSpecies = {"setosa", "versicolor",
                                                                 "virginica"};

struct IrisSample {
  Eigen::Vector4d attributes;  // sepal length/width, petal length/width, cm
  int species = 0;             // index into kIrisSpecies
};

struct IrisDataset {
  std::vector<IrisSample> samples;
};

/// Parse and validate the 150-sample Iris CSV (4 numeric columns and a
/// species label; a header row is allowed). Malformed rows fail with the
/// line number; wrong totals (150 rows, 50 per species) fail validation.
IrisDataset load_iris(const std::string& path);
IrisDataset parse_iris_csv(std::istream& in, const std::string& source_name);

struct DatasetSplit {
  std::vector<int> train;
  std::vector<int> test;
};

/// Seeded random split without replacement; test is the complement.
/// Stratified mode draws n_train/3 per species.
DatasetSplit split_dataset(const IrisDataset& dataset, int n_train, std::uint64_t seed,
                           bool stratified = false);

/// Per-species desired outputs: the network response to the species-mean
/// attribute vector under the current resistances. By linearity this equals
/// the mean response over that species' samples.
struct ClassificationTargets {
  std::array<Eigen::VectorXd, 3> target;
  long computed_at_step = 0;
};

ClassificationTargets tokenize_targets(const NetworkTopology& topology,
                                       const ResistanceState& resistances,
                                       const IrisDataset& dataset, long step = 0);

/// Nearest target by L2 distance; ties resolve to the lowest species index.
int classify(const Eigen::VectorXd& outputs, const ClassificationTargets& targets);

/// Fraction of test samples whose measured output classifies correctly.
double accuracy(const NetworkTopology& topology, const ResistanceState& resistances,
                const IrisDataset& dataset, const std::vector<int>& test_indices,
                const ClassificationTargets& targets);

}  // namespace beastal
