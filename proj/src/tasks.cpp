#include "beastal/tasks.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "beastal/common.hpp"

namespace beastal {

RegressionTask gen_regression_task(int n_inputs, int n_outputs, std::uint64_t seed) {
  if (n_inputs < 1 || n_outputs < 1) {
    throw std::invalid_argument("regression task needs at least one input and one output");
  }
  auto rng = make_rng(seed, kStreamTask);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  RegressionTask task;
  task.M.resize(n_outputs, n_inputs);
  for (int o = 0; o < n_outputs; ++o) {
    for (int j = 0; j < n_inputs; ++j) {
      task.M(o, j) = uniform(rng);
    }
  }
  for (int o = 0; o < n_outputs; ++o) {
    const double row_sum = task.M.row(o).sum();
    if (row_sum > 0.75) {
      task.M.row(o) *= 0.75 / row_sum;
    }
  }
  return task;
}

Eigen::VectorXd desired_output(const RegressionTask& task, const Eigen::VectorXd& x) {
  if (x.size() != task.M.cols()) {
    throw std::invalid_argument("input length does not match task matrix columns");
  }
  return task.amplification * (task.M * x);
}

namespace {

int species_index(const std::string& label) {
  for (std::size_t s = 0; s < kIrisSpecies.size(); ++s) {
    if (kIrisSpecies[s] == label) return static_cast<int>(s);
  }
  return -1;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

IrisDataset parse_iris_csv(std::istream& in, const std::string& source_name) {
  IrisDataset dataset;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string row = trim(line);
    if (row.empty()) continue;

    std::array<std::string, 5> fields;
    std::stringstream ss(row);
    std::string field;
    int count = 0;
    while (std::getline(ss, field, ',')) {
      if (count < 5) fields[count] = trim(field);
      ++count;
    }
    if (count != 5) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_number) +
                               ": expected 5 comma-separated fields, got " +
                               std::to_string(count));
    }
    if (line_number == 1 && species_index(fields[4]) < 0) {
      continue;  // header row
    }

    IrisSample sample;
    for (int c = 0; c < 4; ++c) {
      try {
        std::size_t used = 0;
        sample.attributes(c) = std::stod(fields[c], &used);
        if (used != fields[c].size()) throw std::invalid_argument(fields[c]);
      } catch (const std::exception&) {
        throw std::runtime_error(source_name + ":" + std::to_string(line_number) +
                                 ": field " + std::to_string(c + 1) + " is not numeric: '" +
                                 fields[c] + "'");
      }
    }
    sample.species = species_index(fields[4]);
    if (sample.species < 0) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_number) +
                               ": unknown species label '" + fields[4] + "'");
    }
    dataset.samples.push_back(sample);
  }

  if (dataset.samples.size() != 150) {
    throw std::runtime_error(source_name + ": expected 150 samples, got " +
                             std::to_string(dataset.samples.size()));
  }
  std::array<int, 3> per_species{0, 0, 0};
  for (const auto& s : dataset.samples) per_species[s.species]++;
  for (std::size_t s = 0; s < per_species.size(); ++s) {
    if (per_species[s] != 50) {
      throw std::runtime_error(source_name + ": species '" + std::string(kIrisSpecies[s]) +
                               "' has " + std::to_string(per_species[s]) +
                               " samples, expected 50");
    }
  }
  return dataset;
}

IrisDataset load_iris(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open iris dataset: " + path);
  }
  return parse_iris_csv(in, path);
}

DatasetSplit split_dataset(const IrisDataset& dataset, int n_train, std::uint64_t seed,
                           bool stratified) {
  const int n = static_cast<int>(dataset.samples.size());
  if (n_train < 1 || n_train >= n) {
    throw std::invalid_argument("n_train must be in [1, dataset size)");
  }
  auto rng = make_rng(seed, kStreamSplit);

  DatasetSplit split;
  std::vector<char> in_train(n, 0);
  if (!stratified) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < n_train; ++i) in_train[order[i]] = 1;
  } else {
    if (n_train % 3 != 0) {
      throw std::invalid_argument("stratified split needs n_train divisible by 3");
    }
    for (int s = 0; s < 3; ++s) {
      std::vector<int> members;
      for (int i = 0; i < n; ++i) {
        if (dataset.samples[i].species == s) members.push_back(i);
      }
      std::shuffle(members.begin(), members.end(), rng);
      for (int i = 0; i < n_train / 3; ++i) in_train[members[i]] = 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    (in_train[i] ? split.train : split.test).push_back(i);
  }
  return split;
}

ClassificationTargets tokenize_targets(const NetworkTopology& topology,
                                       const ResistanceState& resistances,
                                       const IrisDataset& dataset, long step) {
  if (topology.n_inputs != 4 || topology.n_outputs != 3) {
    throw std::invalid_argument("classification expects a 4-input 3-output network");
  }
  ClassificationTargets targets;
  targets.computed_at_step = step;
  for (int s = 0; s < 3; ++s) {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    int count = 0;
    for (const auto& sample : dataset.samples) {
      if (sample.species == s) {
        mean += sample.attributes;
        ++count;
      }
    }
    mean /= static_cast<double>(count);
    targets.target[s] = measure_outputs(topology, resistances, mean);
  }
  return targets;
}

int classify(const Eigen::VectorXd& outputs, const ClassificationTargets& targets) {
  int best = 0;
  double best_distance = (outputs - targets.target[0]).squaredNorm();
  for (int s = 1; s < 3; ++s) {
    const double distance = (outputs - targets.target[s]).squaredNorm();
    if (distance < best_distance) {
      best = s;
      best_distance = distance;
    }
  }
  return best;
}

double accuracy(const NetworkTopology& topology, const ResistanceState& resistances,
                const IrisDataset& dataset, const std::vector<int>& test_indices,
                const ClassificationTargets& targets) {
  if (test_indices.empty()) {
    throw std::invalid_argument("accuracy needs a non-empty test set");
  }
  int correct = 0;
  for (int index : test_indices) {
    const auto& sample = dataset.samples.at(static_cast<std::size_t>(index));
    const Eigen::VectorXd outputs = measure_outputs(topology, resistances, sample.attributes);
    if (classify(outputs, targets) == sample.species) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test_indices.size());
}

}  // namespace beastal
