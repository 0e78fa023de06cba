#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

#include "beastal/rules.hpp"
#include "beastal/tasks.hpp"

namespace beastal {

enum class ResistanceInit {
  AllOnes,
  UniformRandom,  // seeded uniform in [0.5, 1.5]
};

struct TrainerConfig {
  double alpha0 = 0.3;  // learning rate, valid range [0.01, 1.5]
  double beta = 1.0;    // annealing exponent, valid range [0.5, 2] when annealing
  long steps = 5000;
  RuleKind rule = RuleKind::LinearDeltaP;
  bool anneal = false;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  int target_refresh_period = 30;  // classification only
  double r_min = 1e-6;
  ResistanceInit init = ResistanceInit::AllOnes;
  long max_trace_records = 100000;
};

void validate_config(const TrainerConfig& config);

ResistanceState initial_resistances(const NetworkTopology& topology, const TrainerConfig& config);

/// Exponential annealing schedule alpha0 * exp(-beta t / T); constant alpha0
/// when annealing is off.
double learning_rate_at(const TrainerConfig& config, long t);

Eigen::VectorXd loss_vector(const Eigen::VectorXd& desired, const Eigen::VectorXd& measured);

/// Squared loss divided by the mean squared desired output (dimensionless).
/// Throws std::domain_error when the desired vector is all zero.
double normalized_mse(const Eigen::VectorXd& desired, const Eigen::VectorXd& measured);

/// Desired Update-modality pressure drop per edge for single-layer networks:
/// (y_i - x_j)(yhat_i - y_i) on an input-output edge, with x_j taken as 0 on
/// the ground edge of output i. Ordering matches the topology's edge order.
Eigen::VectorXd target_edge_drops(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& desired,
                                  const NetworkTopology& topology);

/// Hidden-layer generalization of the edge targets (an interpretation, not a
/// published rule; see README): the measured drop toward the output side of
/// each edge times the output error reached by that edge, with the mean
/// output error standing in on input-hidden edges.
Eigen::VectorXd target_edge_drops_hidden(const PressureState& measured, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& desired,
                                         const NetworkTopology& topology);

struct UpdateBoundary {
  Eigen::VectorXd x_update;
  Eigen::VectorXd y_update;
};

/// Boundary pressures to impose during Update: (alpha_t / gamma) U^+ v in
/// plain mode; in annealed mode U^+ v is renormalized to unit magnitude and
/// scaled by alpha_t / gamma, so the step size follows the learning-rate
/// schedule no matter how small the residual is. The node vector is shifted
/// by a constant so the ground entry is exactly zero (only pressure
/// differences matter); hidden entries, when present, are not imposable and
/// are dropped. A zero U^+ v in annealed mode yields an all-zero boundary.
UpdateBoundary update_boundary(const Eigen::VectorXd& target_drops,
                               const NetworkTopology& topology, const PseudoInverse& pinv,
                               double alpha_t, double gamma, bool anneal);

struct TraceRecord {
  long t = 0;
  Eigen::VectorXd x, y, desired, x_update, y_update, resistances;
  double loss_norm = 0.0;
  double accuracy = std::numeric_limits<double>::quiet_NaN();  // classification runs only
};

struct TrainingTrace {
  std::vector<TraceRecord> records;
  long steps = 0;
  long record_stride = 1;
  long clamp_events = 0;
};

/// Mean normalized loss over the last `window` records (fewer if the trace
/// is shorter); the usual summary statistic for a finished run.
double trailing_mean_loss(const TrainingTrace& trace, long window);

struct StepOutcome {
  ResistanceState state;
  TraceRecord record;
  int clamp_events = 0;
};

/// One full training step: Measurement, loss, edge targets, Update boundary,
/// Update-modality solve, rule application. Resistances change only in the
/// final stage. Errors carry the step index.
StepOutcome training_step(const NetworkTopology& topology, const PseudoInverse& pinv,
                          const ResistanceState& resistances, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& desired, const TrainerConfig& config, long t);

/// Online training on a regression task; inputs drawn componentwise uniform
/// from [0,1] with the config seed.
TrainingTrace train(const RegressionTask& task, const NetworkTopology& topology,
                    const TrainerConfig& config);

struct ClassificationOutcome {
  TrainingTrace trace;  // records carry per-step test accuracy
  ClassificationTargets targets;
  ResistanceState state;
};

/// Online training on the Iris task: train samples cycled in per-epoch
/// shuffled order, per-species targets re-tokenized every
/// target_refresh_period steps, test accuracy recorded each step.
ClassificationOutcome train(const IrisDataset& dataset, const DatasetSplit& split,
                            const NetworkTopology& topology, const TrainerConfig& config);

}  // namespace beastal
