#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beastal/trainer.hpp"

namespace beastal {

/// Finite stand-in for an open circuit: edges whose ideal conductance is
/// zero get this resistance instead of infinity.
inline constexpr double kResistanceCap = 1e9;

struct ConductanceState {
  Eigen::VectorXd k;  // per edge, k = 1/R
};

ConductanceState to_conductances(const ResistanceState& resistances);
ResistanceState to_resistances(const ConductanceState& conductances);

/// Exact per-edge gradient of the cost c = (1/N_out)|yhat - y|^2 with
/// respect to the conductances of a single-layer network. The conductance
/// sum of the receiving output divides each entry; it is kept explicit so a
/// finite-difference check can be strict.
Eigen::VectorXd gd_gradient(const ConductanceState& conductances, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y, const Eigen::VectorXd& desired,
                            const NetworkTopology& topology);

struct GdConfig {
  double alpha = 0.3;
  long steps = 5000;
  std::uint64_t seed = 0;
  double k_min = 1.0 / kResistanceCap;  // floor for conductances driven to zero or below
  ResistanceInit init = ResistanceInit::AllOnes;
  long max_trace_records = 100000;
};

struct GdRecord {
  long t = 0;
  double loss_norm = 0.0;
  Eigen::VectorXd conductances;  // after the step's update
};

struct GdTrace {
  std::vector<GdRecord> records;
  long steps = 0;
  long record_stride = 1;
  long clamp_events = 0;
};

/// Online gradient descent directly on conductances, one sample per step.
/// The sample stream matches train() for the same seed, so a GD run pairs
/// with a scheme run sample-for-sample. Non-physical reference baseline.
GdTrace gd_train(const RegressionTask& task, const NetworkTopology& topology,
                 const GdConfig& config);

/// C = -(dk . grad) / (|dk| |grad|); positive means the conductance change
/// has a descent component. Empty when either vector is zero.
std::optional<double> cosine_similarity(const Eigen::VectorXd& dk_step,
                                        const Eigen::VectorXd& grad_cost);

struct SimilarityTrace {
  std::vector<long> t;       // steps with a defined similarity
  std::vector<double> c;     // aligned with t
  long undefined_steps = 0;  // zero-change or zero-gradient steps

  double mean() const;
};

/// Per-step cosine similarity between the conductance change the trainer
/// made and the exact cost gradient at the pre-update state, recovered from
/// a full-resolution trace (record_stride must be 1).
SimilarityTrace cosine_trace(const TrainingTrace& trace, const ResistanceState& initial,
                             const NetworkTopology& topology);

/// Closed-form solution of the regression task: conductances proportional to
/// M per output, remainder on the ground edge, one free scale per output.
/// Zero conductances become kResistanceCap resistances.
ResistanceState analytic_optimal_resistances(const RegressionTask& task,
                                             const NetworkTopology& topology,
                                             const Eigen::VectorXd& scale);
ResistanceState analytic_optimal_resistances(const RegressionTask& task,
                                             const NetworkTopology& topology);

struct NoniterResult {
  Eigen::VectorXd update_pressures;  // per node
  ResistanceState realized;
  double normalized_loss = 0.0;  // mean over the evaluation samples
};

/// Mean normalized MSE of a fixed resistance state on a regression task,
/// over eval_samples inputs drawn componentwise uniform from [0, 1].
double evaluate_regression_loss(const RegressionTask& task, const NetworkTopology& topology,
                                const ResistanceState& state, int eval_samples = 1000,
                                std::uint64_t eval_seed = 0);

/// One-shot attempt to imprint the known-optimal resistances through the
/// Update boundary with the instantaneous rule: boundary p = (1/gamma) U+ R*,
/// realized R = U U+ R* (the projection of R* onto realizable drop
/// patterns), then the realized network is scored on the task over
/// eval_samples random inputs.
NoniterResult noniterative_scheme(const RegressionTask& task, const NetworkTopology& topology,
                                  const ResistanceState& r_star, double gamma,
                                  int eval_samples = 1000, std::uint64_t eval_seed = 0);

struct HiddenComparisonRow {
  std::string task_id;
  bool hidden = false;
  RuleKind rule = RuleKind::LinearDeltaP;
  double final_loss = 0.0;  // mean normalized loss over the last 100 records
  double final_loss_std = 0.0;
};

/// Train every task with and without a hidden layer under each rule and
/// tabulate the final losses. Annealing follows the cubic rule regardless of
/// the base config, matching how the rules are used everywhere else.
std::vector<HiddenComparisonRow> hidden_layer_comparison(
    const std::vector<std::pair<std::string, RegressionTask>>& tasks,
    const std::vector<RuleKind>& rules, const TrainerConfig& base);

}  // namespace beastal
