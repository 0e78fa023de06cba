#include "beastal/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "beastal/flow.hpp"

namespace beastal {

namespace {

long trace_stride(const TrainerConfig& config) {
  if (config.steps <= config.max_trace_records) return 1;
  return (config.steps + config.max_trace_records - 1) / config.max_trace_records;
}

int layer_rank(NodeKind kind) {
  switch (kind) {
    case NodeKind::Hidden:
      return 1;
    case NodeKind::Output:
      return 2;
    default:
      return 0;  // inputs and ground sit at the bottom
  }
}

}  // namespace

void validate_config(const TrainerConfig& config) {
  if (config.alpha0 < 0.01 || config.alpha0 > 1.5) {
    throw std::invalid_argument("alpha must lie in [0.01, 1.5], got " +
                                std::to_string(config.alpha0));
  }
  if (config.anneal && (config.beta < 0.5 || config.beta > 2.0)) {
    throw std::invalid_argument("beta must lie in [0.5, 2] when annealing, got " +
                                std::to_string(config.beta));
  }
  if (config.steps < 1) throw std::invalid_argument("steps must be positive");
  if (config.gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
  if (config.r_min <= 0.0) throw std::invalid_argument("r_min must be positive");
  if (config.target_refresh_period < 1) {
    throw std::invalid_argument("target refresh period must be positive");
  }
  if (config.max_trace_records < 1) {
    throw std::invalid_argument("max trace records must be positive");
  }
}

ResistanceState initial_resistances(const NetworkTopology& topology,
                                    const TrainerConfig& config) {
  ResistanceState state;
  if (config.init == ResistanceInit::AllOnes) {
    state.r = Eigen::VectorXd::Ones(topology.edge_count());
    return state;
  }
  auto rng = make_rng(config.seed, kStreamInit);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  state.r.resize(topology.edge_count());
  for (int e = 0; e < topology.edge_count(); ++e) state.r(e) = dist(rng);
  return state;
}

double learning_rate_at(const TrainerConfig& config, long t) {
  if (!config.anneal) return config.alpha0;
  return config.alpha0 *
         std::exp(-config.beta * static_cast<double>(t) / static_cast<double>(config.steps));
}

Eigen::VectorXd loss_vector(const Eigen::VectorXd& desired, const Eigen::VectorXd& measured) {
  if (desired.size() != measured.size()) {
    throw std::invalid_argument("loss vectors differ in length");
  }
  return desired - measured;
}

double normalized_mse(const Eigen::VectorXd& desired, const Eigen::VectorXd& measured) {
  const Eigen::VectorXd loss = loss_vector(desired, measured);
  const double scale = desired.squaredNorm();
  if (scale == 0.0) {
    throw std::domain_error("normalized MSE undefined for an all-zero desired output");
  }
  return loss.squaredNorm() / scale;
}

Eigen::VectorXd target_edge_drops(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& desired,
                                  const NetworkTopology& topology) {
  if (topology.has_hidden()) {
    throw std::invalid_argument("single-layer edge targets on a hidden-layer topology");
  }
  const Eigen::VectorXd err = desired - y;
  Eigen::VectorXd v(topology.edge_count());
  for (int e = 0; e < topology.edge_count(); ++e) {
    const Edge& edge = topology.edges[static_cast<std::size_t>(e)];
    if (topology.kind(edge.head) == NodeKind::Output) {
      const int o = edge.head - topology.output_node(0);
      v(e) = (y(o) - x(edge.tail)) * err(o);
    } else {
      const int o = edge.tail - topology.output_node(0);
      v(e) = y(o) * err(o);
    }
  }
  return v;
}

Eigen::VectorXd target_edge_drops_hidden(const PressureState& measured, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& desired,
                                         const NetworkTopology& topology) {
  const Eigen::VectorXd err = desired - y;
  const double mean_err = err.mean();
  Eigen::VectorXd v(topology.edge_count());
  for (int e = 0; e < topology.edge_count(); ++e) {
    const Edge& edge = topology.edges[static_cast<std::size_t>(e)];
    const int tail_rank = layer_rank(topology.kind(edge.tail));
    const int head_rank = layer_rank(topology.kind(edge.head));
    const int upper = tail_rank >= head_rank ? edge.tail : edge.head;
    const int lower = upper == edge.tail ? edge.head : edge.tail;
    const double drop = measured.p(upper) - measured.p(lower);

    double edge_err = mean_err;
    if (topology.kind(edge.tail) == NodeKind::Output) {
      edge_err = err(edge.tail - topology.output_node(0));
    } else if (topology.kind(edge.head) == NodeKind::Output) {
      edge_err = err(edge.head - topology.output_node(0));
    }
    v(e) = drop * edge_err;
  }
  return v;
}

UpdateBoundary update_boundary(const Eigen::VectorXd& target_drops,
                               const NetworkTopology& topology, const PseudoInverse& pinv,
                               double alpha_t, double gamma, bool anneal) {
  if (target_drops.size() != topology.edge_count()) {
    throw std::invalid_argument("edge target length does not match the topology");
  }
  Eigen::VectorXd w = pinv.entries * target_drops;
  if (anneal) {
    // Renormalize the projected node update to unit magnitude so the step
    // size is set by the annealed learning rate alone, independent of how
    // small the residual drops have become.
    const double norm = w.norm();
    if (norm > 0.0) {
      w *= alpha_t / (gamma * norm);
    } else {
      w.setZero();
    }
  } else {
    w *= alpha_t / gamma;
  }
  w.array() -= w(topology.ground_node());

  UpdateBoundary boundary;
  boundary.x_update = w.segment(0, topology.n_inputs);
  boundary.y_update = w.segment(topology.output_node(0), topology.n_outputs);
  return boundary;
}

double trailing_mean_loss(const TrainingTrace& trace, long window) {
  if (trace.records.empty()) throw std::invalid_argument("trailing mean of an empty trace");
  if (window < 1) throw std::invalid_argument("window must be positive");
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(window),
                                              trace.records.size());
  double total = 0.0;
  for (std::size_t i = trace.records.size() - n; i < trace.records.size(); ++i) {
    total += trace.records[i].loss_norm;
  }
  return total / static_cast<double>(n);
}

StepOutcome training_step(const NetworkTopology& topology, const PseudoInverse& pinv,
                          const ResistanceState& resistances, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& desired, const TrainerConfig& config, long t) {
  try {
    Eigen::VectorXd y;
    Eigen::VectorXd targets;
    if (topology.has_hidden()) {
      const PressureState measured = measure_pressures(topology, resistances, x);
      y = measured.p.segment(topology.output_node(0), topology.n_outputs);
      targets = target_edge_drops_hidden(measured, y, desired, topology);
    } else {
      y = measure_outputs(topology, resistances, x);
      targets = target_edge_drops(x, y, desired, topology);
    }

    const double alpha_t = learning_rate_at(config, t);
    const UpdateBoundary boundary =
        update_boundary(targets, topology, pinv, alpha_t, config.gamma, config.anneal);

    const PressureState update_state = solve_pressures(
        topology, resistances,
        BoundaryConditions::update(topology, boundary.x_update, boundary.y_update));
    const Eigen::VectorXd update_drops = edge_pressure_drops(topology, update_state);

    RuleResult applied =
        apply_rule(resistances, update_drops, config.rule, RuleParams{config.gamma, config.r_min});

    StepOutcome outcome;
    outcome.clamp_events = applied.clamp_events;
    outcome.record.t = t;
    outcome.record.x = x;
    outcome.record.y = y;
    outcome.record.desired = desired;
    outcome.record.x_update = boundary.x_update;
    outcome.record.y_update = boundary.y_update;
    outcome.record.loss_norm = normalized_mse(desired, y);
    outcome.state = std::move(applied.state);
    outcome.record.resistances = outcome.state.r;
    return outcome;
  } catch (const SolverError& e) {
    throw SolverError("training step " + std::to_string(t) + ": " + e.what());
  }
}

TrainingTrace train(const RegressionTask& task, const NetworkTopology& topology,
                    const TrainerConfig& config) {
  validate_config(config);
  if (task.M.rows() != topology.n_outputs || task.M.cols() != topology.n_inputs) {
    throw std::invalid_argument("task matrix shape does not match the topology");
  }

  const PseudoInverse pinv = pseudo_inverse(incidence_matrix(topology));
  ResistanceState state = initial_resistances(topology, config);
  auto rng = make_rng(config.seed, kStreamSamples);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  TrainingTrace trace;
  trace.steps = config.steps;
  trace.record_stride = trace_stride(config);
  trace.records.reserve(
      static_cast<std::size_t>(config.steps / trace.record_stride + 2));

  Eigen::VectorXd x(topology.n_inputs);
  for (long t = 0; t < config.steps; ++t) {
    for (int i = 0; i < topology.n_inputs; ++i) x(i) = unit(rng);
    const Eigen::VectorXd desired = desired_output(task, x);
    StepOutcome outcome = training_step(topology, pinv, state, x, desired, config, t);
    state = std::move(outcome.state);
    trace.clamp_events += outcome.clamp_events;
    if (t % trace.record_stride == 0 || t == config.steps - 1) {
      trace.records.push_back(std::move(outcome.record));
    }
  }
  return trace;
}

ClassificationOutcome train(const IrisDataset& dataset, const DatasetSplit& split,
                            const NetworkTopology& topology, const TrainerConfig& config) {
  validate_config(config);
  if (topology.n_inputs != 4 || topology.n_outputs != 3) {
    throw std::invalid_argument("classification needs a 4-input, 3-output network");
  }
  if (split.train.empty()) throw std::invalid_argument("empty training split");

  const PseudoInverse pinv = pseudo_inverse(incidence_matrix(topology));
  ResistanceState state = initial_resistances(topology, config);
  auto shuffle_rng = make_rng(config.seed, kStreamShuffle);
  std::vector<int> order = split.train;
  const long n_train = static_cast<long>(order.size());

  ClassificationOutcome outcome;
  outcome.trace.steps = config.steps;
  outcome.trace.record_stride = trace_stride(config);
  outcome.trace.records.reserve(
      static_cast<std::size_t>(config.steps / outcome.trace.record_stride + 2));

  for (long t = 0; t < config.steps; ++t) {
    if (t % n_train == 0) std::shuffle(order.begin(), order.end(), shuffle_rng);
    if (t % config.target_refresh_period == 0) {
      outcome.targets = tokenize_targets(topology, state, dataset, t);
    }
    const IrisSample& sample =
        dataset.samples[static_cast<std::size_t>(order[static_cast<std::size_t>(t % n_train)])];
    const Eigen::VectorXd x = sample.attributes;
    const Eigen::VectorXd& desired = outcome.targets.target[static_cast<std::size_t>(sample.species)];

    StepOutcome step = training_step(topology, pinv, state, x, desired, config, t);
    state = std::move(step.state);
    outcome.trace.clamp_events += step.clamp_events;
    if (t % outcome.trace.record_stride == 0 || t == config.steps - 1) {
      step.record.accuracy = accuracy(topology, state, dataset, split.test, outcome.targets);
      outcome.trace.records.push_back(std::move(step.record));
    }
  }
  outcome.state = std::move(state);
  return outcome;
}

}  // namespace beastal
