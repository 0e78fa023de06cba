#include "beastal/baselines.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "beastal/flow.hpp"

namespace beastal {

namespace {

void check_single_layer(const NetworkTopology& topology, const char* where) {
  if (topology.has_hidden()) {
    throw std::invalid_argument(std::string(where) + " requires a single-layer network");
  }
}

void check_task_shape(const RegressionTask& task, const NetworkTopology& topology) {
  if (task.M.rows() != topology.n_outputs || task.M.cols() != topology.n_inputs) {
    throw std::invalid_argument("task matrix shape does not match the topology");
  }
}

// Conductance sum per output node, ground edge included.
Eigen::VectorXd output_conductance_sums(const ConductanceState& conductances,
                                        const NetworkTopology& topology) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(topology.n_outputs);
  const int n_in = topology.n_inputs;
  for (int o = 0; o < topology.n_outputs; ++o) {
    for (int j = 0; j < n_in; ++j) sums(o) += conductances.k(o * n_in + j);
    sums(o) += conductances.k(n_in * topology.n_outputs + o);
  }
  return sums;
}

}  // namespace

ConductanceState to_conductances(const ResistanceState& resistances) {
  if ((resistances.r.array() <= 0.0).any()) {
    throw std::invalid_argument("resistances must be positive to invert");
  }
  return ConductanceState{resistances.r.cwiseInverse()};
}

ResistanceState to_resistances(const ConductanceState& conductances) {
  if ((conductances.k.array() <= 0.0).any()) {
    throw std::invalid_argument("conductances must be positive to invert");
  }
  return ResistanceState{conductances.k.cwiseInverse()};
}

Eigen::VectorXd gd_gradient(const ConductanceState& conductances, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y, const Eigen::VectorXd& desired,
                            const NetworkTopology& topology) {
  check_single_layer(topology, "gd_gradient");
  if (conductances.k.size() != topology.edge_count()) {
    throw std::invalid_argument("conductance length does not match the topology");
  }
  const int n_in = topology.n_inputs;
  const int n_out = topology.n_outputs;
  const Eigen::VectorXd sums = output_conductance_sums(conductances, topology);
  const double pre = 2.0 / static_cast<double>(n_out);

  Eigen::VectorXd grad(topology.edge_count());
  for (int o = 0; o < n_out; ++o) {
    const double err = desired(o) - y(o);
    for (int j = 0; j < n_in; ++j) {
      grad(o * n_in + j) = pre * (y(o) - x(j)) * err / sums(o);
    }
    grad(n_in * n_out + o) = pre * y(o) * err / sums(o);
  }
  return grad;
}

GdTrace gd_train(const RegressionTask& task, const NetworkTopology& topology,
                 const GdConfig& config) {
  check_single_layer(topology, "gd_train");
  check_task_shape(task, topology);
  if (config.steps < 1) throw std::invalid_argument("steps must be positive");
  if (config.alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (config.k_min <= 0.0) throw std::invalid_argument("k_min must be positive");

  TrainerConfig init_config;
  init_config.seed = config.seed;
  init_config.init = config.init;
  ConductanceState state = to_conductances(initial_resistances(topology, init_config));

  auto rng = make_rng(config.seed, kStreamSamples);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  GdTrace trace;
  trace.steps = config.steps;
  trace.record_stride =
      config.steps <= config.max_trace_records
          ? 1
          : (config.steps + config.max_trace_records - 1) / config.max_trace_records;
  trace.records.reserve(static_cast<std::size_t>(config.steps / trace.record_stride + 2));

  Eigen::VectorXd x(topology.n_inputs);
  for (long t = 0; t < config.steps; ++t) {
    for (int i = 0; i < topology.n_inputs; ++i) x(i) = unit(rng);
    const Eigen::VectorXd desired = desired_output(task, x);
    const Eigen::VectorXd y = measure_outputs(topology, to_resistances(state), x);
    const Eigen::VectorXd grad = gd_gradient(state, x, y, desired, topology);

    Eigen::VectorXd next = state.k - config.alpha * grad;
    const auto driven_out = (next.array() <= 0.0);
    trace.clamp_events += driven_out.count();
    state.k = driven_out.select(config.k_min, next);

    if (t % trace.record_stride == 0 || t == config.steps - 1) {
      GdRecord record;
      record.t = t;
      record.loss_norm = normalized_mse(desired, y);
      record.conductances = state.k;
      trace.records.push_back(std::move(record));
    }
  }
  return trace;
}

std::optional<double> cosine_similarity(const Eigen::VectorXd& dk_step,
                                        const Eigen::VectorXd& grad_cost) {
  if (dk_step.size() != grad_cost.size()) {
    throw std::invalid_argument("cosine similarity needs equal-length vectors");
  }
  const double dk_norm = dk_step.norm();
  const double grad_norm = grad_cost.norm();
  if (dk_norm == 0.0 || grad_norm == 0.0) return std::nullopt;
  return -dk_step.dot(grad_cost) / (dk_norm * grad_norm);
}

double SimilarityTrace::mean() const {
  if (c.empty()) return 0.0;
  return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
}

SimilarityTrace cosine_trace(const TrainingTrace& trace, const ResistanceState& initial,
                             const NetworkTopology& topology) {
  check_single_layer(topology, "cosine_trace");
  if (trace.record_stride != 1) {
    throw std::invalid_argument("cosine trace needs a full-resolution trace (stride 1)");
  }
  if (trace.records.empty()) throw std::invalid_argument("cosine trace of an empty trace");

  SimilarityTrace similarity;
  similarity.t.reserve(trace.records.size());
  similarity.c.reserve(trace.records.size());

  Eigen::VectorXd k_prev = initial.r.cwiseInverse();
  for (const TraceRecord& record : trace.records) {
    const Eigen::VectorXd k_post = record.resistances.cwiseInverse();
    const Eigen::VectorXd grad =
        gd_gradient(ConductanceState{k_prev}, record.x, record.y, record.desired, topology);
    const auto c = cosine_similarity(k_post - k_prev, grad);
    if (c) {
      similarity.t.push_back(record.t);
      similarity.c.push_back(*c);
    } else {
      ++similarity.undefined_steps;
    }
    k_prev = k_post;
  }
  return similarity;
}

ResistanceState analytic_optimal_resistances(const RegressionTask& task,
                                             const NetworkTopology& topology,
                                             const Eigen::VectorXd& scale) {
  check_single_layer(topology, "analytic_optimal_resistances");
  check_task_shape(task, topology);
  if (scale.size() != topology.n_outputs || (scale.array() <= 0.0).any()) {
    throw std::invalid_argument("per-output scale must be positive");
  }
  if ((task.M.array() < 0.0).any()) {
    throw std::invalid_argument("task matrix entries must be non-negative");
  }
  const Eigen::VectorXd row_sums = task.M.rowwise().sum();
  if ((row_sums.array() >= 1.0).any()) {
    throw std::invalid_argument("task matrix rows must sum below 1");
  }

  const int n_in = topology.n_inputs;
  const int n_out = topology.n_outputs;
  ResistanceState state;
  state.r.resize(topology.edge_count());
  auto resistance_of = [](double k) { return k * kResistanceCap > 1.0 ? 1.0 / k : kResistanceCap; };
  for (int o = 0; o < n_out; ++o) {
    for (int j = 0; j < n_in; ++j) {
      state.r(o * n_in + j) = resistance_of(scale(o) * task.M(o, j));
    }
    state.r(n_in * n_out + o) = resistance_of(scale(o) * (1.0 - row_sums(o)));
  }
  return state;
}

ResistanceState analytic_optimal_resistances(const RegressionTask& task,
                                             const NetworkTopology& topology) {
  return analytic_optimal_resistances(task, topology,
                                      Eigen::VectorXd::Ones(topology.n_outputs));
}

NoniterResult noniterative_scheme(const RegressionTask& task, const NetworkTopology& topology,
                                  const ResistanceState& r_star, double gamma, int eval_samples,
                                  std::uint64_t eval_seed) {
  check_single_layer(topology, "noniterative_scheme");
  check_task_shape(task, topology);
  if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
  if (eval_samples < 1) throw std::invalid_argument("eval_samples must be positive");

  const IncidenceMatrix incidence = incidence_matrix(topology);
  const PseudoInverse pinv = pseudo_inverse(incidence);

  NoniterResult result;
  result.update_pressures = (1.0 / gamma) * (pinv.entries * r_star.r);
  result.update_pressures.array() -= result.update_pressures(topology.ground_node());
  result.realized.r =
      (incidence.entries * (pinv.entries * r_star.r)).cwiseMax(1e-6);

  result.normalized_loss =
      evaluate_regression_loss(task, topology, result.realized, eval_samples, eval_seed);
  return result;
}

double evaluate_regression_loss(const RegressionTask& task, const NetworkTopology& topology,
                                const ResistanceState& state, int eval_samples,
                                std::uint64_t eval_seed) {
  check_task_shape(task, topology);
  if (eval_samples < 1) throw std::invalid_argument("eval_samples must be positive");
  auto rng = make_rng(eval_seed, kStreamEval);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double total = 0.0;
  Eigen::VectorXd x(topology.n_inputs);
  for (int s = 0; s < eval_samples; ++s) {
    for (int i = 0; i < topology.n_inputs; ++i) x(i) = unit(rng);
    const Eigen::VectorXd desired = desired_output(task, x);
    total += normalized_mse(desired, measure_outputs(topology, state, x));
  }
  return total / static_cast<double>(eval_samples);
}

std::vector<HiddenComparisonRow> hidden_layer_comparison(
    const std::vector<std::pair<std::string, RegressionTask>>& tasks,
    const std::vector<RuleKind>& rules, const TrainerConfig& base) {
  std::vector<HiddenComparisonRow> rows;
  rows.reserve(tasks.size() * rules.size() * 2);
  for (const auto& [task_id, task] : tasks) {
    for (bool hidden : {false, true}) {
      const NetworkTopology topology = build_topology(
          static_cast<int>(task.M.cols()), static_cast<int>(task.M.rows()), hidden);
      for (RuleKind rule : rules) {
        TrainerConfig config = base;
        config.rule = rule;
        config.anneal = rule == RuleKind::CubicDeltaP;
        const TrainingTrace trace = train(task, topology, config);

        const std::size_t window = std::min<std::size_t>(100, trace.records.size());
        const std::size_t start = trace.records.size() - window;
        const double mean = trailing_mean_loss(trace, static_cast<long>(window));
        double var = 0.0;
        for (std::size_t i = start; i < trace.records.size(); ++i) {
          const double d = trace.records[i].loss_norm - mean;
          var += d * d;
        }
        var /= static_cast<double>(window);

        rows.push_back({task_id, hidden, rule, mean, std::sqrt(var)});
      }
    }
  }
  return rows;
}

}  // namespace beastal
