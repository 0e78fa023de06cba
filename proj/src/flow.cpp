#include "beastal/flow.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace beastal {

namespace {

void check_resistances(const NetworkTopology& topology, const ResistanceState& resistances) {
  if (resistances.r.size() != topology.edge_count()) {
    throw std::invalid_argument("resistance vector length " + std::to_string(resistances.r.size()) +
                                " does not match edge count " +
                                std::to_string(topology.edge_count()));
  }
  if ((resistances.r.array() <= 0.0).any()) {
    throw std::invalid_argument("resistances must be strictly positive");
  }
}

void check_inputs(const NetworkTopology& topology, const Eigen::VectorXd& inputs) {
  if (inputs.size() != topology.n_inputs) {
    throw std::invalid_argument("input vector length " + std::to_string(inputs.size()) +
                                " does not match n_inputs " + std::to_string(topology.n_inputs));
  }
}

}  // namespace

BoundaryConditions BoundaryConditions::measurement(const NetworkTopology& topology,
                                                   const Eigen::VectorXd& inputs) {
  check_inputs(topology, inputs);
  BoundaryConditions bc;
  bc.mode = Modality::Measurement;
  bc.fixed.reserve(static_cast<std::size_t>(topology.n_inputs) + 1);
  for (int i = 0; i < topology.n_inputs; ++i) {
    bc.fixed.emplace_back(topology.input_node(i), inputs(i));
  }
  bc.fixed.emplace_back(topology.ground_node(), 0.0);
  return bc;
}

BoundaryConditions BoundaryConditions::update(const NetworkTopology& topology,
                                              const Eigen::VectorXd& update_inputs,
                                              const Eigen::VectorXd& update_outputs) {
  check_inputs(topology, update_inputs);
  if (update_outputs.size() != topology.n_outputs) {
    throw std::invalid_argument("update output vector length does not match n_outputs");
  }
  BoundaryConditions bc;
  bc.mode = Modality::Update;
  bc.fixed.reserve(static_cast<std::size_t>(topology.n_inputs) + topology.n_outputs + 1);
  for (int i = 0; i < topology.n_inputs; ++i) {
    bc.fixed.emplace_back(topology.input_node(i), update_inputs(i));
  }
  for (int o = 0; o < topology.n_outputs; ++o) {
    bc.fixed.emplace_back(topology.output_node(o), update_outputs(o));
  }
  bc.fixed.emplace_back(topology.ground_node(), 0.0);
  return bc;
}

PressureState solve_pressures(const NetworkTopology& topology, const ResistanceState& resistances,
                              const BoundaryConditions& bc) {
  check_resistances(topology, resistances);
  if (bc.fixed.empty()) {
    throw std::invalid_argument("boundary conditions must fix at least one node");
  }

  const int n = topology.node_count();
  std::vector<std::optional<double>> fixed_value(n);
  for (const auto& [node, value] : bc.fixed) {
    if (node < 0 || node >= n) {
      throw std::invalid_argument("boundary condition node " + std::to_string(node) +
                                  " out of range");
    }
    fixed_value[node] = value;
  }

  PressureState state;
  state.p = Eigen::VectorXd::Zero(n);

  std::vector<int> free_index(n, -1);
  std::vector<int> free_nodes;
  for (int v = 0; v < n; ++v) {
    if (fixed_value[v]) {
      state.p(v) = *fixed_value[v];
    } else {
      free_index[v] = static_cast<int>(free_nodes.size());
      free_nodes.push_back(v);
    }
  }
  if (free_nodes.empty()) {
    return state;  // fully constrained, nothing to solve
  }

  // Every free node must reach a fixed node; otherwise the reduced
  // Laplacian is singular. Flood from the fixed set over all edges.
  {
    std::vector<std::vector<int>> adjacency(n);
    for (const auto& e : topology.edges) {
      adjacency[e.tail].push_back(e.head);
      adjacency[e.head].push_back(e.tail);
    }
    std::vector<char> reached(n, 0);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
      if (fixed_value[v]) {
        reached[v] = 1;
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adjacency[v]) {
        if (!reached[w]) {
          reached[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::string orphans;
    for (int v : free_nodes) {
      if (!reached[v]) orphans += (orphans.empty() ? "" : ", ") + std::to_string(v);
    }
    if (!orphans.empty()) {
      throw SolverError("singular reduced system: free nodes {" + orphans +
                        "} have no path to a fixed node");
    }
  }

  const int nf = static_cast<int>(free_nodes.size());
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(nf, nf);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (int r = 0; r < topology.edge_count(); ++r) {
    const double k = 1.0 / resistances.r(r);
    const int a = topology.edges[r].tail;
    const int b = topology.edges[r].head;
    const int fa = free_index[a];
    const int fb = free_index[b];
    if (fa >= 0) laplacian(fa, fa) += k;
    if (fb >= 0) laplacian(fb, fb) += k;
    if (fa >= 0 && fb >= 0) {
      laplacian(fa, fb) -= k;
      laplacian(fb, fa) -= k;
    } else if (fa >= 0) {
      rhs(fa) += k * state.p(b);
    } else if (fb >= 0) {
      rhs(fb) += k * state.p(a);
    }
  }

  Eigen::LDLT<Eigen::MatrixXd> factor(laplacian);
  if (factor.info() != Eigen::Success) {
    throw SolverError("reduced Laplacian factorization failed");
  }
  const Eigen::VectorXd solution = factor.solve(rhs);
  for (int i = 0; i < nf; ++i) {
    state.p(free_nodes[i]) = solution(i);
  }
  return state;
}

Eigen::VectorXd measure_outputs(const NetworkTopology& topology,
                                const ResistanceState& resistances,
                                const Eigen::VectorXd& inputs) {
  if (topology.has_hidden()) {
    const PressureState state = measure_pressures(topology, resistances, inputs);
    Eigen::VectorXd outputs(topology.n_outputs);
    for (int o = 0; o < topology.n_outputs; ++o) {
      outputs(o) = state.p(topology.output_node(o));
    }
    return outputs;
  }

  check_resistances(topology, resistances);
  check_inputs(topology, inputs);
  // Single layer: each output node sees only its own star of edges, so the
  // solved pressure is the conductance-weighted mean of inputs and ground.
  const int n_in = topology.n_inputs;
  Eigen::VectorXd outputs(topology.n_outputs);
  for (int o = 0; o < topology.n_outputs; ++o) {
    double weighted = 0.0;
    double total = 0.0;
    for (int j = 0; j < n_in; ++j) {
      const double k = 1.0 / resistances.r(o * n_in + j);
      weighted += k * inputs(j);
      total += k;
    }
    total += 1.0 / resistances.r(n_in * topology.n_outputs + o);  // ground edge
    outputs(o) = weighted / total;
  }
  return outputs;
}

PressureState measure_pressures(const NetworkTopology& topology,
                                const ResistanceState& resistances,
                                const Eigen::VectorXd& inputs) {
  return solve_pressures(topology, resistances,
                         BoundaryConditions::measurement(topology, inputs));
}

Eigen::VectorXd edge_pressure_drops(const NetworkTopology& topology,
                                    const PressureState& pressures) {
  if (pressures.p.size() != topology.node_count()) {
    throw std::invalid_argument("pressure vector length does not match node count");
  }
  Eigen::VectorXd drops(topology.edge_count());
  for (int r = 0; r < topology.edge_count(); ++r) {
    drops(r) = pressures.p(topology.edges[r].tail) - pressures.p(topology.edges[r].head);
  }
  return drops;
}

double power_dissipation(const Eigen::VectorXd& pressure_drops,
                         const ResistanceState& resistances) {
  if (pressure_drops.size() != resistances.r.size()) {
    throw std::invalid_argument("pressure drop and resistance vectors differ in length");
  }
  return (pressure_drops.array().square() / resistances.r.array()).sum();
}

}  // namespace beastal
