#pragma once

#include <Eigen/Dense>

#include <vector>

#include "beastal/common.hpp"
#include "json.hpp"

namespace beastal {

enum class NodeKind { Input, Hidden, Output, Ground };

/// Directed edge, tail -> head. The direction is only a sign convention for
/// pressure drops (dp = p_tail - p_head); the flow physics is undirected.
struct Edge {
  int tail = 0;
  int head = 0;
};

/// Layered resistor-network topology. Node indices are contiguous, ordered
/// inputs, hidden, outputs, ground; the single ground node is always last.
///
/// Two families are supported:
///  - single layer: inputs fully connected to outputs, outputs to ground,
///    (n_inputs + 1) * n_outputs edges in total;
///  - one hidden layer of max(n_inputs, n_outputs) nodes between inputs and
///    outputs, outputs still connected to ground.
struct NetworkTopology {
  int n_inputs = 0;
  int n_hidden = 0;
  int n_outputs = 0;
  std::vector<Edge> edges;

  int node_count() const { return n_inputs + n_hidden + n_outputs + 1; }
  int edge_count() const { return static_cast<int>(edges.size()); }
  bool has_hidden() const { return n_hidden > 0; }

  int input_node(int i) const { return i; }
  int hidden_node(int h) const { return n_inputs + h; }
  int output_node(int o) const { return n_inputs + n_hidden + o; }
  int ground_node() const { return node_count() - 1; }

  NodeKind kind(int node) const;
};

/// Edge-node incidence map: row r has +1 at edges[r].tail, -1 at
/// edges[r].head. Every row sums to zero.
struct IncidenceMatrix {
  Eigen::MatrixXd entries;  // edge_count x node_count
};

/// Moore-Penrose pseudo-inverse of an incidence matrix.
struct PseudoInverse {
  Eigen::MatrixXd entries;  // node_count x edge_count
  double svd_tolerance = 1e-12;
};

/// Build one of the two supported topologies. Edge order is deterministic:
/// input-output edges in (output-major, input-minor) order followed by
/// output-ground edges in output order; with a hidden layer the blocks are
/// input-hidden, hidden-output (same major/minor pattern), then ground.
/// Throws std::invalid_argument if either dimension is zero.
NetworkTopology build_topology(int n_inputs, int n_outputs, bool hidden = false);

IncidenceMatrix incidence_matrix(const NetworkTopology& topology);

/// SVD-based pseudo-inverse. Singular values below svd_tolerance times the
/// largest one are treated as exact zeros; for connected incidence matrices
/// that removes precisely the constant-pressure null space.
PseudoInverse pseudo_inverse(const IncidenceMatrix& incidence, double svd_tolerance = 1e-12);

nlohmann::json topology_to_json(const NetworkTopology& topology);
NetworkTopology topology_from_json(const nlohmann::json& j);

}  // namespace beastal
