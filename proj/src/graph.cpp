#include "beastal/graph.hpp"

#include <Eigen/SVD>

#include <stdexcept>
#include <string>

namespace beastal {

NodeKind NetworkTopology::kind(int node) const {
  if (node < 0 || node >= node_count()) {
    throw std::out_of_range("node index " + std::to_string(node) + " out of range");
  }
  if (node < n_inputs) return NodeKind::Input;
  if (node < n_inputs + n_hidden) return NodeKind::Hidden;
  if (node < n_inputs + n_hidden + n_outputs) return NodeKind::Output;
  return NodeKind::Ground;
}

NetworkTopology build_topology(int n_inputs, int n_outputs, bool hidden) {
  if (n_inputs < 1 || n_outputs < 1) {
    throw std::invalid_argument("topology needs at least one input and one output node, got " +
                                std::to_string(n_inputs) + "x" + std::to_string(n_outputs));
  }
  NetworkTopology topo;
  topo.n_inputs = n_inputs;
  topo.n_outputs = n_outputs;
  topo.n_hidden = hidden ? std::max(n_inputs, n_outputs) : 0;

  if (!hidden) {
    topo.edges.reserve(static_cast<std::size_t>(n_inputs + 1) * n_outputs);
    for (int o = 0; o < n_outputs; ++o) {
      for (int j = 0; j < n_inputs; ++j) {
        topo.edges.push_back({topo.input_node(j), topo.output_node(o)});
      }
    }
  } else {
    const int n_hid = topo.n_hidden;
    topo.edges.reserve(static_cast<std::size_t>(n_inputs) * n_hid +
                       static_cast<std::size_t>(n_hid) * n_outputs + n_outputs);
    for (int h = 0; h < n_hid; ++h) {
      for (int j = 0; j < n_inputs; ++j) {
        topo.edges.push_back({topo.input_node(j), topo.hidden_node(h)});
      }
    }
    for (int o = 0; o < n_outputs; ++o) {
      for (int h = 0; h < n_hid; ++h) {
        topo.edges.push_back({topo.hidden_node(h), topo.output_node(o)});
      }
    }
  }
  for (int o = 0; o < n_outputs; ++o) {
    topo.edges.push_back({topo.output_node(o), topo.ground_node()});
  }
  return topo;
}

IncidenceMatrix incidence_matrix(const NetworkTopology& topology) {
  IncidenceMatrix inc;
  inc.entries = Eigen::MatrixXd::Zero(topology.edge_count(), topology.node_count());
  for (int r = 0; r < topology.edge_count(); ++r) {
    inc.entries(r, topology.edges[r].tail) = 1.0;
    inc.entries(r, topology.edges[r].head) = -1.0;
  }
  return inc;
}

PseudoInverse pseudo_inverse(const IncidenceMatrix& incidence, double svd_tolerance) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(incidence.entries,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? svd_tolerance * sigma(0) : 0.0;

  Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv_sigma(i) = 1.0 / sigma(i);
  }

  PseudoInverse pinv;
  pinv.svd_tolerance = svd_tolerance;
  pinv.entries = svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
  return pinv;
}

nlohmann::json topology_to_json(const NetworkTopology& topology) {
  nlohmann::json j;
  j["n_inputs"] = topology.n_inputs;
  j["n_hidden"] = topology.n_hidden;
  j["n_outputs"] = topology.n_outputs;
  auto edges = nlohmann::json::array();
  for (const auto& e : topology.edges) {
    edges.push_back({e.tail, e.head});
  }
  j["edges"] = std::move(edges);
  return j;
}

NetworkTopology topology_from_json(const nlohmann::json& j) {
  NetworkTopology topo;
  topo.n_inputs = j.at("n_inputs").get<int>();
  topo.n_hidden = j.at("n_hidden").get<int>();
  topo.n_outputs = j.at("n_outputs").get<int>();
  if (topo.n_inputs < 1 || topo.n_outputs < 1 || topo.n_hidden < 0) {
    throw std::invalid_argument("topology json has invalid layer sizes");
  }
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("topology json edge must be a [tail, head] pair");
    }
    Edge edge{e[0].get<int>(), e[1].get<int>()};
    if (edge.tail < 0 || edge.head < 0 || edge.tail >= topo.node_count() ||
        edge.head >= topo.node_count()) {
      throw std::invalid_argument("topology json edge endpoint out of range");
    }
    topo.edges.push_back(edge);
  }
  return topo;
}

}  // namespace beastal
