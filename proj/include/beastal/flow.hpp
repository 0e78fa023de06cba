#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "beastal/graph.hpp"

namespace beastal {

/// Per-edge resistances, aligned with NetworkTopology::edges. Entries must
/// stay strictly positive for the flow problem to be well posed.
struct ResistanceState {
  Eigen::VectorXd r;
};

enum class Modality { Measurement, Update };

/// Dirichlet boundary: pressures pinned at a subset of nodes. Ground is
/// always pinned at zero. Measurement pins inputs only; Update pins inputs
/// and outputs.
struct BoundaryConditions {
  Modality mode = Modality::Measurement;
  std::vector<std::pair<int, double>> fixed;

  static BoundaryConditions measurement(const NetworkTopology& topology,
                                        const Eigen::VectorXd& inputs);
  static BoundaryConditions update(const NetworkTopology& topology,
                                   const Eigen::VectorXd& update_inputs,
                                   const Eigen::VectorXd& update_outputs);
};

struct PressureState {
  Eigen::VectorXd p;  // one entry per node
};

/// Steady-state node pressures minimizing total dissipated power under the
/// given boundary. Free-node pressures satisfy net-zero flow; the reduced
/// Laplacian system is solved with a dense Cholesky-type factorization.
/// Throws SolverError naming the offending nodes if some free node has no
/// path to a fixed one. Fully constrained systems skip the solve.
PressureState solve_pressures(const NetworkTopology& topology, const ResistanceState& resistances,
                              const BoundaryConditions& bc);

/// Measurement-modality outputs for imposed input pressures. Single-layer
/// networks use the per-output conductance-ratio closed form; hidden-layer
/// networks fall back to the full pressure solve.
Eigen::VectorXd measure_outputs(const NetworkTopology& topology,
                                const ResistanceState& resistances, const Eigen::VectorXd& inputs);

/// Full node-pressure state in Measurement modality.
PressureState measure_pressures(const NetworkTopology& topology,
                                const ResistanceState& resistances, const Eigen::VectorXd& inputs);

/// dp[r] = p(tail) - p(head), identical to incidence_matrix(topology) * p.
Eigen::VectorXd edge_pressure_drops(const NetworkTopology& topology, const PressureState& pressures);

/// Total dissipated power, sum of dp^2 / R over edges.
double power_dissipation(const Eigen::VectorXd& pressure_drops, const ResistanceState& resistances);

}  // namespace beastal
