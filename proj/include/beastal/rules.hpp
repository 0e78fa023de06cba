#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

#include "beastal/flow.hpp"

namespace beastal {

/// Local resistance-evolution laws, each modelling a different physical
/// material responding to its own Update-modality edge quantities.
enum class RuleKind {
  LinearDeltaP,   // R' = R + gamma * dp
  CubicDeltaP,    // R' = R + gamma * dp^3
  FlowDriven,     // R' = R + gamma * dp / R
  PowerDriven,    // R' = R + gamma * dp^2 / R
  Instantaneous,  // R' = gamma * dp
};

std::string_view rule_name(RuleKind rule);
std::optional<RuleKind> parse_rule(std::string_view name);
const std::vector<RuleKind>& all_rules();

struct RuleParams {
  double gamma = 1.0;
  double r_min = 1e-6;  // positivity clamp floor
};

struct RuleResult {
  ResistanceState state;
  int clamp_events = 0;
};

/// One forward-Euler application of the rule to every edge, followed by an
/// elementwise clamp at r_min. Flow and power forcings are evaluated with
/// the pre-update resistance. Throws if any pressure drop is non-finite.
RuleResult apply_rule(const ResistanceState& resistances, const Eigen::VectorXd& update_drops,
                      RuleKind rule, const RuleParams& params);

}  // namespace beastal
