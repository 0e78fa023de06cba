#include "beastal/rules.hpp"

#include <cmath>
#include <stdexcept>

namespace beastal {

std::string_view rule_name(RuleKind rule) {
  switch (rule) {
    case RuleKind::LinearDeltaP: return "linear";
    case RuleKind::CubicDeltaP: return "cubic";
    case RuleKind::FlowDriven: return "flow";
    case RuleKind::PowerDriven: return "power";
    case RuleKind::Instantaneous: return "instantaneous";
  }
  throw std::logic_error("unknown rule kind");
}

std::optional<RuleKind> parse_rule(std::string_view name) {
  for (RuleKind rule : all_rules()) {
    if (rule_name(rule) == name) return rule;
  }
  return std::nullopt;
}

const std::vector<RuleKind>& all_rules() {
  static const std::vector<RuleKind> rules = {
      RuleKind::LinearDeltaP, RuleKind::CubicDeltaP, RuleKind::FlowDriven,
      RuleKind::PowerDriven, RuleKind::Instantaneous};
  return rules;
}

RuleResult apply_rule(const ResistanceState& resistances, const Eigen::VectorXd& update_drops,
                      RuleKind rule, const RuleParams& params) {
  if (update_drops.size() != resistances.r.size()) {
    throw std::invalid_argument("pressure drop and resistance vectors differ in length");
  }
  if (params.r_min <= 0.0) {
    throw std::invalid_argument("r_min must be positive");
  }
  if (!update_drops.allFinite()) {
    throw std::runtime_error("non-finite Update pressure drop; upstream solve failed");
  }

  const auto& r = resistances.r.array();
  const auto& dp = update_drops.array();
  Eigen::ArrayXd next;
  switch (rule) {
    case RuleKind::LinearDeltaP:
      next = r + params.gamma * dp;
      break;
    case RuleKind::CubicDeltaP:
      next = r + params.gamma * dp.cube();
      break;
    case RuleKind::FlowDriven:
      next = r + params.gamma * dp / r;
      break;
    case RuleKind::PowerDriven:
      next = r + params.gamma * dp.square() / r;
      break;
    case RuleKind::Instantaneous:
      next = params.gamma * dp;
      break;
  }

  RuleResult result;
  result.clamp_events = static_cast<int>((next < params.r_min).count());
  result.state.r = next.max(params.r_min).matrix();
  return result;
}

}  // namespace beastal
