#include "spdsim/sim/enactment.hpp"

#include <vector>

#include "spdsim/runtime/transform.hpp"
#include "spdsim/spd/adjustment.hpp"

namespace spdsim::sim {
namespace {

double expectedNumber(const spd::ExpectedValue& e) {
  if (const auto* p = std::get_if<spd::ExpectedPercentage>(&e)) return p->value;
  if (const auto* t = std::get_if<spd::ExpectedTime>(&e)) return t->seconds;
  return static_cast<double>(std::get<spd::ExpectedCount>(e).value);
}

bool compare(spd::RelationalOperator op, double value, double expected) {
  switch (op) {
    case spd::RelationalOperator::GreaterThan: return value > expected;
    case spd::RelationalOperator::GreaterThanOrEqual: return value >= expected;
    case spd::RelationalOperator::LessThan: return value < expected;
    case spd::RelationalOperator::LessThanOrEqual: return value <= expected;
    case spd::RelationalOperator::EqualTo: return value == expected;
  }
  return false;
}

}  // namespace

bool triggerFires(const spd::ScalingTrigger& trigger, const Monitor& monitor,
                  const std::string& group, int group_size, double now) {
  const spd::Stimulus& st = trigger.stimulus;

  if (const auto* fv = std::get_if<spd::FireOnValue>(&trigger.behavior)) {
    double value;
    if (st.kind == spd::StimulusKind::NumberOfElements) {
      value = static_cast<double>(group_size);
    } else if (st.kind == spd::StimulusKind::SimulationTime) {
      value = now;
    } else {
      StimulusValue a = monitor.aggregate(st, group, now);
      if (!a.defined) return false;
      value = a.value;
    }
    return compare(fv->op, value, expectedNumber(fv->expected));
  }

  const auto& ft = std::get<spd::FireOnTrend>(trigger.behavior);
  double window = st.window_s.value_or(60.0);
  std::vector<double> sequence;
  for (int i = 0; i < ft.window_count; ++i) {
    double end = now - (ft.window_count - 1 - i) * window;
    StimulusValue a = monitor.aggregate(st, group, end);
    if (!a.defined) return false;
    sequence.push_back(a.value);  // oldest first
  }
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    if (ft.trend == spd::TrendPattern::Increasing && !(sequence[i] > sequence[i - 1]))
      return false;
    if (ft.trend == spd::TrendPattern::Decreasing && !(sequence[i] < sequence[i - 1]))
      return false;
  }
  return true;
}

std::optional<std::string> prohibitedBy(const runtime::TargetGroupCfg& group,
                                        const spd::ScalingPolicy& policy,
                                        const spd::TargetGroup& target, double now) {
  auto lastEffective = [&](bool policy_scope) -> std::optional<double> {
    for (auto it = group.history.rbegin(); it != group.history.rend(); ++it) {
      if (policy_scope && it->policy != policy.name) continue;
      if (runtime::isEffective(*it)) return it->time_s;
    }
    return std::nullopt;
  };

  auto check = [&](const spd::Constraint& c) -> std::optional<std::string> {
    if (const auto* cd = std::get_if<spd::CooldownConstraint>(&c.rule)) {
      auto last = lastEffective(c.scope == spd::ConstraintScope::Policy);
      if (last && now - *last < cd->duration_s) return "cooldown";
    } else if (const auto* iv = std::get_if<spd::IntervalConstraint>(&c.rule)) {
      if (now < iv->active_from_s || now > iv->active_until_s) return "interval";
    }
    return std::nullopt;
  };

  for (const auto& c : policy.constraints)
    if (auto r = check(c)) return r;
  for (const auto& c : target.constraints)
    if (auto r = check(c)) return r;
  return std::nullopt;
}

int clampToSizeConstraints(const spd::ScalingPolicy& policy, const spd::TargetGroup& target,
                           int proposed) {
  int value = proposed;
  auto apply = [&](const spd::Constraint& c) {
    if (const auto* sz = std::get_if<spd::SizeConstraint>(&c.rule)) {
      if (value < sz->min_elements) value = sz->min_elements;
      if (value > sz->max_elements) value = sz->max_elements;
    }
  };
  for (const auto& c : policy.constraints) apply(c);
  for (const auto& c : target.constraints) apply(c);
  return value;
}

bool evaluatePolicies(runtime::RuntimeConfiguration& cfg, const Monitor& monitor,
                      double now) {
  bool changed = false;
  for (const auto& policy : cfg.policies->policies) {
    if (!policy.active) continue;
    runtime::TargetGroupCfg* g = cfg.findGroup(policy.target);
    const spd::TargetGroup* tg = cfg.policies->findTargetGroup(policy.target);
    if (!g || !tg) continue;

    int size = g->size();
    if (!triggerFires(policy.trigger, monitor, policy.target, size, now)) continue;

    int raw = spd::applyAdjustment(policy.adjustment, size);
    if (raw == size) {
      // Absolute at its goal proposes nothing; Step/Relative only reach the
      // current size through the max(1, .) floor, which counts as a veto.
      if (!std::holds_alternative<spd::AbsoluteAdjustment>(policy.adjustment))
        g->history.push_back({now, policy.name, size, size, runtime::Vetoed{"size-min"}});
      continue;
    }

    if (auto veto = prohibitedBy(*g, policy, *tg, now)) {
      g->history.push_back({now, policy.name, size, size, runtime::Vetoed{*veto}});
      continue;
    }

    int clamped = clampToSizeConstraints(policy, *tg, raw);
    if (clamped == size) {
      g->history.push_back({now, policy.name, size, size,
                            runtime::Vetoed{raw > size ? "size-max" : "size-min"}});
      continue;
    }

    runtime::EnactmentContext ctx{now, policy.name, clamped != raw, raw};
    if (g->isInfrastructure()) {
      if (clamped > size)
        runtime::scaleOutBottomUp(cfg, policy.target, clamped, ctx);
      else
        runtime::scaleInBottomUp(cfg, policy.target, clamped, ctx);
    } else {
      if (clamped > size)
        runtime::scaleOutTopDown(cfg, policy.target, clamped, ctx);
      else
        runtime::scaleInTopDown(cfg, policy.target, clamped, ctx);
    }
    changed = true;
  }
  return changed;
}

}  // namespace spdsim::sim
