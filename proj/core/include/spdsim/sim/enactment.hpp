#pragma once

// Policy evaluation. At each evaluation instant every active policy is
// checked in declaration order: observe the stimulus, test the trigger,
// compute the adjusted size, let constraints veto or clamp it, then hand the
// change to the matching transformation.
//
// A proposal identical to the current size that no constraint touched is
// dropped silently. A vetoed or clamped-to-current proposal leaves a record
// in the target group's history. Cooldowns count from the last record that
// changed the configuration.

#include <optional>
#include <string>

#include "spdsim/runtime/config.hpp"
#include "spdsim/sim/monitor.hpp"

namespace spdsim::sim {

// True when the trigger fires at `now`. Undefined stimuli never fire.
bool triggerFires(const spd::ScalingTrigger& trigger, const Monitor& monitor,
                  const std::string& group, int group_size, double now);

// Veto reason ("cooldown", "interval") from the prohibiting constraints of
// the policy and its target group, or nullopt when enactment may proceed.
std::optional<std::string> prohibitedBy(const runtime::TargetGroupCfg& group,
                                        const spd::ScalingPolicy& policy,
                                        const spd::TargetGroup& target, double now);

// Proposed size after the size constraints of the policy and its target.
int clampToSizeConstraints(const spd::ScalingPolicy& policy, const spd::TargetGroup& target,
                           int proposed);

// Evaluates all active policies once. Returns true when the configuration
// changed.
bool evaluatePolicies(runtime::RuntimeConfiguration& cfg, const Monitor& monitor,
                      double now);

}  // namespace spdsim::sim
