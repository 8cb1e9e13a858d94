#pragma once

// Architecture transformations. identifyInitialConfiguration derives the
// size-one runtime configuration from the declared models; the scale
// operations enact a size change on one target group and propagate it:
//
//   bottom-up  infrastructure scales, every hosted group follows
//   top-down   one service group scales, infrastructure follows if needed
//
// Containers and replicas are removed newest first. The original container
// is never released, nor is one still hosting replicas or rigid assemblies.

#include <string>
#include <vector>

#include "spdsim/runtime/config.hpp"

namespace spdsim::runtime {

struct EnactmentContext {
  double time_s = 0;
  std::string policy;
  // Set when a size constraint altered the raw adjustment; recorded as
  // Clamped{raw, target} instead of Applied.
  bool clamped = false;
  int raw_size = 0;
};

struct SizeChange {
  std::string group;
  int before = 0;
  int after = 0;
};

struct TransformationReport {
  std::vector<SizeChange> changes;  // target group first
};

// Builds the initial configuration: one container per infrastructure group,
// one replica per service or consumer group, one instance of everything
// declared outside the groups. Throws Error("CONFIG_ERROR") when the policy
// model does not fit the architecture.
RuntimeConfiguration identifyInitialConfiguration(const arch::ArchitectureModel& arch,
                                                  const spd::SpdModel& spd,
                                                  int max_replicas_per_container = 1);

// All four require target_size >= 1 and append one enactment record to the
// target group's history. target_size on the wrong side of the current size
// is a programming error.
TransformationReport scaleOutBottomUp(RuntimeConfiguration& cfg, const std::string& group,
                                      int target_size, const EnactmentContext& ctx);
TransformationReport scaleInBottomUp(RuntimeConfiguration& cfg, const std::string& group,
                                     int target_size, const EnactmentContext& ctx);
TransformationReport scaleOutTopDown(RuntimeConfiguration& cfg, const std::string& group,
                                     int target_size, const EnactmentContext& ctx);
TransformationReport scaleInTopDown(RuntimeConfiguration& cfg, const std::string& group,
                                    int target_size, const EnactmentContext& ctx);

}  // namespace spdsim::runtime
