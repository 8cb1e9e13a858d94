#pragma once

#include <vector>

#include "spdsim/arch/model.hpp"
#include "spdsim/diagnostics.hpp"
#include "spdsim/spd/model.hpp"

namespace spdsim::spd {

// Full semantic validation of a policy definition: structural rules
// (references, exclusivity, duplicates), dimensional compatibility of
// triggers, adjustment and constraint ranges, and, when an architecture is
// given, resolution of container/assembly/queue references against it.
// Returns an empty vector for a valid model.
std::vector<Diagnostic> validateSpd(const SpdModel& model,
                                    const arch::ArchitectureModel* architecture = nullptr);

}  // namespace spdsim::spd
