#pragma once

#include "spdsim/spd/model.hpp"

namespace spdsim::spd {

// Computes the size an adjustment proposes for a group of current_size
// elements. Results never fall below 1. Malformed adjustments (absolute goal
// < 1, zero step, relative percentage/minimum of mixed sign or zero) and
// current_size < 1 throw Error{"ADJUSTMENT_INVALID"}.
int applyAdjustment(const AdjustmentType& adjustment, int current_size);

}  // namespace spdsim::spd
