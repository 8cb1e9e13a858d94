#pragma once

#include <vector>

#include "spdsim/arch/model.hpp"
#include "spdsim/diagnostics.hpp"

namespace spdsim::arch {

// Semantic checks: name resolution and uniqueness, branch and scenario
// probabilities summing to one, total allocation, positive container rates,
// well-formed stochastic expressions, unambiguous call wiring and queue
// handlers, and absence of synchronous call cycles. Returns an empty vector
// for a valid model.
std::vector<Diagnostic> validateArchitecture(const ArchitectureModel& model);

}  // namespace spdsim::arch
