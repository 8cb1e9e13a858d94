#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdsim/arch/model.hpp"
#include "spdsim/diagnostics.hpp"

namespace spdsim::arch {

struct LoadResult {
  std::optional<ArchitectureModel> model;  // present only when no Error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

// Parses architecture text and validates it; the model is returned only when
// both passes are clean.
LoadResult loadArchitecture(std::string_view source, const std::string& file = "");

}  // namespace spdsim::arch
