#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdsim/diagnostics.hpp"
#include "spdsim/spd/model.hpp"

namespace spdsim::spd {

struct ParseResult {
  std::optional<SpdModel> model;  // present only when no Error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

// Parses policy-definition text. Target-tracking policy pairs are expanded
// into their scale-out/scale-in policies here, so the returned model contains
// plain policies only. Internal references (policy targets, hosting
// infrastructures) must resolve and the infrastructure/service target
// exclusivity must hold for the model to be returned; dimensional and range
// rules are left to validateSpd.
ParseResult parseSpd(std::string_view source, const std::string& file = "");

}  // namespace spdsim::spd
