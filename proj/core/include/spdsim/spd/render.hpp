#pragma once

#include <string>

#include "spdsim/spd/model.hpp"

namespace spdsim::spd {

// Emits the canonical text form. parseSpd(renderSpd(m)) reproduces m up to
// source positions.
std::string renderSpd(const SpdModel& model);

// Emits the policy notation as a Graphviz digraph: policies as boxes, targets
// as dashed circles, triggers as squares, adjustments as triangles,
// constraints as octagons, one edge per policy/target relation, containment
// as clusters. Node ids follow declaration order (t<i>, p<i>, tr<i>, adj<i>,
// c<i>) so output is stable for identical models.
std::string exportNotationDot(const SpdModel& model);

}  // namespace spdsim::spd
