#pragma once

#include <string>
#include <vector>

#include "core/model.hpp"

namespace pdmpstop {

// Static SVG of X(t) against t: one path per trajectory following the flow
// between jumps (sampled along each segment), with a move break and a marker
// at every jump. Output is fully deterministic.
std::string trajectories_to_svg(const PdmpModel& model, const std::vector<Trajectory>& trajs);

}  // namespace pdmpstop
