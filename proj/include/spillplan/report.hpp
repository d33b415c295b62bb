#pragma once

#include <ostream>
#include <string>

#include "spillplan/backbone.hpp"
#include "spillplan/scenario.hpp"
#include "spillplan/solver.hpp"
#include "spillplan/trajectory.hpp"

namespace spillplan {

// Aligned plain text, second-period actions as rows, values to 2 decimals,
// `*` for cells that were not evaluated.
std::string render_table(const ReturnTable& t);

// Header of sector ids, one row per period 0..T, barrels.
void write_trace_csv(const Scenario& s, const TrajectoryTrace& trace, std::ostream& out);

// Decision points, admissible actions with arrival periods, pruned actions.
std::string render_backbone(const Scenario& s, const DecisionBackbone& b);

}  // namespace spillplan
