#pragma once

#include "ast.hpp"

namespace driftlens {

// Rewrites block-IF conditions so function calls shared by every operand of
// a flat .AND./.OR. chain are computed once, into a fresh local, before the
// IF. This pins the number of traced calls regardless of the evaluation
// order the host environment picks for the condition.
//
// `line` selects the IF statement to rewrite (its header line); pass 0 to
// rewrite every eligible IF in the unit. Returns the number of conditions
// rewritten. Selecting a specific IF whose condition has no common call
// raises NotHoistable; with line == 0, ineligible conditions are skipped.
//
// The unit must be analyzed; it is re-analyzed after the rewrite.
long rewrite_hoist_condition(SourceUnit& unit, int line = 0);

}  // namespace driftlens
