#pragma once

#include "ast.hpp"

namespace driftlens {

// Resolves names, types every expression, classifies assignments, folds
// array bounds, checks intents and PARAMETER constraints, and records the
// unit's read-before-write candidates. Mutates the unit in place.
//
// CallFn nodes whose name resolves to a declared array are reclassified as
// ArrayElem. Integer->real widening at assignment (and at intent-in argument
// association) is made explicit with a Widen node.
void analyze(SourceUnit& unit);

}  // namespace driftlens
