#pragma once

#include <string>

#include "ast.hpp"

namespace driftlens {

// Canonical source emission: keywords upper-case, identifiers as written,
// one declaration per line, two-space indents. emit(parse(emit(x))) == emit(x).
std::string emit_source(const SourceUnit& unit);

// Expression rendered with no spaces, as used for trace descriptors,
// e.g. `sigmaf(k-1)`.
std::string compact_expr(const Expr& e);

// Expression rendered in canonical (spaced) style.
std::string emit_expr(const Expr& e);

}  // namespace driftlens
