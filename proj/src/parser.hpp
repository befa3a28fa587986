#pragma once

#include <string_view>

#include "ast.hpp"
#include "lexer.hpp"

namespace driftlens {

// Parses one MiniFort compilation unit. Array-element references and
// function calls are both produced as CallFn nodes; sema reclassifies.
SourceUnit parse(std::vector<Token> tokens, std::string path = "");

SourceUnit parse_source(std::string_view text, std::string path = "");

// Convenience: read, tokenize and parse a .mf file.
SourceUnit parse_file(const std::string& path);

}  // namespace driftlens
