#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "diag.hpp"

namespace driftlens {

enum class TokKind {
  Ident,
  IntLit,
  RealLit,   // value in `real_value`, kind r8 when the exponent letter is D
  CharLit,
  // punctuation / operators
  Assign,      // =
  Plus, Minus, Star, Slash, Pow,          // + - * / **
  LParen, RParen, Comma, Colon, DColon,   // ( ) , : ::
  Eq, Ne, Lt, Le, Gt, Ge,                 // == /= < <= > >=
  And, Or, Not, True, False,              // .AND. .OR. .NOT. .TRUE. .FALSE.
  Newline,
  Comment,   // trivia; text without '!'
  Eof,
};

struct Token {
  TokKind kind;
  SourceLoc loc;
  std::string text;        // identifier as written / literal lexeme / comment text
  long long int_value = 0;
  double real_value = 0.0;
  bool real_is_double = false;
  std::string str_value;   // CharLit decoded value
  // Comment trivia: true when code precedes the '!' on the same line.
  bool trailing = false;

  std::string lower() const;
};

// Tokenizes MiniFort free-form source. Keywords are not distinguished here;
// the parser matches identifiers case-insensitively. '&' at end of line joins
// the next line. Comments are emitted as trivia tokens.
std::vector<Token> tokenize(std::string_view text);

}  // namespace driftlens
