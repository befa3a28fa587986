#include "lexer.hpp"

#include <cctype>
#include <cstdlib>

#include "ast.hpp"

namespace driftlens {

std::string Token::lower() const { return to_lower(text); }

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek(size_t ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
};

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_'; }

// Dotted keyword operators: .AND. .OR. .NOT. .TRUE. .FALSE.
bool match_dotted(Cursor& c, const char* word, size_t len) {
  if (c.peek() != '.') return false;
  for (size_t i = 0; i < len; ++i) {
    char have = c.peek(1 + i);
    if (std::toupper((unsigned char)have) != word[i]) return false;
  }
  if (c.peek(1 + len) != '.') return false;
  for (size_t i = 0; i < len + 2; ++i) c.advance();
  return true;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  Cursor c{text};
  bool code_on_line = false;

  auto push = [&](TokKind k, SourceLoc loc, std::string tok_text = "") {
    Token t;
    t.kind = k;
    t.loc = loc;
    t.text = std::move(tok_text);
    out.push_back(std::move(t));
  };

  while (!c.eof()) {
    SourceLoc loc{c.line, c.col};
    char ch = c.peek();

    if (ch == '\n') {
      c.advance();
      if (code_on_line) push(TokKind::Newline, loc);
      code_on_line = false;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      c.advance();
      continue;
    }
    if (ch == '!') {
      c.advance();
      std::string body;
      while (!c.eof() && c.peek() != '\n') body.push_back(c.advance());
      Token t;
      t.kind = TokKind::Comment;
      t.loc = loc;
      t.text = std::move(body);
      t.trailing = code_on_line;
      out.push_back(std::move(t));
      continue;
    }
    if (ch == '&') {
      // Continuation: swallow '&', optional spaces/comment, and the newline.
      c.advance();
      while (!c.eof() && (c.peek() == ' ' || c.peek() == '\t' || c.peek() == '\r'))
        c.advance();
      if (!c.eof() && c.peek() == '\n') c.advance();
      continue;
    }

    code_on_line = true;

    if (ident_start(ch)) {
      std::string word;
      while (!c.eof() && ident_char(c.peek())) word.push_back(c.advance());
      Token t;
      t.kind = TokKind::Ident;
      t.loc = loc;
      t.text = std::move(word);
      out.push_back(std::move(t));
      continue;
    }

    if (std::isdigit((unsigned char)ch) ||
        (ch == '.' && std::isdigit((unsigned char)c.peek(1)))) {
      std::string num;
      bool is_real = false;
      bool is_double = false;
      while (std::isdigit((unsigned char)c.peek())) num.push_back(c.advance());
      // A '.' followed by a letter belongs to a dotted operator (`1 .AND.`
      // is not valid anyway); only digit '.' [digit] forms a real literal.
      if (c.peek() == '.' &&
          (std::isdigit((unsigned char)c.peek(1)) || !ident_start(c.peek(1)))) {
        is_real = true;
        num.push_back(c.advance());
        while (std::isdigit((unsigned char)c.peek())) num.push_back(c.advance());
      }
      char e = c.peek();
      if (e == 'e' || e == 'E' || e == 'd' || e == 'D') {
        char sign = c.peek(1);
        char digit = (sign == '+' || sign == '-') ? c.peek(2) : c.peek(1);
        if (std::isdigit((unsigned char)digit)) {
          is_real = true;
          if (e == 'd' || e == 'D') is_double = true;
          num.push_back(c.advance());
          if (c.peek() == '+' || c.peek() == '-') num.push_back(c.advance());
          while (std::isdigit((unsigned char)c.peek())) num.push_back(c.advance());
        }
      }
      Token t;
      t.loc = loc;
      t.text = num;
      if (is_real) {
        t.kind = TokKind::RealLit;
        std::string norm = num;
        for (auto& nc : norm)
          if (nc == 'd' || nc == 'D') nc = 'E';
        t.real_value = std::strtod(norm.c_str(), nullptr);
        t.real_is_double = is_double;
      } else {
        t.kind = TokKind::IntLit;
        t.int_value = std::strtoll(num.c_str(), nullptr, 10);
      }
      out.push_back(std::move(t));
      continue;
    }

    if (ch == '\'') {
      c.advance();
      std::string val;
      for (;;) {
        if (c.eof() || c.peek() == '\n')
          fail(ErrorKind::Lex, loc, "unterminated character literal");
        char q = c.advance();
        if (q == '\'') {
          if (c.peek() == '\'') {
            val.push_back('\'');
            c.advance();
          } else {
            break;
          }
        } else {
          val.push_back(q);
        }
      }
      Token t;
      t.kind = TokKind::CharLit;
      t.loc = loc;
      t.str_value = std::move(val);
      out.push_back(std::move(t));
      continue;
    }

    if (ch == '.') {
      if (match_dotted(c, "AND", 3)) { push(TokKind::And, loc); continue; }
      if (match_dotted(c, "OR", 2)) { push(TokKind::Or, loc); continue; }
      if (match_dotted(c, "NOT", 3)) { push(TokKind::Not, loc); continue; }
      if (match_dotted(c, "TRUE", 4)) { push(TokKind::True, loc); continue; }
      if (match_dotted(c, "FALSE", 5)) { push(TokKind::False, loc); continue; }
      fail(ErrorKind::Lex, loc, "unrecognized '.' sequence");
    }

    switch (ch) {
      case '=':
        c.advance();
        if (c.peek() == '=') { c.advance(); push(TokKind::Eq, loc); }
        else push(TokKind::Assign, loc);
        continue;
      case '+': c.advance(); push(TokKind::Plus, loc); continue;
      case '-': c.advance(); push(TokKind::Minus, loc); continue;
      case '*':
        c.advance();
        if (c.peek() == '*') { c.advance(); push(TokKind::Pow, loc); }
        else push(TokKind::Star, loc);
        continue;
      case '/':
        c.advance();
        if (c.peek() == '=') { c.advance(); push(TokKind::Ne, loc); }
        else push(TokKind::Slash, loc);
        continue;
      case '(': c.advance(); push(TokKind::LParen, loc); continue;
      case ')': c.advance(); push(TokKind::RParen, loc); continue;
      case ',': c.advance(); push(TokKind::Comma, loc); continue;
      case ':':
        c.advance();
        if (c.peek() == ':') { c.advance(); push(TokKind::DColon, loc); }
        else push(TokKind::Colon, loc);
        continue;
      case '<':
        c.advance();
        if (c.peek() == '=') { c.advance(); push(TokKind::Le, loc); }
        else push(TokKind::Lt, loc);
        continue;
      case '>':
        c.advance();
        if (c.peek() == '=') { c.advance(); push(TokKind::Ge, loc); }
        else push(TokKind::Gt, loc);
        continue;
      default:
        fail(ErrorKind::Lex, loc,
             strf("character '%c' is not in the MiniFort alphabet", ch));
    }
  }

  if (code_on_line) push(TokKind::Newline, SourceLoc{c.line, c.col});
  push(TokKind::Eof, SourceLoc{c.line, c.col});
  return out;
}

}  // namespace driftlens
