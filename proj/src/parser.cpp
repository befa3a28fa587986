#include "parser.hpp"

#include <fstream>
#include <sstream>

namespace driftlens {

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string path)
      : toks_(std::move(tokens)), path_(std::move(path)) {}

  SourceUnit parse_unit() {
    SourceUnit unit;
    unit.path = path_;
    skip_newlines();
    collect_leading_comments();
    while (!at(TokKind::Eof)) {
      unit.items.push_back(parse_subprogram());
      skip_newlines();
      collect_leading_comments();
    }
    unit.trailing_comments = std::move(pending_comments_);
    if (unit.items.empty())
      fail(ErrorKind::Parse, {}, "no PROGRAM, SUBROUTINE or FUNCTION found");
    return unit;
  }

 private:
  std::vector<Token> toks_;
  std::string path_;
  size_t pos_ = 0;
  std::vector<Comment> pending_comments_;

  const Token& cur() const { return toks_[pos_]; }
  bool at(TokKind k) const { return cur().kind == k; }
  bool at_kw(const char* w) const {
    return at(TokKind::Ident) && cur().lower() == w;
  }

  const Token& advance() { return toks_[pos_++]; }

  [[noreturn]] void expected(const std::string& what) {
    fail(ErrorKind::Parse, cur().loc,
         strf("expected %s near '%s'", what.c_str(),
              cur().kind == TokKind::Eof ? "<eof>" : cur().text.c_str()));
  }

  const Token& expect(TokKind k, const char* what) {
    if (!at(k)) expected(what);
    return advance();
  }

  void expect_kw(const char* w) {
    if (!at_kw(w)) expected(strf("'%s'", to_upper(w).c_str()));
    advance();
  }

  void skip_newlines() {
    while (at(TokKind::Newline)) advance();
  }

  // Full-line comments accumulate until claimed by the next construct.
  void collect_leading_comments() {
    for (;;) {
      if (at(TokKind::Newline)) {
        advance();
      } else if (at(TokKind::Comment) && !cur().trailing) {
        pending_comments_.push_back(Comment{cur().text, cur().loc.line});
        advance();
      } else {
        break;
      }
    }
  }

  std::vector<Comment> take_comments() { return std::move(pending_comments_); }

  std::optional<std::string> take_trailing_comment() {
    std::optional<std::string> out;
    if (at(TokKind::Comment) && cur().trailing) {
      out = cur().text;
      advance();
    }
    return out;
  }

  void end_of_statement() {
    if (at(TokKind::Eof)) return;
    expect(TokKind::Newline, "end of statement");
  }

  // -- types ---------------------------------------------------------------

  bool at_type_keyword() const {
    return at_kw("integer") || at_kw("real") || at_kw("logical") ||
           at_kw("character") || at_kw("double");
  }

  Type parse_type() {
    if (at_kw("integer")) { advance(); return {TypeKind::Int}; }
    if (at_kw("real")) { advance(); return {TypeKind::Real4}; }
    if (at_kw("logical")) { advance(); return {TypeKind::Logical}; }
    if (at_kw("double")) {
      advance();
      expect_kw("precision");
      return {TypeKind::Real8};
    }
    if (at_kw("character")) {
      advance();
      Type t{TypeKind::Character, 1};
      if (at(TokKind::LParen)) {
        advance();
        const Token& len = expect(TokKind::IntLit, "character length");
        t.char_len = (int)len.int_value;
        expect(TokKind::RParen, "')'");
      }
      return t;
    }
    expected("type name");
  }

  // -- subprograms ---------------------------------------------------------

  Subprogram parse_subprogram() {
    Subprogram sub;
    sub.leading_comments = take_comments();
    sub.loc = cur().loc;
    if (at_kw("program")) {
      advance();
      sub.kind = SubKind::Program;
      const Token& name = expect(TokKind::Ident, "program name");
      sub.written = name.text;
      sub.name = to_lower(name.text);
    } else if (at_kw("subroutine")) {
      advance();
      sub.kind = SubKind::Subroutine;
      parse_header_name_and_params(sub);
    } else if (at_type_keyword()) {
      sub.result_type = parse_type();
      expect_kw("function");
      sub.kind = SubKind::Function;
      parse_header_name_and_params(sub);
    } else {
      expected("PROGRAM, SUBROUTINE or FUNCTION");
    }
    end_of_statement();

    parse_declarations(sub);
    parse_stmt_list(sub.body, {"end"});
    parse_end_line(sub);
    return sub;
  }

  void parse_header_name_and_params(Subprogram& sub) {
    const Token& name = expect(TokKind::Ident, "subprogram name");
    sub.written = name.text;
    sub.name = to_lower(name.text);
    if (at(TokKind::LParen)) {
      advance();
      if (!at(TokKind::RParen)) {
        for (;;) {
          const Token& p = expect(TokKind::Ident, "parameter name");
          sub.params.push_back(to_lower(p.text));
          if (at(TokKind::Comma)) { advance(); continue; }
          break;
        }
      }
      expect(TokKind::RParen, "')'");
    }
  }

  void parse_end_line(Subprogram& sub) {
    collect_leading_comments();
    // Dangling comments before END become comment statements in the body.
    for (auto& cmt : take_comments()) {
      auto s = std::make_unique<Stmt>();
      s->loc = SourceLoc{cmt.line, 1};
      s->node = CommentStmt{cmt.text};
      sub.body.push_back(std::move(s));
    }
    expect_kw("end");
    if (at(TokKind::Ident)) {
      std::string w = cur().lower();
      if (w == "program" || w == "subroutine" || w == "function") {
        advance();
        if (at(TokKind::Ident)) {
          if (to_lower(cur().text) != sub.name)
            fail(ErrorKind::Parse, cur().loc,
                 strf("END name '%s' does not match '%s'", cur().text.c_str(),
                      sub.written.c_str()));
          advance();
        }
      }
    }
    (void)take_trailing_comment();
    end_of_statement();
  }

  // -- declarations --------------------------------------------------------

  void parse_declarations(Subprogram& sub) {
    for (;;) {
      collect_leading_comments();
      if (!at_type_keyword()) break;
      // Distinguish `INTEGER FUNCTION` headers from decls: inside a unit a
      // type keyword always starts a declaration (no nested subprograms).
      size_t mark = pos_;
      auto comments = take_comments();
      Type type = parse_type();
      bool is_parameter = false;
      Intent intent = Intent::None;
      while (at(TokKind::Comma)) {
        advance();
        if (at_kw("parameter")) {
          advance();
          is_parameter = true;
        } else if (at_kw("intent")) {
          advance();
          expect(TokKind::LParen, "'('");
          if (at_kw("in")) { intent = Intent::In; advance(); }
          else if (at_kw("out")) { intent = Intent::Out; advance(); }
          else if (at_kw("inout")) { intent = Intent::InOut; advance(); }
          else expected("IN, OUT or INOUT");
          expect(TokKind::RParen, "')'");
        } else {
          expected("PARAMETER or INTENT");
        }
      }
      expect(TokKind::DColon, "'::'");
      (void)mark;
      bool first = true;
      for (;;) {
        Decl d;
        d.type = type;
        d.is_parameter = is_parameter;
        d.intent = intent;
        d.loc = cur().loc;
        if (first) {
          d.leading_comments = std::move(comments);
          first = false;
        }
        const Token& nm = expect(TokKind::Ident, "declared name");
        d.written = nm.text;
        d.name = to_lower(nm.text);
        if (at(TokKind::LParen)) {
          advance();
          ArraySpec spec;
          ExprPtr first_bound = parse_expr();
          if (at(TokKind::Colon)) {
            advance();
            spec.lower = std::move(first_bound);
            spec.upper = parse_expr();
          } else {
            spec.upper = std::move(first_bound);
          }
          expect(TokKind::RParen, "')'");
          d.array = std::move(spec);
        }
        if (at(TokKind::Assign)) {
          advance();
          d.init = parse_expr();
        }
        sub.decls.push_back(std::move(d));
        if (at(TokKind::Comma)) { advance(); continue; }
        break;
      }
      sub.decls.back().trailing_comment = take_trailing_comment();
      end_of_statement();
    }
  }

  // -- statements ----------------------------------------------------------

  bool at_terminator(const std::vector<const char*>& enders) {
    if (!at(TokKind::Ident)) return false;
    std::string w = cur().lower();
    for (const char* e : enders) {
      if (w == e) return true;
      // END DO / END IF terminators also begin with plain END.
      if ((std::string(e) == "enddo" || std::string(e) == "endif") && w == "end")
        return true;
      // ELSE / ELSE IF close the current branch of an IF block.
      if (std::string(e) == "endif" && (w == "else" || w == "elseif"))
        return true;
    }
    return false;
  }

  void parse_stmt_list(StmtList& out, const std::vector<const char*>& enders) {
    for (;;) {
      collect_leading_comments();
      // Pending full-line comments become comment statements unless we are
      // about to hit the block terminator (those are handled by the caller).
      if (at_terminator(enders) || at(TokKind::Eof)) {
        for (auto& cmt : pending_comments_) {
          auto s = std::make_unique<Stmt>();
          s->loc = SourceLoc{cmt.line, 1};
          s->node = CommentStmt{cmt.text};
          out.push_back(std::move(s));
        }
        pending_comments_.clear();
        return;
      }
      for (auto& cmt : pending_comments_) {
        auto s = std::make_unique<Stmt>();
        s->loc = SourceLoc{cmt.line, 1};
        s->node = CommentStmt{cmt.text};
        out.push_back(std::move(s));
      }
      pending_comments_.clear();
      out.push_back(parse_stmt());
    }
  }

  StmtPtr parse_stmt() {
    auto s = std::make_unique<Stmt>();
    s->loc = cur().loc;
    if (at_kw("do")) {
      s->node = parse_do();
    } else if (at_kw("if")) {
      s->node = parse_if();
    } else if (at_kw("call")) {
      s->node = parse_call();
    } else if (at_kw("return")) {
      advance();
      s->node = ReturnStmt{};
    } else if (at_kw("print")) {
      s->node = parse_print();
    } else if (at(TokKind::Ident)) {
      s->node = parse_assignment();
    } else {
      expected("statement");
    }
    s->trailing_comment = take_trailing_comment();
    end_of_statement();
    return s;
  }

  AssignStmt parse_assignment() {
    AssignStmt a;
    a.lhs = parse_designator();
    expect(TokKind::Assign, "'='");
    a.rhs = parse_expr();
    return a;
  }

  // Variable or array-element reference on the left-hand side.
  ExprPtr parse_designator() {
    const Token& nm = expect(TokKind::Ident, "variable name");
    auto e = make_var(to_lower(nm.text), nm.text, nm.loc);
    if (at(TokKind::LParen)) {
      advance();
      e->kind = Expr::Kind::ArrayElem;
      e->args.push_back(parse_expr());
      expect(TokKind::RParen, "')'");
    }
    return e;
  }

  DoStmt parse_do() {
    expect_kw("do");
    DoStmt d;
    const Token& v = expect(TokKind::Ident, "loop variable");
    d.var = to_lower(v.text);
    d.var_written = v.text;
    expect(TokKind::Assign, "'='");
    d.from = parse_expr();
    expect(TokKind::Comma, "','");
    d.to = parse_expr();
    if (at(TokKind::Comma)) {
      advance();
      d.step = parse_expr();
    }
    (void)take_trailing_comment();
    end_of_statement();
    parse_stmt_list(d.body, {"enddo"});
    if (at_kw("enddo")) {
      advance();
    } else {
      expect_kw("end");
      expect_kw("do");
    }
    return d;
  }

  IfStmt parse_if() {
    IfStmt f;
    expect_kw("if");
    for (;;) {
      IfBranch br;
      expect(TokKind::LParen, "'('");
      br.cond = parse_expr();
      expect(TokKind::RParen, "')'");
      expect_kw("then");
      (void)take_trailing_comment();
      end_of_statement();
      parse_stmt_list(br.body, {"endif"});
      f.branches.push_back(std::move(br));

      if (at_kw("elseif")) {
        advance();
        continue;
      }
      if (at_kw("else")) {
        advance();
        if (at_kw("if")) {
          advance();
          continue;
        }
        f.has_else = true;
        (void)take_trailing_comment();
        end_of_statement();
        parse_stmt_list(f.else_body, {"endif"});
      }
      break;
    }
    if (at_kw("endif")) {
      advance();
    } else {
      expect_kw("end");
      expect_kw("if");
    }
    return f;
  }

  CallStmt parse_call() {
    expect_kw("call");
    CallStmt c;
    const Token& nm = expect(TokKind::Ident, "subroutine name");
    c.written = nm.text;
    c.name = to_lower(nm.text);
    if (at(TokKind::LParen)) {
      advance();
      if (!at(TokKind::RParen)) {
        for (;;) {
          c.args.push_back(parse_expr());
          if (at(TokKind::Comma)) { advance(); continue; }
          break;
        }
      }
      expect(TokKind::RParen, "')'");
    }
    return c;
  }

  PrintStmt parse_print() {
    expect_kw("print");
    expect(TokKind::Star, "'*'");
    PrintStmt p;
    while (at(TokKind::Comma)) {
      advance();
      p.items.push_back(parse_expr());
    }
    return p;
  }

  // -- expressions ---------------------------------------------------------

  ExprPtr parse_expr() { return parse_or(); }

  // Appends an operand to a flat chain, splicing nested chains of the same
  // operator so parenthesized sub-chains stay flat.
  static void append_operand(Expr& chain, ExprPtr operand) {
    if (operand->kind == Expr::Kind::Nary && operand->nary_op == chain.nary_op) {
      for (auto& a : operand->args) chain.args.push_back(std::move(a));
    } else {
      chain.args.push_back(std::move(operand));
    }
  }

  ExprPtr flat_chain(NaryOp op, ExprPtr first, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Nary;
    e->nary_op = op;
    e->loc = loc;
    append_operand(*e, std::move(first));
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    if (!at(TokKind::Or)) return lhs;
    SourceLoc loc = lhs->loc;
    ExprPtr chain = flat_chain(NaryOp::Or, std::move(lhs), loc);
    while (at(TokKind::Or)) {
      advance();
      append_operand(*chain, parse_and());
    }
    return chain;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    if (!at(TokKind::And)) return lhs;
    SourceLoc loc = lhs->loc;
    ExprPtr chain = flat_chain(NaryOp::And, std::move(lhs), loc);
    while (at(TokKind::And)) {
      advance();
      append_operand(*chain, parse_not());
    }
    return chain;
  }

  ExprPtr parse_not() {
    if (at(TokKind::Not)) {
      SourceLoc loc = cur().loc;
      advance();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Unary;
      e->un_op = UnOp::Not;
      e->loc = loc;
      e->args.push_back(parse_not());
      return e;
    }
    return parse_relational();
  }

  ExprPtr parse_relational() {
    ExprPtr lhs = parse_additive();
    BinOp op;
    switch (cur().kind) {
      case TokKind::Eq: op = BinOp::Eq; break;
      case TokKind::Ne: op = BinOp::Ne; break;
      case TokKind::Lt: op = BinOp::Lt; break;
      case TokKind::Le: op = BinOp::Le; break;
      case TokKind::Gt: op = BinOp::Gt; break;
      case TokKind::Ge: op = BinOp::Ge; break;
      default: return lhs;
    }
    SourceLoc loc = cur().loc;
    advance();
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Binary;
    e->bin_op = op;
    e->loc = loc;
    e->args.push_back(std::move(lhs));
    e->args.push_back(parse_additive());
    return e;
  }

  ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Binary;
    e->bin_op = op;
    e->loc = loc;
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    return e;
  }

  // `+` runs build a flat chain; a `-` folds the chain so far into one
  // operand (binary subtraction) and continues.
  ExprPtr parse_additive() {
    ExprPtr lhs = parse_term();
    while (at(TokKind::Plus) || at(TokKind::Minus)) {
      bool plus = at(TokKind::Plus);
      SourceLoc loc = cur().loc;
      advance();
      ExprPtr rhs = parse_term();
      if (plus) {
        if (lhs->kind == Expr::Kind::Nary && lhs->nary_op == NaryOp::Add) {
          append_operand(*lhs, std::move(rhs));
        } else {
          ExprPtr chain = flat_chain(NaryOp::Add, std::move(lhs), loc);
          append_operand(*chain, std::move(rhs));
          lhs = std::move(chain);
        }
      } else {
        lhs = binary(BinOp::Sub, std::move(lhs), std::move(rhs), loc);
      }
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (at(TokKind::Star) || at(TokKind::Slash)) {
      bool mul = at(TokKind::Star);
      SourceLoc loc = cur().loc;
      advance();
      ExprPtr rhs = parse_unary();
      if (mul) {
        if (lhs->kind == Expr::Kind::Nary && lhs->nary_op == NaryOp::Mul) {
          append_operand(*lhs, std::move(rhs));
        } else {
          ExprPtr chain = flat_chain(NaryOp::Mul, std::move(lhs), loc);
          append_operand(*chain, std::move(rhs));
          lhs = std::move(chain);
        }
      } else {
        lhs = binary(BinOp::Div, std::move(lhs), std::move(rhs), loc);
      }
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(TokKind::Minus)) {
      SourceLoc loc = cur().loc;
      advance();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Unary;
      e->un_op = UnOp::Neg;
      e->loc = loc;
      e->args.push_back(parse_unary());
      return e;
    }
    if (at(TokKind::Plus)) {
      advance();
      return parse_unary();
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (at(TokKind::Pow)) {
      SourceLoc loc = cur().loc;
      advance();
      // Right-associative; exponent may carry its own unary minus.
      return binary(BinOp::Pow, std::move(base), parse_unary(), loc);
    }
    return base;
  }

  ExprPtr parse_primary() {
    const Token& t = cur();
    switch (t.kind) {
      case TokKind::IntLit: {
        advance();
        auto e = make_int_lit(t.int_value, t.loc);
        e->lexeme = t.text;
        return e;
      }
      case TokKind::RealLit: {
        advance();
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::RealLit;
        e->loc = t.loc;
        e->lexeme = t.text;
        if (t.real_is_double) {
          e->type = {TypeKind::Real8};
          e->real_value = t.real_value;
        } else {
          e->type = {TypeKind::Real4};
          e->real_value = (double)(float)t.real_value;
        }
        return e;
      }
      case TokKind::True:
      case TokKind::False: {
        advance();
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::LogicalLit;
        e->loc = t.loc;
        e->logical_value = t.kind == TokKind::True;
        e->type = {TypeKind::Logical};
        return e;
      }
      case TokKind::CharLit: {
        advance();
        return make_char_lit(t.str_value, t.loc);
      }
      case TokKind::LParen: {
        advance();
        ExprPtr inner = parse_expr();
        expect(TokKind::RParen, "')'");
        return inner;
      }
      case TokKind::Ident: {
        advance();
        auto e = make_var(to_lower(t.text), t.text, t.loc);
        if (at(TokKind::LParen)) {
          advance();
          // Array element or function call; sema decides which.
          e->kind = Expr::Kind::CallFn;
          if (!at(TokKind::RParen)) {
            for (;;) {
              e->args.push_back(parse_expr());
              if (at(TokKind::Comma)) { advance(); continue; }
              break;
            }
          }
          expect(TokKind::RParen, "')'");
        }
        return e;
      }
      default:
        expected("expression");
    }
  }
};

}  // namespace

SourceUnit parse(std::vector<Token> tokens, std::string path) {
  Parser p(std::move(tokens), std::move(path));
  return p.parse_unit();
}

SourceUnit parse_source(std::string_view text, std::string path) {
  return parse(tokenize(text), std::move(path));
}

SourceUnit parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, strf("cannot open '%s'", path.c_str()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_source(ss.str(), path);
}

}  // namespace driftlens
