#include "printer.hpp"

#include <sstream>

namespace driftlens {

namespace {

int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Nary:
      switch (e.nary_op) {
        case NaryOp::Or: return 1;
        case NaryOp::And: return 2;
        case NaryOp::Add: return 5;
        case NaryOp::Mul: return 6;
      }
      return 8;
    case Expr::Kind::Unary:
      return e.un_op == UnOp::Not ? 3 : 5;
    case Expr::Kind::Binary:
      switch (e.bin_op) {
        case BinOp::Sub: return 5;
        case BinOp::Div: return 6;
        case BinOp::Pow: return 7;
        default: return 4;  // relational
      }
    case Expr::Kind::Widen:
      return 8;  // transparent
    default:
      return 9;
  }
}

const char* bin_op_text(BinOp op) {
  switch (op) {
    case BinOp::Sub: return "-";
    case BinOp::Div: return "/";
    case BinOp::Pow: return "**";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "/=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
  }
  return "?";
}

const char* nary_op_text(NaryOp op) {
  switch (op) {
    case NaryOp::Add: return "+";
    case NaryOp::Mul: return "*";
    case NaryOp::And: return ".AND.";
    case NaryOp::Or: return ".OR.";
  }
  return "?";
}

std::string quote_char(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  out.push_back('\'');
  return out;
}

std::string real_lit_text(const Expr& e) {
  if (!e.lexeme.empty()) return e.lexeme;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", e.real_value);
  std::string s = buf;
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find('E') == std::string::npos)
    s += ".0";
  if (e.type.kind == TypeKind::Real8) {
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos)
      s[epos] = 'D';
    else
      s += "D0";
  }
  return s;
}

void print_expr(std::ostream& os, const Expr& e, bool spaced);

void print_child(std::ostream& os, const Expr& child, int parent_prec,
                 bool parens_on_equal, bool spaced) {
  int p = prec(child);
  bool need = p < parent_prec || (parens_on_equal && p == parent_prec);
  if (need) os << '(';
  print_expr(os, child, spaced);
  if (need) os << ')';
}

void print_expr(std::ostream& os, const Expr& e, bool spaced) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      os << (e.lexeme.empty() ? std::to_string(e.int_value) : e.lexeme);
      break;
    case Expr::Kind::RealLit:
      os << real_lit_text(e);
      break;
    case Expr::Kind::LogicalLit:
      os << (e.logical_value ? ".TRUE." : ".FALSE.");
      break;
    case Expr::Kind::CharLit:
      os << quote_char(e.char_value);
      break;
    case Expr::Kind::Var:
      os << (e.written.empty() ? e.name : e.written);
      break;
    case Expr::Kind::ArrayElem:
    case Expr::Kind::CallFn: {
      os << (e.written.empty() ? e.name : e.written) << '(';
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ',';
        print_expr(os, *e.args[i], false);
      }
      os << ')';
      break;
    }
    case Expr::Kind::Unary: {
      os << (e.un_op == UnOp::Not ? ".NOT." : "-");
      if (e.un_op == UnOp::Not && spaced) os << ' ';
      print_child(os, *e.args[0], e.un_op == UnOp::Not ? 3 : 7, false, spaced);
      break;
    }
    case Expr::Kind::Binary: {
      int p = prec(e);
      print_child(os, *e.args[0], p, e.bin_op == BinOp::Pow, spaced);
      if (spaced)
        os << ' ' << bin_op_text(e.bin_op) << ' ';
      else
        os << bin_op_text(e.bin_op);
      print_child(os, *e.args[1], p, e.bin_op != BinOp::Pow, spaced);
      break;
    }
    case Expr::Kind::Nary: {
      int p = prec(e);
      const char* op = nary_op_text(e.nary_op);
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) {
          if (spaced || e.nary_op == NaryOp::And || e.nary_op == NaryOp::Or)
            os << ' ' << op << ' ';
          else
            os << op;
        }
        print_child(os, *e.args[i], p, true, spaced);
      }
      break;
    }
    case Expr::Kind::Widen:
      print_expr(os, *e.args[0], spaced);
      break;
  }
}

struct Emitter {
  std::ostringstream os;

  void indent(int n) {
    for (int i = 0; i < n; ++i) os << "  ";
  }

  void comment_line(const Comment& c, int level) {
    indent(level);
    os << '!' << c.text << '\n';
  }

  void trailing(const std::optional<std::string>& c) {
    if (c) os << "  !" << *c;
    os << '\n';
  }

  std::string type_text(const Type& t) {
    if (t.kind == TypeKind::Character)
      return strf("CHARACTER(%d)", t.char_len);
    return type_name(t.kind);
  }

  void decl_line(const Decl& d, int level) {
    for (const auto& c : d.leading_comments) comment_line(c, level);
    indent(level);
    os << type_text(d.type);
    if (d.is_parameter) os << ", PARAMETER";
    switch (d.intent) {
      case Intent::In: os << ", INTENT(IN)"; break;
      case Intent::Out: os << ", INTENT(OUT)"; break;
      case Intent::InOut: os << ", INTENT(INOUT)"; break;
      case Intent::None: break;
    }
    os << " :: " << d.written;
    if (d.array) {
      os << '(';
      if (d.array->lower) {
        print_expr(os, *d.array->lower, false);
        os << ':';
      }
      print_expr(os, *d.array->upper, false);
      os << ')';
    }
    if (d.init) {
      os << " = ";
      print_expr(os, *d.init, true);
    }
    trailing(d.trailing_comment);
  }

  void stmt_line(const Stmt& s, int level) {
    if (const auto* c = s.as<CommentStmt>()) {
      indent(level);
      os << '!' << c->text << '\n';
      return;
    }
    indent(level);
    if (const auto* a = s.as<AssignStmt>()) {
      print_expr(os, *a->lhs, true);
      os << " = ";
      print_expr(os, *a->rhs, true);
      trailing(s.trailing_comment);
    } else if (const auto* d = s.as<DoStmt>()) {
      os << "DO " << d->var_written << " = ";
      print_expr(os, *d->from, true);
      os << ", ";
      print_expr(os, *d->to, true);
      if (d->step) {
        os << ", ";
        print_expr(os, *d->step, true);
      }
      os << '\n';
      for (const auto& b : d->body) stmt_line(*b, level + 1);
      indent(level);
      os << "END DO";
      trailing(s.trailing_comment);
    } else if (const auto* f = s.as<IfStmt>()) {
      for (size_t i = 0; i < f->branches.size(); ++i) {
        if (i) indent(level);
        os << (i == 0 ? "IF (" : "ELSE IF (");
        print_expr(os, *f->branches[i].cond, true);
        os << ") THEN\n";
        for (const auto& b : f->branches[i].body) stmt_line(*b, level + 1);
      }
      if (f->has_else) {
        indent(level);
        os << "ELSE\n";
        for (const auto& b : f->else_body) stmt_line(*b, level + 1);
      }
      indent(level);
      os << "END IF";
      trailing(s.trailing_comment);
    } else if (const auto* c = s.as<CallStmt>()) {
      os << "CALL " << (c->written.empty() ? c->name : c->written);
      os << '(';
      for (size_t i = 0; i < c->args.size(); ++i) {
        if (i) os << ',';
        print_expr(os, *c->args[i], false);
      }
      os << ')';
      trailing(s.trailing_comment);
    } else if (s.as<ReturnStmt>()) {
      os << "RETURN";
      trailing(s.trailing_comment);
    } else if (const auto* p = s.as<PrintStmt>()) {
      os << "PRINT *";
      for (const auto& it : p->items) {
        os << ", ";
        print_expr(os, *it, true);
      }
      trailing(s.trailing_comment);
    }
  }

  void subprogram(const Subprogram& sub) {
    for (const auto& c : sub.leading_comments) comment_line(c, 0);
    const char* kw = sub.kind == SubKind::Program ? "PROGRAM"
                     : sub.kind == SubKind::Subroutine ? "SUBROUTINE"
                                                       : "FUNCTION";
    if (sub.kind == SubKind::Function) os << type_text(sub.result_type) << ' ';
    os << kw << ' ' << sub.written;
    if (sub.kind != SubKind::Program) {
      os << '(';
      for (size_t i = 0; i < sub.params.size(); ++i) {
        if (i) os << ", ";
        const Decl* d = sub.find_decl(sub.params[i]);
        os << (d ? d->written : sub.params[i]);
      }
      os << ')';
    }
    os << '\n';
    for (const auto& d : sub.decls) decl_line(d, 1);
    for (const auto& st : sub.body) stmt_line(*st, 1);
    os << "END " << kw << ' ' << sub.written << '\n';
  }
};

}  // namespace

std::string emit_source(const SourceUnit& unit) {
  Emitter em;
  for (size_t i = 0; i < unit.items.size(); ++i) {
    if (i) em.os << '\n';
    em.subprogram(unit.items[i]);
  }
  for (const auto& c : unit.trailing_comments) em.comment_line(c, 0);
  return em.os.str();
}

std::string compact_expr(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, false);
  return os.str();
}

std::string emit_expr(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, true);
  return os.str();
}

}  // namespace driftlens
