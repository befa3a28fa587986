#include "ast.hpp"

#include <algorithm>
#include <cctype>

namespace driftlens {

const char* type_name(TypeKind k) {
  switch (k) {
    case TypeKind::Int: return "INTEGER";
    case TypeKind::Real4: return "REAL";
    case TypeKind::Real8: return "DOUBLE PRECISION";
    case TypeKind::Logical: return "LOGICAL";
    case TypeKind::Character: return "CHARACTER";
    default: return "UNKNOWN";
  }
}

const char* typecode_for(TypeKind k) {
  switch (k) {
    case TypeKind::Int: return "i4";
    case TypeKind::Real4: return "r4";
    case TypeKind::Real8: return "r8";
    case TypeKind::Logical: return "l4";
    case TypeKind::Character: return "ch";
    default: return "??";
  }
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Lex: return "lex error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Semantic: return "semantic error";
    case ErrorKind::Format: return "format error";
    case ErrorKind::UnsupportedVersion: return "unsupported version";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Runtime: return "runtime fault";
    case ErrorKind::AlreadyInstrumented: return "already instrumented";
    case ErrorKind::NotHoistable: return "not hoistable";
    case ErrorKind::UnknownSite: return "unknown site";
    case ErrorKind::SiteMismatch: return "site mismatch";
    case ErrorKind::ReferenceExhausted: return "reference exhausted";
    case ErrorKind::Usage: return "usage error";
  }
  return "error";
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string to_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

bool is_trace_call_name(const std::string& lname) {
  return lname == "trace_start_sub_program" || lname == "trace_i4_data" ||
         lname == "trace_r4_data" || lname == "trace_r8_data" ||
         lname == "trace_l4_data" || lname == "trace_ch_data";
}

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->type = type;
  e->loc = loc;
  e->int_value = int_value;
  e->real_value = real_value;
  e->logical_value = logical_value;
  e->char_value = char_value;
  e->lexeme = lexeme;
  e->name = name;
  e->written = written;
  e->bin_op = bin_op;
  e->nary_op = nary_op;
  e->un_op = un_op;
  for (const auto& a : args) e->args.push_back(a->clone());
  return e;
}

ExprPtr make_int_lit(long long v, SourceLoc loc) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::IntLit;
  e->int_value = v;
  e->lexeme = std::to_string(v);
  e->type = {TypeKind::Int};
  e->loc = loc;
  return e;
}

ExprPtr make_char_lit(std::string v, SourceLoc loc) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::CharLit;
  e->char_value = std::move(v);
  e->type = {TypeKind::Character, (int)e->char_value.size()};
  e->loc = loc;
  return e;
}

ExprPtr make_var(std::string name, std::string written, SourceLoc loc) {
  auto e = std::make_unique<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  e->written = std::move(written);
  e->loc = loc;
  return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::IntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case Expr::Kind::RealLit:
      if (a.real_value != b.real_value || a.type.kind != b.type.kind) return false;
      break;
    case Expr::Kind::LogicalLit:
      if (a.logical_value != b.logical_value) return false;
      break;
    case Expr::Kind::CharLit:
      if (a.char_value != b.char_value) return false;
      break;
    case Expr::Kind::Var:
    case Expr::Kind::ArrayElem:
    case Expr::Kind::CallFn:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Unary:
      if (a.un_op != b.un_op) return false;
      break;
    case Expr::Kind::Binary:
      if (a.bin_op != b.bin_op) return false;
      break;
    case Expr::Kind::Nary:
      if (a.nary_op != b.nary_op) return false;
      break;
    case Expr::Kind::Widen:
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!expr_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

static bool stmt_list_equal(const StmtList& a, const StmtList& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(*a[i], *b[i])) return false;
  return true;
}

static bool opt_expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* x = a.as<AssignStmt>()) {
    const auto* y = b.as<AssignStmt>();
    return expr_equal(*x->lhs, *y->lhs) && expr_equal(*x->rhs, *y->rhs);
  }
  if (const auto* x = a.as<DoStmt>()) {
    const auto* y = b.as<DoStmt>();
    return x->var == y->var && expr_equal(*x->from, *y->from) &&
           expr_equal(*x->to, *y->to) && opt_expr_equal(x->step, y->step) &&
           stmt_list_equal(x->body, y->body);
  }
  if (const auto* x = a.as<IfStmt>()) {
    const auto* y = b.as<IfStmt>();
    if (x->branches.size() != y->branches.size() || x->has_else != y->has_else)
      return false;
    for (size_t i = 0; i < x->branches.size(); ++i) {
      if (!expr_equal(*x->branches[i].cond, *y->branches[i].cond)) return false;
      if (!stmt_list_equal(x->branches[i].body, y->branches[i].body)) return false;
    }
    return stmt_list_equal(x->else_body, y->else_body);
  }
  if (const auto* x = a.as<CallStmt>()) {
    const auto* y = b.as<CallStmt>();
    if (x->name != y->name || x->args.size() != y->args.size()) return false;
    for (size_t i = 0; i < x->args.size(); ++i)
      if (!expr_equal(*x->args[i], *y->args[i])) return false;
    return true;
  }
  if (a.as<ReturnStmt>()) return true;
  if (const auto* x = a.as<CommentStmt>()) {
    return x->text == b.as<CommentStmt>()->text;
  }
  if (const auto* x = a.as<PrintStmt>()) {
    const auto* y = b.as<PrintStmt>();
    if (x->items.size() != y->items.size()) return false;
    for (size_t i = 0; i < x->items.size(); ++i)
      if (!expr_equal(*x->items[i], *y->items[i])) return false;
    return true;
  }
  return false;
}

static StmtList clone_list(const StmtList& in) {
  StmtList out;
  out.reserve(in.size());
  for (const auto& s : in) out.push_back(s->clone());
  return out;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->loc = loc;
  s->trailing_comment = trailing_comment;
  if (const auto* x = as<AssignStmt>()) {
    s->node = AssignStmt{x->lhs->clone(), x->rhs->clone()};
  } else if (const auto* x = as<DoStmt>()) {
    DoStmt d;
    d.var = x->var;
    d.var_written = x->var_written;
    d.from = x->from->clone();
    d.to = x->to->clone();
    if (x->step) d.step = x->step->clone();
    d.body = clone_list(x->body);
    s->node = std::move(d);
  } else if (const auto* x = as<IfStmt>()) {
    IfStmt f;
    f.has_else = x->has_else;
    for (const auto& br : x->branches) {
      IfBranch nb;
      nb.cond = br.cond->clone();
      nb.body = clone_list(br.body);
      f.branches.push_back(std::move(nb));
    }
    f.else_body = clone_list(x->else_body);
    s->node = std::move(f);
  } else if (const auto* x = as<CallStmt>()) {
    CallStmt c;
    c.name = x->name;
    c.written = x->written;
    for (const auto& a : x->args) c.args.push_back(a->clone());
    s->node = std::move(c);
  } else if (as<ReturnStmt>()) {
    s->node = ReturnStmt{};
  } else if (const auto* x = as<CommentStmt>()) {
    s->node = CommentStmt{x->text};
  } else if (const auto* x = as<PrintStmt>()) {
    PrintStmt p;
    for (const auto& a : x->items) p.items.push_back(a->clone());
    s->node = std::move(p);
  }
  return s;
}

const Decl* Subprogram::find_decl(const std::string& lname) const {
  for (const auto& d : decls)
    if (d.name == lname) return &d;
  return nullptr;
}

Decl* Subprogram::find_decl(const std::string& lname) {
  for (auto& d : decls)
    if (d.name == lname) return &d;
  return nullptr;
}

Subprogram Subprogram::clone() const {
  Subprogram s;
  s.kind = kind;
  s.name = name;
  s.written = written;
  s.result_type = result_type;
  s.params = params;
  for (const auto& d : decls) {
    Decl nd;
    nd.type = d.type;
    nd.name = d.name;
    nd.written = d.written;
    nd.intent = d.intent;
    nd.is_parameter = d.is_parameter;
    if (d.init) nd.init = d.init->clone();
    if (d.array) {
      ArraySpec a;
      if (d.array->lower) a.lower = d.array->lower->clone();
      a.upper = d.array->upper ? d.array->upper->clone() : nullptr;
      a.lo = d.array->lo;
      a.hi = d.array->hi;
      a.resolved = d.array->resolved;
      nd.array = std::move(a);
    }
    nd.loc = d.loc;
    nd.leading_comments = d.leading_comments;
    nd.trailing_comment = d.trailing_comment;
    s.decls.push_back(std::move(nd));
  }
  s.body = clone_list(body);
  s.loc = loc;
  s.leading_comments = leading_comments;
  s.read_before_write = read_before_write;
  return s;
}

const Subprogram* SourceUnit::find_item(const std::string& lname) const {
  for (const auto& it : items)
    if (it.name == lname) return &it;
  return nullptr;
}

SourceUnit SourceUnit::clone() const {
  SourceUnit u;
  u.path = path;
  for (const auto& it : items) u.items.push_back(it.clone());
  u.trailing_comments = trailing_comments;
  u.analyzed = analyzed;
  return u;
}

static bool decl_equal(const Decl& a, const Decl& b) {
  if (a.name != b.name || !(a.type == b.type) || a.intent != b.intent ||
      a.is_parameter != b.is_parameter)
    return false;
  if (!opt_expr_equal(a.init, b.init)) return false;
  if (a.array.has_value() != b.array.has_value()) return false;
  if (a.array) {
    if (!opt_expr_equal(a.array->lower, b.array->lower)) return false;
    if (!opt_expr_equal(a.array->upper, b.array->upper)) return false;
  }
  return true;
}

bool unit_equal(const SourceUnit& a, const SourceUnit& b) {
  if (a.items.size() != b.items.size()) return false;
  for (size_t i = 0; i < a.items.size(); ++i) {
    const auto& x = a.items[i];
    const auto& y = b.items[i];
    if (x.kind != y.kind || x.name != y.name || x.params != y.params)
      return false;
    if (x.kind == SubKind::Function && !(x.result_type == y.result_type))
      return false;
    if (x.decls.size() != y.decls.size()) return false;
    for (size_t j = 0; j < x.decls.size(); ++j)
      if (!decl_equal(x.decls[j], y.decls[j])) return false;
    if (!stmt_list_equal(x.body, y.body)) return false;
  }
  return true;
}

}  // namespace driftlens
