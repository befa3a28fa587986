#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "diag.hpp"

namespace driftlens {

enum class TypeKind { Unknown, Int, Real4, Real8, Logical, Character };

struct Type {
  TypeKind kind = TypeKind::Unknown;
  int char_len = 1;  // Character only

  bool is_real() const { return kind == TypeKind::Real4 || kind == TypeKind::Real8; }
  bool operator==(const Type& o) const {
    if (kind != o.kind) return false;
    if (kind == TypeKind::Character) return char_len == o.char_len;
    return true;
  }
};

const char* type_name(TypeKind k);
// Trace typecode for a storage type: i4, r4, r8, l4, ch.
const char* typecode_for(TypeKind k);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class BinOp { Sub, Div, Pow, Eq, Ne, Lt, Le, Gt, Ge };
enum class NaryOp { Add, Mul, And, Or };
enum class UnOp { Neg, Not };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind {
    IntLit,
    RealLit,
    LogicalLit,
    CharLit,
    Var,
    ArrayElem,
    Unary,
    Binary,
    Nary,      // flat associative chain: +, *, .AND., .OR.
    CallFn,
    Widen,     // explicit integer->real widening inserted by sema
  };

  Kind kind;
  Type type;       // filled in by sema
  SourceLoc loc;

  // Literals. real_value holds the value already rounded to the literal's
  // storage kind; lexeme keeps the spelling for round-trip printing.
  long long int_value = 0;
  double real_value = 0.0;
  bool logical_value = false;
  std::string char_value;
  std::string lexeme;

  // Names: lower-cased key plus the spelling as written.
  std::string name;
  std::string written;

  BinOp bin_op{};
  NaryOp nary_op{};
  UnOp un_op{};

  // Operands: index expr for ArrayElem, operands for Unary/Binary/Nary,
  // arguments for CallFn, single child for Widen.
  std::vector<ExprPtr> args;

  ExprPtr clone() const;
};

ExprPtr make_int_lit(long long v, SourceLoc loc = {});
ExprPtr make_char_lit(std::string v, SourceLoc loc = {});
ExprPtr make_var(std::string name, std::string written, SourceLoc loc = {});

bool expr_equal(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using StmtList = std::vector<StmtPtr>;

struct Comment {
  std::string text;  // without the leading '!'
  int line = 0;
};

struct AssignStmt {
  ExprPtr lhs;  // Var or ArrayElem
  ExprPtr rhs;
};

struct DoStmt {
  std::string var;
  std::string var_written;
  ExprPtr from;
  ExprPtr to;
  ExprPtr step;  // may be null
  StmtList body;
};

struct IfBranch {
  ExprPtr cond;
  StmtList body;
};

struct IfStmt {
  std::vector<IfBranch> branches;  // IF + ELSE IFs
  StmtList else_body;
  bool has_else = false;
};

struct CallStmt {
  std::string name;
  std::string written;
  std::vector<ExprPtr> args;
};

struct ReturnStmt {};

struct PrintStmt {
  std::vector<ExprPtr> items;
};

// A full-line comment standing on its own in an executable section.
struct CommentStmt {
  std::string text;
};

struct Stmt {
  SourceLoc loc;
  std::optional<std::string> trailing_comment;
  std::variant<AssignStmt, DoStmt, IfStmt, CallStmt, ReturnStmt, PrintStmt,
               CommentStmt>
      node;

  template <class T>
  T* as() { return std::get_if<T>(&node); }
  template <class T>
  const T* as() const { return std::get_if<T>(&node); }

  StmtPtr clone() const;
};

bool stmt_equal(const Stmt& a, const Stmt& b);

// ---------------------------------------------------------------------------
// Declarations and subprograms
// ---------------------------------------------------------------------------

enum class Intent { None, In, Out, InOut };

struct ArraySpec {
  ExprPtr lower;  // null means default lower bound 1
  ExprPtr upper;
  // Const-folded by sema.
  long lo = 1;
  long hi = 0;
  bool resolved = false;
};

struct Decl {
  Type type;
  std::string name;
  std::string written;
  Intent intent = Intent::None;
  bool is_parameter = false;
  ExprPtr init;  // PARAMETER value
  std::optional<ArraySpec> array;
  SourceLoc loc;
  std::vector<Comment> leading_comments;
  std::optional<std::string> trailing_comment;
};

enum class SubKind { Program, Subroutine, Function };

struct Subprogram {
  SubKind kind = SubKind::Program;
  std::string name;
  std::string written;
  Type result_type;  // Function only
  std::vector<std::string> params;  // lower-cased, in declaration order
  std::vector<Decl> decls;          // includes parameter declarations
  StmtList body;
  SourceLoc loc;
  std::vector<Comment> leading_comments;

  // Sema results.
  std::vector<std::string> read_before_write;

  const Decl* find_decl(const std::string& lname) const;
  Decl* find_decl(const std::string& lname);
  Subprogram clone() const;
};

struct SourceUnit {
  std::string path;
  std::vector<Subprogram> items;
  std::vector<Comment> trailing_comments;
  bool analyzed = false;

  const Subprogram* find_item(const std::string& lname) const;
  SourceUnit clone() const;
};

bool unit_equal(const SourceUnit& a, const SourceUnit& b);

std::string to_lower(std::string s);
std::string to_upper(std::string s);

// Reserved runtime entry points; MiniFort code may not define or call these
// outside of instrumentation.
bool is_trace_call_name(const std::string& lname);

}  // namespace driftlens
