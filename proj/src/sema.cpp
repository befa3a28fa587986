#include "sema.hpp"

#include <map>
#include <set>

namespace driftlens {

namespace {

[[noreturn]] void err(SourceLoc loc, std::string msg) {
  fail(ErrorKind::Semantic, loc, std::move(msg));
}

struct ConstValue {
  TypeKind kind;
  long long i = 0;
  double r = 0.0;
  bool l = false;
  std::string ch;
};

class Analyzer {
 public:
  explicit Analyzer(SourceUnit& unit) : unit_(unit) {}

  void run() {
    std::set<std::string> names;
    for (auto& sub : unit_.items) {
      if (is_trace_call_name(sub.name))
        err(sub.loc, strf("'%s' is a reserved trace routine name",
                          sub.written.c_str()));
      if (!names.insert(sub.name).second)
        err(sub.loc, strf("duplicate subprogram name '%s'", sub.written.c_str()));
      subs_[sub.name] = &sub;
    }
    // Fold every unit's declarations first so argument association can
    // check array bounds against callees appearing later in the file.
    for (auto& sub : unit_.items) {
      cur_ = &sub;
      analyze_decls(sub);
    }
    for (auto& sub : unit_.items) analyze_subprogram(sub);
    unit_.analyzed = true;
  }

 private:
  SourceUnit& unit_;
  std::map<std::string, Subprogram*> subs_;

  Subprogram* cur_ = nullptr;
  std::map<std::string, ConstValue> const_values_;  // PARAMETER values

  // Read-before-write tracking.
  std::set<std::string> written_;
  std::set<std::string> flagged_;
  std::vector<std::string> flag_order_;

  // -- constant folding ----------------------------------------------------

  ConstValue fold_const(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return {TypeKind::Int, e.int_value};
      case Expr::Kind::RealLit: {
        ConstValue v{e.type.kind};
        v.r = e.real_value;
        return v;
      }
      case Expr::Kind::LogicalLit: {
        ConstValue v{TypeKind::Logical};
        v.l = e.logical_value;
        return v;
      }
      case Expr::Kind::CharLit: {
        ConstValue v{TypeKind::Character};
        v.ch = e.char_value;
        return v;
      }
      case Expr::Kind::Var: {
        auto it = const_values_.find(e.name);
        if (it == const_values_.end())
          err(e.loc, strf("'%s' is not a constant", e.written.c_str()));
        return it->second;
      }
      case Expr::Kind::Unary: {
        ConstValue v = fold_const(*e.args[0]);
        if (e.un_op == UnOp::Neg) {
          if (v.kind == TypeKind::Int)
            v.i = -v.i;
          else if (v.kind == TypeKind::Real4 || v.kind == TypeKind::Real8)
            v.r = -v.r;
          else
            err(e.loc, "unary minus on non-numeric constant");
          return v;
        }
        if (v.kind != TypeKind::Logical) err(e.loc, ".NOT. on non-logical constant");
        v.l = !v.l;
        return v;
      }
      default:
        err(e.loc, "expression is not a constant");
    }
  }

  long fold_bound(const Expr& e) {
    ConstValue v = fold_const(e);
    if (v.kind != TypeKind::Int) err(e.loc, "array bound must be an integer constant");
    return (long)v.i;
  }

  // -- declarations --------------------------------------------------------

  void analyze_decls(Subprogram& sub) {
    const_values_.clear();
    std::set<std::string> seen;
    std::set<std::string> params(sub.params.begin(), sub.params.end());
    for (auto& d : sub.decls) {
      if (!seen.insert(d.name).second)
        err(d.loc, strf("'%s' declared twice", d.written.c_str()));
      if (is_trace_call_name(d.name))
        err(d.loc, strf("'%s' is a reserved name", d.written.c_str()));
      if (sub.kind == SubKind::Function && d.name == sub.name)
        err(d.loc, "function result must not be declared explicitly");
      bool is_param = params.count(d.name) > 0;
      if (is_param) {
        if (d.intent == Intent::None)
          err(d.loc, strf("parameter '%s' needs an explicit INTENT",
                          d.written.c_str()));
        if (d.is_parameter)
          err(d.loc, "a dummy argument cannot be a PARAMETER constant");
        if (sub.kind == SubKind::Function && d.intent != Intent::In)
          err(d.loc, "function arguments must be INTENT(IN)");
      } else if (d.intent != Intent::None) {
        err(d.loc, strf("INTENT on non-argument '%s'", d.written.c_str()));
      }
      if (d.array) {
        d.array->lo = d.array->lower ? fold_bound(*d.array->lower) : 1;
        d.array->hi = fold_bound(*d.array->upper);
        if (d.array->hi < d.array->lo)
          err(d.loc, strf("empty array extent for '%s'", d.written.c_str()));
        d.array->resolved = true;
      }
      if (d.is_parameter) {
        if (!d.init) err(d.loc, "PARAMETER needs a value");
        if (d.array) err(d.loc, "array PARAMETER constants are not supported");
        ConstValue v = fold_const(*d.init);
        if (v.kind == TypeKind::Int && d.type.is_real()) {
          v.r = (double)v.i;  // widening at the declaration
          v.kind = d.type.kind;
        }
        if (d.type.kind == TypeKind::Real4) v.r = (double)(float)v.r;
        if ((d.type.kind == TypeKind::Int) != (v.kind == TypeKind::Int) ||
            (d.type.kind == TypeKind::Logical) != (v.kind == TypeKind::Logical) ||
            (d.type.kind == TypeKind::Character) != (v.kind == TypeKind::Character))
          err(d.loc, strf("PARAMETER '%s' value has the wrong type",
                          d.written.c_str()));
        v.kind = d.type.kind;
        const_values_[d.name] = v;
        type_expr(*d.init);
      } else if (d.init) {
        err(d.loc, "initializers are only allowed on PARAMETER constants");
      }
    }
    for (const auto& p : sub.params)
      if (!seen.count(p))
        err(sub.loc, strf("argument '%s' has no declaration", p.c_str()));
  }

  // -- lookup --------------------------------------------------------------

  const Decl* lookup(const std::string& name) const {
    return cur_->find_decl(name);
  }

  bool is_function_result(const std::string& name) const {
    return cur_->kind == SubKind::Function && name == cur_->name;
  }

  // -- expression typing ---------------------------------------------------

  bool numeric(TypeKind k) const {
    return k == TypeKind::Int || k == TypeKind::Real4 || k == TypeKind::Real8;
  }

  void type_expr(Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        e.type = {TypeKind::Int};
        return;
      case Expr::Kind::RealLit:
      case Expr::Kind::LogicalLit:
      case Expr::Kind::CharLit:
        return;  // typed by the parser
      case Expr::Kind::Var: {
        if (is_function_result(e.name)) {
          e.type = cur_->result_type;
          return;
        }
        const Decl* d = lookup(e.name);
        if (!d) err(e.loc, strf("'%s' is not declared", e.written.c_str()));
        if (d->array)
          err(e.loc, strf("array '%s' used without an index", e.written.c_str()));
        e.type = d->type;
        return;
      }
      case Expr::Kind::ArrayElem: {
        const Decl* d = lookup(e.name);
        if (!d || !d->array)
          err(e.loc, strf("'%s' is not an array", e.written.c_str()));
        type_expr(*e.args[0]);
        if (e.args[0]->type.kind != TypeKind::Int)
          err(e.args[0]->loc, "array index must be an integer");
        e.type = d->type;
        return;
      }
      case Expr::Kind::CallFn: {
        // Array reference or function call.
        const Decl* d = lookup(e.name);
        if (d && d->array) {
          if (e.args.size() != 1)
            err(e.loc, strf("array '%s' takes exactly one index",
                            e.written.c_str()));
          e.kind = Expr::Kind::ArrayElem;
          type_expr(e);
          return;
        }
        if (d) err(e.loc, strf("'%s' is not an array or function", e.written.c_str()));
        auto it = subs_.find(e.name);
        if (it == subs_.end() || it->second->kind != SubKind::Function)
          err(e.loc, strf("'%s' is not a declared function", e.written.c_str()));
        Subprogram* fn = it->second;
        check_arguments(e.loc, *fn, e.args, /*is_function=*/true);
        e.type = fn->result_type;
        return;
      }
      case Expr::Kind::Unary: {
        type_expr(*e.args[0]);
        TypeKind k = e.args[0]->type.kind;
        if (e.un_op == UnOp::Neg) {
          if (!numeric(k)) err(e.loc, "unary minus needs a numeric operand");
          e.type = e.args[0]->type;
        } else {
          if (k != TypeKind::Logical) err(e.loc, ".NOT. needs a logical operand");
          e.type = {TypeKind::Logical};
        }
        return;
      }
      case Expr::Kind::Binary: {
        type_expr(*e.args[0]);
        type_expr(*e.args[1]);
        TypeKind a = e.args[0]->type.kind;
        TypeKind b = e.args[1]->type.kind;
        switch (e.bin_op) {
          case BinOp::Sub:
          case BinOp::Div:
            if (!numeric(a) || a != b)
              err(e.loc, "operands must both be integers or both reals of the "
                         "same kind");
            e.type = e.args[0]->type;
            return;
          case BinOp::Pow:
            if (!numeric(a)) err(e.loc, "base of ** must be numeric");
            if (!(b == a || (b == TypeKind::Int && a != TypeKind::Int)))
              err(e.loc, "exponent must be an integer or match the base kind");
            e.type = e.args[0]->type;
            return;
          default:  // relational
            if (a == TypeKind::Character && b == TypeKind::Character) {
              if (e.bin_op != BinOp::Eq && e.bin_op != BinOp::Ne)
                err(e.loc, "character comparison supports only == and /=");
            } else if (!(numeric(a) && a == b)) {
              err(e.loc, "relational operands must match in type and kind");
            }
            e.type = {TypeKind::Logical};
            return;
        }
      }
      case Expr::Kind::Nary: {
        for (auto& a : e.args) type_expr(*a);
        if (e.nary_op == NaryOp::And || e.nary_op == NaryOp::Or) {
          for (auto& a : e.args)
            if (a->type.kind != TypeKind::Logical)
              err(a->loc, "logical operator needs logical operands");
          e.type = {TypeKind::Logical};
        } else {
          TypeKind k = e.args[0]->type.kind;
          if (!numeric(k)) err(e.loc, "arithmetic needs numeric operands");
          for (auto& a : e.args)
            if (a->type.kind != k)
              err(a->loc, "operands of a +/* chain must share one type");
          e.type = e.args[0]->type;
        }
        return;
      }
      case Expr::Kind::Widen:
        type_expr(*e.args[0]);
        return;
    }
  }

  // Wraps an integer-typed expression for storage into a real of `target`.
  static void widen_to(ExprPtr& e, Type target) {
    auto w = std::make_unique<Expr>();
    w->kind = Expr::Kind::Widen;
    w->loc = e->loc;
    w->type = target;
    w->args.push_back(std::move(e));
    e = std::move(w);
  }

  bool is_lvalue(const Expr& e) const {
    return e.kind == Expr::Kind::Var || e.kind == Expr::Kind::ArrayElem;
  }

  void check_arguments(SourceLoc loc, Subprogram& callee,
                       std::vector<ExprPtr>& args, bool is_function) {
    if (args.size() != callee.params.size())
      err(loc, strf("'%s' expects %zu argument(s), got %zu",
                    callee.written.c_str(), callee.params.size(), args.size()));
    for (size_t i = 0; i < args.size(); ++i) {
      const Decl* p = callee.find_decl(callee.params[i]);
      ExprPtr& a = args[i];
      if (p->array) {
        // Whole-array association: a bare name of a matching array.
        if (a->kind != Expr::Kind::Var)
          err(a->loc, strf("argument %zu of '%s' must be a whole array",
                           i + 1, callee.written.c_str()));
        const Decl* d = lookup(a->name);
        if (!d || !d->array)
          err(a->loc, strf("'%s' is not an array", a->written.c_str()));
        if (!(d->type == p->type) || d->array->lo != p->array->lo ||
            d->array->hi != p->array->hi)
          err(a->loc, strf("array argument '%s' does not match the dummy "
                           "declaration", a->written.c_str()));
        a->type = d->type;
        continue;
      }
      type_expr(*a);
      if (p->intent == Intent::In) {
        if (a->type.kind == TypeKind::Int && p->type.is_real()) {
          widen_to(a, p->type);
        } else if (!(a->type == p->type) &&
                   !(a->type.kind == TypeKind::Character &&
                     p->type.kind == TypeKind::Character)) {
          err(a->loc, strf("argument %zu of '%s' has the wrong type", i + 1,
                           callee.written.c_str()));
        }
      } else {
        if (!is_lvalue(*a))
          err(a->loc, strf("INTENT(%s) argument must be a variable",
                           p->intent == Intent::Out ? "OUT" : "INOUT"));
        check_writable(*a);
        if (!(a->type == p->type))
          err(a->loc, strf("argument %zu of '%s' has the wrong type", i + 1,
                           callee.written.c_str()));
      }
    }
    (void)is_function;
  }

  void check_writable(const Expr& lhs) {
    const Decl* d = lookup(lhs.name);
    if (is_function_result(lhs.name)) return;
    if (!d) err(lhs.loc, strf("'%s' is not declared", lhs.written.c_str()));
    if (d->is_parameter)
      err(lhs.loc, strf("cannot assign to PARAMETER '%s'", lhs.written.c_str()));
    if (d->intent == Intent::In)
      err(lhs.loc, strf("cannot write INTENT(IN) argument '%s'",
                        lhs.written.c_str()));
  }

  // -- read-before-write ---------------------------------------------------

  void note_read(const std::string& name) {
    if (const_values_.count(name)) return;
    if (is_function_result(name)) return;
    if (!written_.count(name) && !flagged_.count(name)) {
      flagged_.insert(name);
      flag_order_.push_back(name);
    }
  }

  void note_write(const std::string& name) { written_.insert(name); }

  void scan_reads(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var:
        note_read(e.name);
        return;
      case Expr::Kind::ArrayElem:
        note_read(e.name);
        scan_reads(*e.args[0]);
        return;
      default:
        for (const auto& a : e.args) scan_reads(*a);
        return;
    }
  }

  // -- statements ----------------------------------------------------------

  void analyze_stmt(Stmt& s) {
    if (auto* a = s.as<AssignStmt>()) {
      // Reclassify the lhs array reference if needed (parser produced Var
      // or ArrayElem directly for designators).
      type_expr(*a->rhs);
      scan_reads(*a->rhs);
      Expr& lhs = *a->lhs;
      if (lhs.kind == Expr::Kind::ArrayElem || lhs.kind == Expr::Kind::Var) {
        check_writable(lhs);
        type_expr(lhs);
        if (lhs.kind == Expr::Kind::ArrayElem) scan_reads(*lhs.args[0]);
      }
      note_write(lhs.name);
      if (a->rhs->type.kind == TypeKind::Int && lhs.type.is_real()) {
        widen_to(a->rhs, lhs.type);
      } else if (!(a->rhs->type == lhs.type) &&
                 !(a->rhs->type.kind == TypeKind::Character &&
                   lhs.type.kind == TypeKind::Character)) {
        err(s.loc, strf("cannot assign a %s value to '%s'",
                        type_name(a->rhs->type.kind), lhs.written.c_str()));
      }
    } else if (auto* d = s.as<DoStmt>()) {
      const Decl* vd = lookup(d->var);
      if (!vd || vd->array || vd->type.kind != TypeKind::Int)
        err(s.loc, strf("loop variable '%s' must be a declared integer scalar",
                        d->var_written.c_str()));
      if (vd->is_parameter || vd->intent == Intent::In)
        err(s.loc, strf("loop variable '%s' is not writable",
                        d->var_written.c_str()));
      type_expr(*d->from);
      type_expr(*d->to);
      if (d->step) type_expr(*d->step);
      for (const Expr* b : {d->from.get(), d->to.get(), d->step.get()}) {
        if (!b) continue;
        if (b->type.kind != TypeKind::Int)
          err(b->loc, "DO bounds must be integers");
        scan_reads(*b);
      }
      note_write(d->var);
      for (auto& b : d->body) analyze_stmt(*b);
    } else if (auto* f = s.as<IfStmt>()) {
      for (auto& br : f->branches) {
        type_expr(*br.cond);
        if (br.cond->type.kind != TypeKind::Logical)
          err(br.cond->loc, "IF condition must be logical");
        scan_reads(*br.cond);
        for (auto& b : br.body) analyze_stmt(*b);
      }
      for (auto& b : f->else_body) analyze_stmt(*b);
    } else if (auto* c = s.as<CallStmt>()) {
      if (is_trace_call_name(c->name)) {
        analyze_trace_call(s, *c);
        return;
      }
      auto it = subs_.find(c->name);
      if (it == subs_.end() || it->second->kind != SubKind::Subroutine)
        err(s.loc, strf("'%s' is not a declared subroutine", c->written.c_str()));
      Subprogram& callee = *it->second;
      check_arguments(s.loc, callee, c->args, false);
      for (size_t i = 0; i < c->args.size(); ++i) {
        const Decl* p = callee.find_decl(callee.params[i]);
        const Expr& a = *c->args[i];
        if (p->intent == Intent::Out) {
          if (a.kind == Expr::Kind::ArrayElem) scan_reads(*a.args[0]);
          note_write(a.name);
        } else if (p->intent == Intent::InOut) {
          scan_reads(a);
          note_write(a.name);
        } else {
          scan_reads(a);
        }
      }
    } else if (auto* p = s.as<PrintStmt>()) {
      for (auto& it : p->items) {
        type_expr(*it);
        scan_reads(*it);
      }
    }
    // ReturnStmt, CommentStmt: nothing to do.
  }

  // Inserted trace calls re-analyze cleanly so instrumented output can be
  // parsed and run like any other unit.
  void analyze_trace_call(Stmt& s, CallStmt& c) {
    if (c.name == "trace_start_sub_program") {
      if (c.args.size() != 2 || c.args[0]->kind != Expr::Kind::CharLit ||
          c.args[1]->kind != Expr::Kind::IntLit)
        err(s.loc, "trace_start_sub_program expects (name, site)");
      return;
    }
    if (c.args.size() != 3 || c.args[0]->kind != Expr::Kind::CharLit ||
        c.args[2]->kind != Expr::Kind::IntLit)
      err(s.loc, strf("%s expects (descriptor, variable, site)", c.name.c_str()));
    Expr& v = *c.args[1];
    if (v.kind == Expr::Kind::CallFn) {
      // Could be an array element spelled like a call.
      const Decl* d = lookup(v.name);
      if (d && d->array) {
        v.kind = Expr::Kind::ArrayElem;
      }
    }
    if (!is_lvalue(v)) err(v.loc, "traced value must be a variable");
    type_expr(v);
    scan_reads(v);
  }

  void analyze_subprogram(Subprogram& sub) {
    cur_ = &sub;
    written_.clear();
    flagged_.clear();
    flag_order_.clear();
    analyze_decls(sub);
    // Caller-initialized arguments count as written on entry.
    for (const auto& p : sub.params) {
      const Decl* d = sub.find_decl(p);
      if (d->intent == Intent::In || d->intent == Intent::InOut)
        written_.insert(p);
    }
    for (auto& st : sub.body) analyze_stmt(*st);
    sub.read_before_write = flag_order_;
    cur_ = nullptr;
  }
};

}  // namespace

void analyze(SourceUnit& unit) {
  Analyzer a(unit);
  a.run();
}

}  // namespace driftlens
