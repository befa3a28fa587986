#include "hoist.hpp"

#include <functional>
#include <set>

#include "sema.hpp"

namespace driftlens {

namespace {

void collect_calls(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == Expr::Kind::CallFn) out.push_back(&e);
  for (const auto& a : e.args) collect_calls(*a, out);
}

bool contains_equal(const Expr& hay, const Expr& needle) {
  if (expr_equal(hay, needle)) return true;
  for (const auto& a : hay.args)
    if (contains_equal(*a, needle)) return true;
  return false;
}

// Finds the first call (in written order of the first operand) that appears,
// structurally identical, in every operand of the chain.
const Expr* common_call(const Expr& cond) {
  if (cond.kind != Expr::Kind::Nary ||
      (cond.nary_op != NaryOp::And && cond.nary_op != NaryOp::Or))
    return nullptr;
  if (cond.args.size() < 2) return nullptr;
  std::vector<const Expr*> candidates;
  collect_calls(*cond.args[0], candidates);
  for (const Expr* c : candidates) {
    bool everywhere = true;
    for (size_t i = 1; i < cond.args.size() && everywhere; ++i)
      everywhere = contains_equal(*cond.args[i], *c);
    if (everywhere) return c;
  }
  return nullptr;
}

void replace_calls(ExprPtr& e, const Expr& call, const std::string& var,
                   const std::string& written) {
  if (expr_equal(*e, call)) {
    e = make_var(var, written, e->loc);
    return;
  }
  for (auto& a : e->args) replace_calls(a, call, var, written);
}

std::string fresh_local(const Subprogram& sub, const std::string& base) {
  std::set<std::string> taken;
  for (const auto& d : sub.decls) taken.insert(d.name);
  taken.insert(sub.name);
  std::string name = base;
  for (int n = 2; taken.count(name); ++n) name = strf("%s_%d", base.c_str(), n);
  return name;
}

struct Rewriter {
  SourceUnit& unit;
  int line;
  long rewritten = 0;

  void run() {
    for (auto& sub : unit.items) walk(sub, sub.body);
    if (line > 0 && rewritten == 0)
      throw Error(ErrorKind::NotHoistable,
                  strf("no hoistable IF condition at line %d", line));
  }

  void walk(Subprogram& sub, StmtList& body) {
    for (size_t i = 0; i < body.size(); ++i) {
      Stmt& s = *body[i];
      if (auto* d = s.as<DoStmt>()) {
        walk(sub, d->body);
        continue;
      }
      auto* f = s.as<IfStmt>();
      if (!f) continue;
      for (auto& br : f->branches) walk(sub, br.body);
      walk(sub, f->else_body);
      if (line > 0 && s.loc.line != line) continue;
      size_t inserted = hoist_if(sub, body, i, *f, s.loc);
      i += inserted;
    }
  }

  // Returns the number of statements inserted before the IF.
  size_t hoist_if(Subprogram& sub, StmtList& body, size_t at, IfStmt& f,
                  SourceLoc loc) {
    size_t inserted = 0;
    for (auto& br : f.branches) {
      const Expr* call = common_call(*br.cond);
      if (!call) {
        if (line > 0 && &br == &f.branches.front())
          throw Error(ErrorKind::NotHoistable,
                      strf("condition at line %d has no call common to every "
                           "operand",
                           line),
                      loc);
        continue;
      }
      const Subprogram* fn = unit.find_item(call->name);
      if (!fn) continue;

      std::string lname = fresh_local(sub, "i_" + call->name);
      Decl d;
      d.type = fn->result_type;
      d.name = lname;
      d.written = lname;
      d.loc = loc;
      sub.decls.push_back(std::move(d));

      auto assign = std::make_unique<Stmt>();
      assign->loc = loc;
      AssignStmt a;
      a.lhs = make_var(lname, lname, loc);
      a.rhs = call->clone();
      assign->node = std::move(a);
      body.insert(body.begin() + (long)(at + inserted), std::move(assign));
      ++inserted;

      ExprPtr saved = call->clone();  // `call` dangles once the condition mutates
      replace_calls(br.cond, *saved, lname, lname);
      ++rewritten;
    }
    return inserted;
  }
};

}  // namespace

long rewrite_hoist_condition(SourceUnit& unit, int line) {
  if (!unit.analyzed)
    throw Error(ErrorKind::Usage, "hoist needs an analyzed unit");
  Rewriter rw{unit, line};
  rw.run();
  if (rw.rewritten) {
    unit.analyzed = false;
    analyze(unit);
  }
  return rw.rewritten;
}

}  // namespace driftlens
