#include "instrument.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "printer.hpp"

namespace driftlens {

const SiteEntry* SiteTable::find(long id) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), id,
      [](const SiteEntry& e, long v) { return e.id < v; });
  if (it != entries.end() && it->id == id) return &*it;
  return nullptr;
}

std::string trace_descriptor(const Expr& lvalue) {
  if (lvalue.kind == Expr::Kind::Var)
    return to_upper(lvalue.written.empty() ? lvalue.name : lvalue.written);
  return compact_expr(lvalue);
}

namespace {

class Instrumenter {
 public:
  Instrumenter(SourceUnit& unit, const InstrumentOptions& opts)
      : unit_(unit), opts_(opts), next_id_(opts.first_site_id) {}

  SiteTable run() {
    if (!unit_.analyzed)
      throw Error(ErrorKind::Usage, "instrument needs an analyzed unit");
    check_not_instrumented();
    for (auto& sub : unit_.items) instrument_subprogram(sub);
    return std::move(table_);
  }

 private:
  SourceUnit& unit_;
  const InstrumentOptions& opts_;
  long next_id_;
  SiteTable table_;
  Subprogram* cur_ = nullptr;

  void check_not_instrumented() {
    for (const auto& sub : unit_.items)
      check_list(sub.body);
  }

  void check_list(const StmtList& body) {
    for (const auto& s : body) {
      if (const auto* c = s->as<CallStmt>()) {
        if (is_trace_call_name(c->name))
          fail(ErrorKind::AlreadyInstrumented, s->loc,
               strf("unit already contains a call to '%s'", c->name.c_str()));
      } else if (const auto* d = s->as<DoStmt>()) {
        check_list(d->body);
      } else if (const auto* f = s->as<IfStmt>()) {
        for (const auto& br : f->branches) check_list(br.body);
        check_list(f->else_body);
      }
    }
  }

  long new_site(const std::string& descriptor, const std::string& typecode,
                int line) {
    SiteEntry e;
    e.id = next_id_++;
    e.subprogram = cur_->name;
    e.line = line;
    e.descriptor = descriptor;
    e.typecode = typecode;
    table_.entries.push_back(e);
    return e.id;
  }

  StmtPtr make_data_call(const Expr& lvalue, long site, int line) {
    auto s = std::make_unique<Stmt>();
    s->loc = SourceLoc{line, 0};
    CallStmt c;
    c.name = strf("trace_%s_data", typecode_for(lvalue.type.kind));
    c.written = c.name;
    c.args.push_back(make_char_lit(trace_descriptor(lvalue)));
    c.args.push_back(lvalue.clone());
    c.args.push_back(make_int_lit(site));
    s->node = std::move(c);
    return s;
  }

  // Trace site for an lvalue; returns null for suppressed character sites.
  StmtPtr data_site(const Expr& lvalue, int line) {
    if (lvalue.type.kind == TypeKind::Character && !opts_.trace_characters)
      return nullptr;
    long id = new_site(trace_descriptor(lvalue), typecode_for(lvalue.type.kind),
                       line);
    return make_data_call(lvalue, id, line);
  }

  void instrument_list(StmtList& body) {
    StmtList out;
    out.reserve(body.size());
    for (auto& sp : body) {
      Stmt& s = *sp;
      if (auto* a = s.as<AssignStmt>()) {
        bool is_result_assign =
            cur_->kind == SubKind::Function &&
            a->lhs->kind == Expr::Kind::Var && a->lhs->name == cur_->name;
        StmtPtr call;
        // Function results are traced at the assignment in the caller.
        if (!is_result_assign) call = data_site(*a->lhs, s.loc.line);
        out.push_back(std::move(sp));
        if (call) out.push_back(std::move(call));
      } else if (auto* d = s.as<DoStmt>()) {
        // The loop variable is traced once per iteration at the body top.
        Expr var;
        var.kind = Expr::Kind::Var;
        var.name = d->var;
        var.written = d->var_written;
        var.type = {TypeKind::Int};
        long id = new_site(trace_descriptor(var), "i4", s.loc.line);
        StmtPtr call = make_data_call(var, id, s.loc.line);
        instrument_list(d->body);
        d->body.insert(d->body.begin(), std::move(call));
        out.push_back(std::move(sp));
      } else if (auto* f = s.as<IfStmt>()) {
        for (auto& br : f->branches) instrument_list(br.body);
        instrument_list(f->else_body);
        out.push_back(std::move(sp));
      } else if (auto* c = s.as<CallStmt>()) {
        // INTENT(INOUT) arguments are value-producing at the call site.
        std::vector<StmtPtr> calls;
        const Subprogram* callee = unit_.find_item(c->name);
        if (callee) {
          for (size_t i = 0; i < c->args.size(); ++i) {
            const Decl* p = callee->find_decl(callee->params[i]);
            if (p->intent != Intent::InOut || p->array) continue;
            if (auto call = data_site(*c->args[i], s.loc.line))
              calls.push_back(std::move(call));
          }
        }
        out.push_back(std::move(sp));
        for (auto& call : calls) out.push_back(std::move(call));
      } else {
        out.push_back(std::move(sp));
      }
    }
    body = std::move(out);
  }

  void instrument_subprogram(Subprogram& sub) {
    cur_ = &sub;
    long id = new_site(to_upper(sub.written), "sp", sub.loc.line);
    auto s = std::make_unique<Stmt>();
    s->loc = sub.loc;
    CallStmt c;
    c.name = "trace_start_sub_program";
    c.written = c.name;
    c.args.push_back(make_char_lit(to_upper(sub.written)));
    c.args.push_back(make_int_lit(id));
    s->node = std::move(c);
    instrument_list(sub.body);
    sub.body.insert(sub.body.begin(), std::move(s));
    cur_ = nullptr;
  }
};

}  // namespace

SiteTable instrument(SourceUnit& unit, const InstrumentOptions& opts) {
  Instrumenter ins(unit, opts);
  return ins.run();
}

void write_site_table(const SiteTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, strf("cannot write '%s'", path.c_str()));
  out << "DRIFTLENS-SITES v1\n";
  for (const auto& e : table.entries) {
    out << e.id << '\t' << e.subprogram << '\t' << e.line << '\t'
        << e.descriptor << '\t' << e.typecode << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, strf("write failed on '%s'", path.c_str()));
}

SiteTable read_site_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, strf("cannot open '%s'", path.c_str()));
  std::string line;
  if (!std::getline(in, line) || line != "DRIFTLENS-SITES v1")
    fail(ErrorKind::Format, {}, strf("'%s' is not a site table", path.c_str()));
  SiteTable table;
  long n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    SiteEntry e;
    std::istringstream iss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(iss, field, '\t')) fields.push_back(field);
    if (fields.size() != 5)
      fail(ErrorKind::Format, SourceLoc{(int)n, 0},
           strf("site table line %ld: expected 5 fields", n));
    e.id = std::strtol(fields[0].c_str(), nullptr, 10);
    e.subprogram = fields[1];
    e.line = (int)std::strtol(fields[2].c_str(), nullptr, 10);
    e.descriptor = fields[3];
    e.typecode = fields[4];
    if (e.id <= 0)
      fail(ErrorKind::Format, SourceLoc{(int)n, 0},
           strf("site table line %ld: bad id", n));
    table.entries.push_back(std::move(e));
  }
  return table;
}

}  // namespace driftlens
