#include "doctest.h"
#include "helpers.hpp"

using namespace driftlens;
using testutil::analyzed;

namespace {

// Independent count of the calls instrumentation must insert for a unit with
// no INTENT(INOUT) scalar call arguments: one per assignment (minus function
// result assignments), one per DO loop, one per subprogram entry.
struct Walk {
  long assigns = 0;
  long loops = 0;
  const Subprogram* sub = nullptr;

  void stmts(const StmtList& body) {
    for (const auto& s : body) {
      if (const auto* a = s->as<AssignStmt>()) {
        bool result = sub->kind == SubKind::Function &&
                      a->lhs->kind == Expr::Kind::Var &&
                      a->lhs->name == sub->name;
        if (!result) ++assigns;
      } else if (const auto* d = s->as<DoStmt>()) {
        ++loops;
        stmts(d->body);
      } else if (const auto* f = s->as<IfStmt>()) {
        for (const auto& br : f->branches) stmts(br.body);
        stmts(f->else_body);
      }
    }
  }
};

long expected_sites(const SourceUnit& u) {
  long n = 0;
  for (const auto& sub : u.items) {
    Walk w;
    w.sub = &sub;
    w.stmts(sub.body);
    n += 1 + w.assigns + w.loops;
  }
  return n;
}

long count_trace_calls(const StmtList& body) {
  long n = 0;
  for (const auto& s : body) {
    if (const auto* c = s->as<CallStmt>()) {
      if (is_trace_call_name(c->name)) ++n;
    } else if (const auto* d = s->as<DoStmt>()) {
      n += count_trace_calls(d->body);
    } else if (const auto* f = s->as<IfStmt>()) {
      for (const auto& br : f->branches) n += count_trace_calls(br.body);
      n += count_trace_calls(f->else_body);
    }
  }
  return n;
}

}  // namespace

TEST_CASE("site count equals assignments + loops + subprograms") {
  // sum_drift has no calls, so the independent walk is exact.
  SourceUnit u = parse_file(testutil::fixture_path("sum_drift.mf"));
  analyze(u);
  long want = expected_sites(u);
  SiteTable t = instrument(u);
  CHECK((long)t.size() == want);
  long calls = 0;
  for (const auto& sub : u.items) calls += count_trace_calls(sub.body);
  CHECK(calls == want);
}

TEST_CASE("site ids are assigned in lexical order starting at 1") {
  SourceUnit u = parse_file(testutil::fixture_path("acmpbl.mf"));
  analyze(u);
  SiteTable t = instrument(u);
  for (size_t i = 0; i < t.entries.size(); ++i)
    CHECK(t.entries[i].id == (long)i + 1);
  // First site of each subprogram is its entry.
  CHECK(t.entries[0].typecode == "sp");
  CHECK(t.entries[0].descriptor == "PBL_DRIVER");
}

TEST_CASE("scalar descriptors are upper-case, array elements keep their spelling") {
  SourceUnit u = parse_file(testutil::fixture_path("acmpbl.mf"));
  analyze(u);
  SiteTable t = instrument(u);
  bool saw_scalar = false, saw_elem = false;
  for (const auto& e : t.entries) {
    if (e.descriptor == "RDT") saw_scalar = true;
    if (e.descriptor == "sigmaf(k-1)") saw_elem = true;
  }
  CHECK(saw_scalar);
  CHECK(saw_elem);
}

TEST_CASE("instrumenting twice is refused") {
  SourceUnit u = parse_file(testutil::fixture_path("straightline.mf"));
  analyze(u);
  instrument(u);
  analyze(u);
  try {
    instrument(u);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::AlreadyInstrumented);
  }
}

TEST_CASE("instrumentation is deterministic") {
  SourceUnit a = parse_file(testutil::fixture_path("dostep.mf"));
  SourceUnit b = parse_file(testutil::fixture_path("dostep.mf"));
  analyze(a);
  analyze(b);
  instrument(a);
  instrument(b);
  CHECK(emit_source(a) == emit_source(b));
}

TEST_CASE("instrumented output re-parses and re-analyzes") {
  for (const auto& path : testutil::fixture_files()) {
    CAPTURE(path);
    SourceUnit u = parse_file(path);
    analyze(u);
    instrument(u);
    SourceUnit v = parse_source(emit_source(u));
    CHECK_NOTHROW(analyze(v));
  }
}

TEST_CASE("character assignments are skipped unless requested") {
  SourceUnit u = parse_file(testutil::fixture_path("chars.mf"));
  analyze(u);
  SiteTable without = instrument(u);
  for (const auto& e : without.entries) CHECK(e.typecode != "ch");

  SourceUnit v = parse_file(testutil::fixture_path("chars.mf"));
  analyze(v);
  InstrumentOptions opts;
  opts.trace_characters = true;
  SiteTable with = instrument(v, opts);
  CHECK(with.size() > without.size());
}

TEST_CASE("site table round-trips through its sidecar file") {
  SourceUnit u = parse_file(testutil::fixture_path("case3.mf"));
  analyze(u);
  SiteTable t = instrument(u);
  std::string path = testutil::temp_path("sites_rt.tsv");
  write_site_table(t, path);
  SiteTable r = read_site_table(path);
  REQUIRE(r.size() == t.size());
  for (size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(r.entries[i].id == t.entries[i].id);
    CHECK(r.entries[i].subprogram == t.entries[i].subprogram);
    CHECK(r.entries[i].line == t.entries[i].line);
    CHECK(r.entries[i].descriptor == t.entries[i].descriptor);
    CHECK(r.entries[i].typecode == t.entries[i].typecode);
  }
}

TEST_CASE("calls with INTENT(INOUT) scalars get a trace after the call") {
  SourceUnit u = parse_file(testutil::fixture_path("case1.mf"));
  analyze(u);
  SiteTable t = instrument(u);
  // The call's trace site carries the caller's line for the CALL statement.
  const SiteEntry* site = nullptr;
  for (const auto& e : t.entries)
    if (e.descriptor == "NEW_DOMDESC" && e.subprogram == "med_initialize")
      site = &e;
  REQUIRE(site);
  CHECK(site->line == 4);
  CHECK(site->typecode == "i4");
}
