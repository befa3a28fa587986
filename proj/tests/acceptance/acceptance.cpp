// End-to-end acceptance checks. Runs the installed CLI binary (argv[1])
// against the example corpus and double-checks the library's numeric
// behaviour with independently coded reference computations. Prints one
// PASS/FAIL line per check; exits non-zero when any check fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instrument.hpp"
#include "interp.hpp"
#include "parser.hpp"
#include "sema.hpp"
#include "tools.hpp"
#include "trace_runtime.hpp"

namespace fs = std::filesystem;
using namespace driftlens;

namespace {

std::string g_cli;
std::string g_dir;
int g_failed = 0;
std::vector<std::string> g_notes;

std::string fixture(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

std::string tmp(const std::string& name) { return g_dir + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

struct CmdResult {
  int status = 127;
  std::string output;
};

CmdResult cli(const std::string& args) {
  std::string outfile = tmp("cmd.out");
  std::string cmd = "'" + g_cli + "' " + args + " >'" + outfile + "' 2>&1";
  int rc = std::system(cmd.c_str());
  CmdResult r;
  if (rc != -1 && WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  r.output = read_file(outfile);
  return r;
}

bool expect(bool ok, const std::string& what) {
  if (!ok) g_notes.push_back(what);
  return ok;
}

void finish(const char* name, bool ok) {
  std::printf("%s  %s\n", ok ? "PASS" : "FAIL", name);
  if (!ok) {
    ++g_failed;
    for (const auto& n : g_notes) std::printf("      - %s\n", n.c_str());
  }
  g_notes.clear();
}

void run_check(const char* name, bool (*fn)()) {
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    g_notes.push_back(std::string("exception: ") + e.what());
  }
  finish(name, ok);
}

SourceUnit load_analyzed(const std::string& path) {
  SourceUnit u = parse_file(path);
  analyze(u);
  return u;
}

// ---------------------------------------------------------------------------
// 1. Comparing a run against its own trace reports nothing.
// ---------------------------------------------------------------------------

bool check_self_comparison() {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(FIXTURES_DIR))
    if (e.path().extension() == ".mf") names.push_back(e.path().string());
  std::sort(names.begin(), names.end());
  bool ok = expect(names.size() >= 10, "example corpus present");
  for (const auto& src : names) {
    std::string base = fs::path(src).stem().string();
    std::string prog = tmp(base + ".mf");
    std::string trace = tmp(base + ".trc");
    std::string raw = tmp(base + ".raw");
    CmdResult inst = cli("instrument '" + src + "' -o '" + prog + "'");
    ok &= expect(inst.status == 0, base + ": instrument failed");
    CmdResult cap = cli("run '" + prog + "' --capture '" + trace + "'");
    ok &= expect(cap.status == 0, base + ": capture failed");
    CmdResult cmp = cli("run '" + prog + "' --compare '" + trace +
                        "' --report-raw '" + raw + "'");
    ok &= expect(cmp.status == 0, base + ": self-comparison exit status " +
                                      std::to_string(cmp.status));
    DifferenceReport rep = read_raw_report(raw);
    ok &= expect(rep.similar == 0 && rep.different == 0 && !rep.divergence,
                 base + ": self-comparison not clean");
    ok &= expect(rep.identical > 0, base + ": no records compared");
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 2. A reordered, wider-precision rerun of a long summation stays within
//    tolerance at every step, so every drifted value is absorbed as similar
//    and the corrected run lands on the reference result exactly.
// ---------------------------------------------------------------------------

bool check_drift_removal() {
  // Reference run: float arithmetic, left-to-right folds. Rerun: long double
  // intermediates, balanced-tree folds, each statement restarted from the
  // reference state (that is what overwrite-on-similar produces).
  const int n = 1000;
  std::vector<float> a(n + 1), b(n + 1), c(n + 1);
  double worst = 0.0;
  auto gap_ok = [&](double cmp, double ref) {
    double diff = std::fabs(cmp - ref);
    double rel = diff / std::fmax(std::fabs(cmp), std::fabs(ref));
    if (diff == 0.0) rel = 0.0;
    worst = std::fmax(worst, rel);
    return diff <= 1.0e-10 || rel <= 1.0e-3;
  };
  bool steps_ok = true;
  for (int k = 1; k <= n; ++k) {
    float rk = (float)k;
    a[k] = 1.0f / (3.0f * rk + 1.0f);
    b[k] = rk / (7.0f * rk * rk + 2.0f);
    c[k] = 1.0f / (rk + 2.0f);
    long double rkl = (long double)k;
    steps_ok &= gap_ok((float)(1.0L / (3.0L * rkl + 1.0L)), a[k]);
    steps_ok &= gap_ok((float)(rkl / ((7.0L * rkl) * rkl + 2.0L)), b[k]);
    steps_ok &= gap_ok((float)(1.0L / (rkl + 2.0L)), c[k]);
  }
  float s = 0.0f;
  for (int k = 1; k <= n; ++k) {
    float ref = ((s + a[k]) + b[k]) + c[k];
    float cmp = (float)(((long double)s + a[k]) + ((long double)b[k] + c[k]));
    steps_ok &= gap_ok(cmp, ref);
    s = ref;
  }
  bool ok = expect(steps_ok, "per-step gap exceeds tolerance (worst " +
                                 std::to_string(worst) + ")");

  std::string trace = tmp("sum_drift.trc");
  SourceUnit cap_unit = load_analyzed(fixture("sum_drift.mf"));
  instrument(cap_unit);
  RunConfig cap;
  cap.mode = RunMode::Capture;
  cap.trace_path = trace;
  cap.env = parse_fp_environment("left,storage,aswritten,zero");
  RunSummary captured = run(cap_unit, cap);
  ok &= expect(captured.records > 0, "capture produced no records");

  SourceUnit cmp_unit = load_analyzed(fixture("sum_drift.mf"));
  instrument(cmp_unit);
  RunConfig cmp;
  cmp.mode = RunMode::Compare;
  cmp.trace_path = trace;
  cmp.env = parse_fp_environment("pairwise,extended,aswritten,zero");
  RunSummary compared = run(cmp_unit, cmp);
  ok &= expect(compared.exit_status == 0, "comparison exit status " +
                                              std::to_string(compared.exit_status));
  ok &= expect(compared.report.different == 0,
               std::to_string(compared.report.different) + " different values");
  ok &= expect(compared.report.similar >= 1, "no similar values absorbed");
  ok &= expect(compared.finals.at("s") == captured.finals.at("s"),
               "final sum drifted: " + compared.finals.at("s") + " vs " +
                   captured.finals.at("s"));
  return ok;
}

// ---------------------------------------------------------------------------
// 3. A subroutine that never writes its INTENT(INOUT) argument leaks the
//    caller's uninitialized fill; the single difference is pinned to the
//    CALL statement, and the corrected value keeps the rest of the run clean.
// ---------------------------------------------------------------------------

bool check_uninit_call_site() {
  std::string prog = tmp("case1.mf");
  std::string sites = tmp("case1.sites");
  std::string trace = tmp("case1.trc");
  std::string raw = tmp("case1.raw");
  std::string rendered = tmp("case1.report");
  bool ok = expect(
      cli("instrument '" + fixture("case1.mf") + "' -o '" + prog +
          "' --sites '" + sites + "'").status == 0,
      "instrument failed");
  ok &= expect(cli("run '" + prog +
                   "' --capture '" + trace +
                   "' --env left,storage,aswritten,space").status == 0,
               "capture failed");
  CmdResult cmp = cli("run '" + prog + "' --compare '" + trace +
                      "' --env left,storage,aswritten,seeded:7 --sites '" +
                      sites + "' --report '" + rendered + "' --report-raw '" +
                      raw + "'");
  ok &= expect(cmp.status == 1,
               "comparison exit status " + std::to_string(cmp.status));
  DifferenceReport rep = read_raw_report(raw);
  ok &= expect(rep.different == 1 && rep.entries.size() == 1,
               "expected exactly one difference, got " +
                   std::to_string(rep.different));
  if (!rep.entries.empty()) {
    const DiffEntry& e = rep.entries.front();
    ok &= expect(e.reference == "538976288",
                 "reference value was " + e.reference);
    ok &= expect(e.descriptor == "NEW_DOMDESC",
                 "descriptor was " + e.descriptor);
    SiteTable table = read_site_table(sites);
    const SiteEntry* site = table.find(e.site);
    ok &= expect(site && site->line == 4 && site->subprogram == "med_initialize",
                 "difference not pinned to the CALL statement");
  }
  std::string text = read_file(rendered);
  ok &= expect(contains(text, "NEW_DOMDESC = 538976288"),
               "rendered report misses the reference value");
  ok &= expect(contains(text, "MED_INITIALIZE line 4"),
               "rendered report misses the call site");
  ok &= expect(contains(text, "1 differences, 0 similar"),
               "rendered summary wrong: " + text);
  return ok;
}

// ---------------------------------------------------------------------------
// 4. Reversing short-circuit evaluation order changes which operands of an
//    IF condition run, so the traces diverge; hoisting the repeated function
//    call out of the condition makes the runs comparable again.
// ---------------------------------------------------------------------------

bool check_divergence_and_hoist() {
  std::string prog = tmp("case3.mf");
  std::string sites = tmp("case3.sites");
  std::string trace = tmp("case3.trc");
  std::string rendered = tmp("case3.report");
  bool ok = expect(
      cli("instrument '" + fixture("case3.mf") + "' -o '" + prog +
          "' --sites '" + sites + "'").status == 0,
      "instrument failed");
  ok &= expect(cli("run '" + prog + "' --capture '" + trace +
                   "' --env left,storage,aswritten,zero").status == 0,
               "capture failed");
  CmdResult cmp = cli("run '" + prog + "' --compare '" + trace +
                      "' --env left,storage,reversed,zero --sites '" + sites +
                      "' --report '" + rendered + "'");
  ok &= expect(cmp.status == 2,
               "comparison exit status " + std::to_string(cmp.status));
  std::string text = read_file(rendered);
  ok &= expect(contains(text, "Trace sequence error"),
               "no sequence-error block in report");
  ok &= expect(contains(text, "WRF_PUT_DOM_TI_INTEGER"),
               "expected record missing from report");
  ok &= expect(contains(text, "Encountered at site"),
               "encountered site missing from report");

  std::string hprog = tmp("case3_hoisted.mf");
  std::string hsites = tmp("case3_hoisted.sites");
  std::string htrace = tmp("case3_hoisted.trc");
  ok &= expect(cli("instrument '" + fixture("case3.mf") + "' -o '" + hprog +
                   "' --sites '" + hsites + "' --hoist-all").status == 0,
               "hoisting instrument failed");
  ok &= expect(contains(read_file(hprog), "i_use_package = use_package("),
               "hoisted temporary missing from output");
  ok &= expect(cli("run '" + hprog + "' --capture '" + htrace +
                   "' --env left,storage,aswritten,zero").status == 0,
               "hoisted capture failed");
  CmdResult hcmp = cli("run '" + hprog + "' --compare '" + htrace +
                       "' --env left,storage,reversed,zero");
  ok &= expect(hcmp.status == 0, "hoisted comparison exit status " +
                                     std::to_string(hcmp.status));
  return ok;
}

// ---------------------------------------------------------------------------
// 5. The value classifier agrees with a brute-force restatement of the
//    similarity rule on randomized inputs, including NaN and infinities.
// ---------------------------------------------------------------------------

Outcome oracle_classify(const TracedValue& c, double r, bool same_text,
                        const SimilarityPolicy& p) {
  double cv = c.r;
  if (std::isnan(cv) && std::isnan(r)) return Outcome::Identical;
  if (cv == r && std::signbit(cv) == std::signbit(r)) return Outcome::Identical;
  if (same_text) return Outcome::Identical;
  if (!std::isfinite(cv) || !std::isfinite(r)) return Outcome::Different;
  double diff = std::fabs(cv - r);
  if (diff <= p.rel_tol * std::fmax(std::fabs(cv), std::fabs(r)))
    return Outcome::Similar;
  if (diff <= p.abs_tol) return Outcome::Similar;
  return Outcome::Different;
}

bool check_classifier() {
  std::mt19937_64 rng(20260826);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> expo(-30, 30);
  long mismatches = 0;
  std::string first;
  for (int i = 0; i < 10000; ++i) {
    SimilarityPolicy p;
    p.rel_tol = (i % 2 == 0) ? 1.0e-3 : 1.0e-2;
    p.abs_tol = (i % 3 == 0) ? 1.0e-10 : 1.0e-6;
    p.compare_characters = true;
    int kind = i % 10;
    TracedValue computed;
    std::string ref_text, ref_type;
    Outcome want;
    if (kind < 6) {
      // real vs real, magnitudes spread over many decades plus specials
      auto draw = [&]() -> double {
        int special = (int)(unit(rng) * 20.0);
        if (special == 0) return std::nan("");
        if (special == 1) return HUGE_VAL;
        if (special == 2) return -HUGE_VAL;
        if (special == 3) return 0.0;
        double m = (unit(rng) * 2.0 - 1.0) * std::pow(10.0, expo(rng));
        return m;
      };
      double r = draw();
      double cv;
      int mode = (int)(unit(rng) * 4.0);
      if (mode == 0) cv = r;
      else if (mode == 1) cv = r * (1.0 + (unit(rng) * 2.0 - 1.0) * 3.0e-3);
      else if (mode == 2) cv = r + (unit(rng) * 2.0 - 1.0) * 1.0e-9;
      else cv = draw();
      bool dbl = i % 4 < 2;
      if (!dbl) {
        cv = (double)(float)cv;
        r = (double)(float)r;
      }
      computed = TracedValue::of_real(cv, dbl);
      ref_type = (i % 8 < 4) ? "r8" : "r4";
      ref_text = canonical_real(r);
      want = oracle_classify(computed, r, computed.canonical() == ref_text, p);
    } else if (kind < 8) {
      int32_t r = (int32_t)(rng() & 0xffff) - 0x8000;
      int32_t cv = (i % 3 == 0) ? r : r + 1;
      computed = TracedValue::of_int(cv);
      ref_type = "i4";
      ref_text = std::to_string(r);
      want = cv == r ? Outcome::Identical : Outcome::Different;
    } else if (kind == 8) {
      bool r = rng() & 1, cv = rng() & 1;
      computed = TracedValue::of_logical(cv);
      ref_type = "l4";
      ref_text = canonical_logical(r);
      want = cv == r ? Outcome::Identical : Outcome::Different;
    } else {
      std::string r = (rng() & 1) ? "alpha" : "beta";
      std::string cv = (rng() & 1) ? "alpha" : "beta";
      computed = TracedValue::of_char(cv);
      ref_type = "ch";
      ref_text = canonical_char(r);
      want = cv == r ? Outcome::Identical : Outcome::Different;
    }
    Outcome got = classify(computed, ref_text, ref_type, p);
    if (got != want) {
      ++mismatches;
      if (first.empty())
        first = "case " + std::to_string(i) + ": computed " +
                computed.canonical() + " vs " + ref_type + " " + ref_text;
    }
  }
  return expect(mismatches == 0,
                std::to_string(mismatches) + " mismatches; first: " + first);
}

// ---------------------------------------------------------------------------
// 6. A million-record trace survives a byte-exact round trip, and indexed
//    slices agree with a linear scan, within a time budget.
// ---------------------------------------------------------------------------

bool check_large_trace() {
  auto t0 = std::chrono::steady_clock::now();
  std::string path = tmp("big.trc");
  SimilarityPolicy policy;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0e6, 1.0e6);
  long total = 0;
  {
    CaptureSession session(path, policy);
    session.record(RecKind::Start, 1, "BIG", nullptr);
    for (long i = 1; i <= 1000000; ++i) {
      long site = 2 + (i % 50);
      if (i % 20000 == 0) {
        session.record(RecKind::Return, 1, "BIG", nullptr);
        session.record(RecKind::Start, 1, "BIG", nullptr);
        continue;
      }
      TracedValue v = (i % 5 == 0)
                          ? TracedValue::of_int((int32_t)(i & 0x7fffffff))
                          : TracedValue::of_real(dist(rng), i % 2 == 0);
      session.record(RecKind::Data, site, "v" + std::to_string(site), &v);
    }
    total = session.records_written();
    session.close();
  }
  bool ok = expect(total >= 1000000, "too few records written");

  std::vector<std::string> lines;
  lines.reserve(total + 1);
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  ok &= expect((long)lines.size() == total + 1, "line count mismatch");
  bool roundtrip = true;
  for (long seq = 1; seq <= total; ++seq) {
    TraceRecord rec = parse_record(lines[seq], seq + 1);
    std::string out = format_record(rec);
    while (!out.empty() && out.back() == '\n') out.pop_back();
    if (out != lines[seq] || rec.seq != seq) {
      roundtrip = false;
      g_notes.push_back("round trip broke at seq " + std::to_string(seq));
      break;
    }
  }
  ok &= roundtrip;

  TraceIndex index = build_index(path, 4096);
  ok &= expect(index.count == total, "index count mismatch");
  std::mt19937_64 pick(99);
  for (int i = 0; i < 100; ++i) {
    long from = 1 + (long)(pick() % (uint64_t)total);
    long to = std::min(total, from + (long)(pick() % 60));
    std::vector<TraceRecord> got = slice(path, index, from, to);
    if ((long)got.size() != to - from + 1) {
      ok &= expect(false, "slice size wrong for " + std::to_string(from) + ".." +
                              std::to_string(to));
      break;
    }
    for (long s = from; s <= to; ++s) {
      std::string out = format_record(got[s - from]);
      while (!out.empty() && out.back() == '\n') out.pop_back();
      if (out != lines[s]) {
        ok &= expect(false, "slice record mismatch at seq " + std::to_string(s));
        break;
      }
    }
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  ok &= expect(elapsed < 60, "took " + std::to_string(elapsed) + "s");
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Coverage counts the sites a trace visited; multiple traces union.
// ---------------------------------------------------------------------------

bool check_coverage() {
  std::string prog = tmp("covbranch.mf");
  std::string sites = tmp("covbranch.sites");
  std::string t_else = tmp("covbranch_else.trc");
  std::string t_then = tmp("covbranch_then.trc");
  bool ok = expect(
      cli("instrument '" + fixture("covbranch.mf") + "' -o '" + prog +
          "' --sites '" + sites + "'").status == 0,
      "instrument failed");
  // flag is read before being written: a zero fill takes the ELSE branch,
  // the space-pattern fill takes the THEN branch.
  ok &= expect(cli("run '" + prog + "' --capture '" + t_else +
                   "' --env left,storage,aswritten,zero").status == 0,
               "zero-fill capture failed");
  ok &= expect(cli("run '" + prog + "' --capture '" + t_then +
                   "' --env left,storage,aswritten,space").status == 0,
               "space-fill capture failed");
  CmdResult one = cli("coverage '" + t_else + "' --sites '" + sites + "'");
  ok &= expect(one.status == 0 && contains(one.output, "7 of 10 (70.0%)"),
               "single-branch coverage wrong: " + one.output);
  CmdResult both = cli("coverage '" + t_else + "' '" + t_then + "' --sites '" +
                       sites + "'");
  ok &= expect(both.status == 0 && contains(both.output, "10 of 10 (100.0%)"),
               "union coverage wrong: " + both.output);

  std::string sprog = tmp("straightline.mf");
  std::string ssites = tmp("straightline.sites");
  std::string strace = tmp("straightline.trc");
  ok &= expect(cli("instrument '" + fixture("straightline.mf") + "' -o '" +
                   sprog + "' --sites '" + ssites + "'").status == 0,
               "straightline instrument failed");
  ok &= expect(cli("run '" + sprog + "' --capture '" + strace + "'").status == 0,
               "straightline capture failed");
  CmdResult full = cli("coverage '" + strace + "' --sites '" + ssites + "'");
  ok &= expect(full.status == 0 && contains(full.output, "(100.0%)"),
               "straight-line coverage wrong: " + full.output);
  return ok;
}

// ---------------------------------------------------------------------------
// 8. Instrumentation never changes what a program computes, whatever the
//    evaluation environment.
// ---------------------------------------------------------------------------

bool check_transparency() {
  const char* progs[] = {"sum_drift.mf", "covbranch.mf", "dostep.mf"};
  const char* assocs[] = {"left", "right", "pairwise"};
  const char* fills[] = {"zero", "space", "seeded:1", "seeded:2"};
  bool ok = true;
  for (const char* prog : progs) {
    SourceUnit plain = load_analyzed(fixture(prog));
    SourceUnit traced = load_analyzed(fixture(prog));
    instrument(traced);
    for (const char* assoc : assocs) {
      for (const char* fill : fills) {
        RunConfig cfg;
        cfg.mode = RunMode::Plain;
        cfg.env = parse_fp_environment(std::string(assoc) +
                                       ",storage,aswritten," + fill);
        RunSummary a = run(plain, cfg);
        RunSummary b = run(traced, cfg);
        std::string label = std::string(prog) + " under " + assoc + "," + fill;
        ok &= expect(a.finals == b.finals, label + ": final values differ");
        ok &= expect(a.printed == b.printed, label + ": printed output differs");
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 9. The boundary-layer example instruments to the expected trace calls,
//    one per computed value, numbered in lexical order.
// ---------------------------------------------------------------------------

bool check_golden_instrumentation() {
  std::string out = tmp("acmpbl.mf");
  bool ok = expect(
      cli("instrument '" + fixture("acmpbl.mf") + "' -o '" + out + "'").status ==
          0,
      "instrument failed");
  std::string text = read_file(out);
  const char* expected[] = {
      "CALL trace_start_sub_program('PBL_DRIVER',1)",
      "CALL trace_r4_data('DTPBL',dtpbl,2)",
      "CALL trace_i4_data('I',i,3)",
      "CALL trace_start_sub_program('ACMPBL',6)",
      "CALL trace_r4_data('RDT',rdt,7)",
      "CALL trace_i4_data('K',k,8)",
      "CALL trace_r4_data('sigmaf(k-1)',sigmaf(k-1),9)",
      "CALL trace_r4_data('sigmaf(kte)',sigmaf(kte),10)",
  };
  size_t last = 0;
  for (const char* line : expected) {
    size_t pos = text.find(line);
    ok &= expect(pos != std::string::npos, std::string("missing: ") + line);
    if (pos != std::string::npos) {
      ok &= expect(pos >= last, std::string("out of order: ") + line);
      last = pos;
    }
  }
  size_t entry = text.find("CALL trace_start_sub_program('ACMPBL',6)");
  size_t body = text.find("rdt = 1.0 / dtpbl");
  ok &= expect(entry != std::string::npos && body != std::string::npos &&
                   entry < body,
               "entry trace call is not first in the subroutine body");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 2;
  }
  g_cli = argv[1];
  char tmpl[] = "/tmp/driftlens-acceptance-XXXXXX";
  if (!mkdtemp(tmpl)) {
    std::perror("mkdtemp");
    return 2;
  }
  g_dir = tmpl;

  run_check("self-comparison of every example reports no differences",
            check_self_comparison);
  run_check("reordered summation is absorbed as similar, never different",
            check_drift_removal);
  run_check("an uninitialized-argument difference is pinned to its call site",
            check_uninit_call_site);
  run_check("short-circuit reordering diverges and hoisting repairs it",
            check_divergence_and_hoist);
  run_check("classifier agrees with a brute-force rule on 10000 random cases",
            check_classifier);
  run_check("a million-record trace round-trips and slices via its index",
            check_large_trace);
  run_check("coverage reports one branch at 70% and the union at 100%",
            check_coverage);
  run_check("instrumentation leaves program results untouched",
            check_transparency);
  run_check("the boundary-layer example instruments to the expected calls",
            check_golden_instrumentation);

  std::error_code ec;
  fs::remove_all(g_dir, ec);
  if (g_failed) {
    std::printf("%d of 9 checks failed\n", g_failed);
    return 1;
  }
  std::printf("all 9 checks passed\n");
  return 0;
}
