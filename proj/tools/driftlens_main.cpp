// driftlens command-line driver. Links only the public C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "driftlens/driftlens.h"

namespace {

int report_error(char* err) {
  if (err) {
    std::cerr << "driftlens: " << err << "\n";
    dl_free(err);
  } else {
    std::cerr << "driftlens: unknown error\n";
  }
  return 3;
}

struct UnitGuard {
  dl_unit* u = nullptr;
  ~UnitGuard() { dl_unit_free(u); }
};

std::vector<const char*> c_paths(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << text;
  return f.good();
}

// Shared flag bundle for run/compare.
struct RunFlags {
  std::string capture, compare;
  std::string env = "left,storage,aswritten,zero";
  std::string preset;
  double rel = 1.0e-3;
  double abs = 1.0e-10;
  bool chars = false;
  std::string entry;
  long max_records = 0;
  std::string report, report_raw, sites;
};

void add_policy_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--env", f.env,
                  "environment 4-tuple assoc,precision,shortcircuit,uninit "
                  "(left|right|pairwise, storage|extended, "
                  "aswritten|reversed, zero|space|seeded[:N])");
  cmd->add_option("--env-preset", f.preset,
                  "named environment preset (A or B)");
  cmd->add_option("--rel", f.rel, "relative tolerance (default 0.001)");
  cmd->add_option("--abs", f.abs, "absolute tolerance (default 1.0E-10)");
  cmd->add_flag("--chars", f.chars, "compare character values too");
  cmd->add_option("--entry", f.entry, "PROGRAM to start from");
  cmd->add_option("--max-records", f.max_records,
                  "stop after this many trace records");
  cmd->add_option("--report", f.report,
                  "write the readable report here instead of standard output");
  cmd->add_option("--report-raw", f.report_raw,
                  "write the machine-readable report here");
  cmd->add_option("--sites", f.sites,
                  "site table for report rendering");
}

bool parse_env(const RunFlags& f, dl_run_options& o) {
  std::string spec = f.env;
  if (!f.preset.empty()) {
    if (f.preset == "A" || f.preset == "a")
      spec = "left,storage,aswritten,space";
    else if (f.preset == "B" || f.preset == "b")
      spec = "pairwise,extended,reversed,zero";
    else {
      std::cerr << "driftlens: unknown preset '" << f.preset << "'\n";
      return false;
    }
  }
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ',') { parts.push_back(cur); cur.clear(); }
    else cur.push_back(c);
  }
  parts.push_back(cur);
  if (parts.size() != 4) {
    std::cerr << "driftlens: --env needs 4 comma-separated fields\n";
    return false;
  }
  if (parts[0] == "left") o.assoc = DL_ASSOC_LEFT_TO_RIGHT;
  else if (parts[0] == "right") o.assoc = DL_ASSOC_RIGHT_TO_LEFT;
  else if (parts[0] == "pairwise") o.assoc = DL_ASSOC_PAIRWISE_TREE;
  else { std::cerr << "driftlens: bad association order '" << parts[0] << "'\n"; return false; }
  if (parts[1] == "storage") o.precision = DL_PRECISION_STORAGE;
  else if (parts[1] == "extended") o.precision = DL_PRECISION_EXTENDED;
  else { std::cerr << "driftlens: bad precision '" << parts[1] << "'\n"; return false; }
  if (parts[2] == "aswritten") o.shortcircuit = DL_SHORTCIRCUIT_AS_WRITTEN;
  else if (parts[2] == "reversed") o.shortcircuit = DL_SHORTCIRCUIT_REVERSED;
  else { std::cerr << "driftlens: bad short-circuit order '" << parts[2] << "'\n"; return false; }
  const std::string& u = parts[3];
  if (u == "zero") o.uninit = DL_UNINIT_ZERO;
  else if (u == "space") o.uninit = DL_UNINIT_SPACE_PATTERN;
  else if (u.rfind("seeded", 0) == 0) {
    o.uninit = DL_UNINIT_SEEDED;
    if (u.size() > 6 && u[6] == ':')
      o.seed = std::strtoull(u.c_str() + 7, nullptr, 10);
    else if (u.size() > 6) {
      std::cerr << "driftlens: bad uninitialized fill '" << u << "'\n";
      return false;
    }
  } else {
    std::cerr << "driftlens: bad uninitialized fill '" << u << "'\n";
    return false;
  }
  return true;
}

int do_run(const std::vector<std::string>& inputs, const RunFlags& f) {
  if (!f.capture.empty() && !f.compare.empty()) {
    std::cerr << "driftlens: --capture and --compare are mutually exclusive\n";
    return 3;
  }
  dl_run_options o;
  dl_run_options_init(&o);
  if (!parse_env(f, o)) return 3;
  o.rel_tol = f.rel;
  o.abs_tol = f.abs;
  o.compare_characters = f.chars ? 1 : 0;
  o.echo_print = 1;
  if (!f.entry.empty()) o.entry = f.entry.c_str();
  o.max_records = f.max_records;
  if (!f.capture.empty()) {
    o.mode = DL_RUN_CAPTURE;
    o.trace_path = f.capture.c_str();
  } else if (!f.compare.empty()) {
    o.mode = DL_RUN_COMPARE;
    o.trace_path = f.compare.c_str();
  }

  // Keep a raw report around so the readable one can be rendered after the
  // run; drop it again unless the user asked for it.
  std::string raw_path = f.report_raw;
  bool temp_raw = false;
  if (o.mode == DL_RUN_COMPARE && raw_path.empty()) {
    raw_path = f.compare + ".rawreport.tmp";
    temp_raw = true;
  }
  if (!raw_path.empty()) o.raw_report_path = raw_path.c_str();

  UnitGuard g;
  char* err = nullptr;
  auto paths = c_paths(inputs);
  if (dl_load(paths.data(), paths.size(), &g.u, &err) != DL_OK)
    return report_error(err);

  dl_run_stats stats;
  dl_status rc = dl_run(g.u, &o, &stats, &err);
  if (rc == DL_ERROR) {
    if (temp_raw) std::remove(raw_path.c_str());
    return report_error(err);
  }

  if (o.mode == DL_RUN_COMPARE) {
    if (!f.sites.empty()) {
      char* text = nullptr;
      if (dl_render_report(raw_path.c_str(), f.sites.c_str(), &text, &err) !=
          DL_OK) {
        if (temp_raw) std::remove(raw_path.c_str());
        return report_error(err);
      }
      if (f.report.empty()) {
        std::cout << text;
      } else if (!write_file(f.report, text)) {
        std::cerr << "driftlens: cannot write '" << f.report << "'\n";
        dl_free(text);
        if (temp_raw) std::remove(raw_path.c_str());
        return 3;
      }
      dl_free(text);
    } else {
      std::cout << stats.different << " different, " << stats.similar
                << " similar, " << stats.identical << " identical";
      if (stats.diverged) std::cout << ", sequence divergence";
      std::cout << "\n";
    }
    if (temp_raw) std::remove(raw_path.c_str());
  } else if (o.mode == DL_RUN_CAPTURE) {
    std::cerr << stats.records << " records captured\n";
  }
  return (int)rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relative-debugging toolkit: trace, compare and de-drift "
               "MiniFort programs"};
  app.require_subcommand(1);

  // instrument
  auto* inst = app.add_subcommand(
      "instrument", "insert trace calls and write the site table");
  std::vector<std::string> inst_inputs;
  std::string inst_out, inst_sites;
  bool inst_chars = false, inst_hoist_all = false;
  int inst_hoist_line = 0;
  inst->add_option("inputs", inst_inputs, "source files")->required();
  inst->add_option("-o,--output", inst_out,
                   "instrumented source output (default: standard output)");
  inst->add_option("--sites", inst_sites, "site table output path");
  inst->add_flag("--chars", inst_chars, "trace character assignments too");
  inst->add_option("--hoist-line", inst_hoist_line,
                   "hoist the IF condition at this line first");
  inst->add_flag("--hoist-all", inst_hoist_all,
                 "hoist every eligible IF condition first");

  // run / compare
  auto* runc = app.add_subcommand("run", "execute an instrumented program");
  std::vector<std::string> run_inputs;
  RunFlags run_flags;
  runc->add_option("inputs", run_inputs, "instrumented source files")
      ->required();
  runc->add_option("--capture", run_flags.capture,
                   "write the reference trace to this path");
  runc->add_option("--compare", run_flags.compare,
                   "replay against this reference trace");
  add_policy_flags(runc, run_flags);

  auto* cmpc = app.add_subcommand(
      "compare", "replay a program against a reference trace");
  std::string cmp_input;
  std::string cmp_trace;
  RunFlags cmp_flags;
  cmpc->add_option("input", cmp_input, "instrumented source file")->required();
  cmpc->add_option("trace", cmp_trace, "reference trace")->required();
  add_policy_flags(cmpc, cmp_flags);

  // report
  auto* repc = app.add_subcommand(
      "report", "render a machine-readable report as text");
  std::string rep_raw, rep_sites, rep_out;
  repc->add_option("raw", rep_raw, "machine-readable report file")->required();
  repc->add_option("--sites", rep_sites, "site table")->required();
  repc->add_option("-o,--output", rep_out,
                   "output path (default: standard output)");

  // coverage
  auto* covc = app.add_subcommand(
      "coverage", "execution coverage of one or more traces");
  std::vector<std::string> cov_traces;
  std::string cov_sites;
  covc->add_option("traces", cov_traces, "trace files")->required();
  covc->add_option("--sites", cov_sites, "site table")->required();

  // trace index/slice/inspect
  auto* trc = app.add_subcommand("trace", "inspect, index or slice a trace");
  trc->require_subcommand(1);
  auto* trc_index = trc->add_subcommand("index", "build the .idx sidecar");
  std::string ti_path;
  long ti_k = 4096;
  trc_index->add_option("trace", ti_path, "trace file")->required();
  trc_index->add_option("--every", ti_k, "checkpoint interval");
  auto* trc_slice = trc->add_subcommand("slice", "print a record range");
  std::string ts_path;
  long ts_from = 1, ts_to = 1;
  trc_slice->add_option("trace", ts_path, "trace file")->required();
  trc_slice->add_option("--from", ts_from, "first sequence number")->required();
  trc_slice->add_option("--to", ts_to, "last sequence number")->required();
  auto* trc_inspect = trc->add_subcommand("inspect", "summarize a trace");
  std::string tn_path;
  trc_inspect->add_option("trace", tn_path, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  char* err = nullptr;
  if (*inst) {
    UnitGuard g;
    auto paths = c_paths(inst_inputs);
    if (dl_load(paths.data(), paths.size(), &g.u, &err) != DL_OK)
      return report_error(err);
    if (inst_hoist_all || inst_hoist_line > 0) {
      if (dl_hoist(g.u, inst_hoist_all ? 0 : inst_hoist_line, &err) != DL_OK)
        return report_error(err);
    }
    if (dl_instrument(g.u, inst_chars ? 1 : 0, &err) != DL_OK)
      return report_error(err);
    char* text = nullptr;
    if (dl_emit(g.u, &text, &err) != DL_OK) return report_error(err);
    if (inst_out.empty()) {
      std::cout << text;
    } else if (!write_file(inst_out, text)) {
      std::cerr << "driftlens: cannot write '" << inst_out << "'\n";
      dl_free(text);
      return 3;
    }
    dl_free(text);
    if (!inst_sites.empty() &&
        dl_write_sites(g.u, inst_sites.c_str(), &err) != DL_OK)
      return report_error(err);
    return 0;
  }

  if (*runc) return do_run(run_inputs, run_flags);

  if (*cmpc) {
    cmp_flags.compare = cmp_trace;
    return do_run({cmp_input}, cmp_flags);
  }

  if (*repc) {
    char* text = nullptr;
    if (dl_render_report(rep_raw.c_str(), rep_sites.c_str(), &text, &err) !=
        DL_OK)
      return report_error(err);
    if (rep_out.empty()) {
      std::cout << text;
    } else if (!write_file(rep_out, text)) {
      std::cerr << "driftlens: cannot write '" << rep_out << "'\n";
      dl_free(text);
      return 3;
    }
    dl_free(text);
    return 0;
  }

  if (*covc) {
    auto paths = c_paths(cov_traces);
    char* text = nullptr;
    if (dl_coverage(paths.data(), paths.size(), cov_sites.c_str(), &text,
                    &err) != DL_OK)
      return report_error(err);
    std::cout << text;
    dl_free(text);
    return 0;
  }

  if (*trc_index) {
    if (dl_trace_index(ti_path.c_str(), ti_k, &err) != DL_OK)
      return report_error(err);
    std::cerr << "wrote " << ti_path << ".idx\n";
    return 0;
  }
  if (*trc_slice) {
    char* text = nullptr;
    if (dl_trace_slice(ts_path.c_str(), ts_from, ts_to, &text, &err) != DL_OK)
      return report_error(err);
    std::cout << text;
    dl_free(text);
    return 0;
  }
  if (*trc_inspect) {
    char* text = nullptr;
    if (dl_trace_inspect(tn_path.c_str(), &text, &err) != DL_OK)
      return report_error(err);
    std::cout << text;
    dl_free(text);
    return 0;
  }

  return 3;
}
