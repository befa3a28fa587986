#include "driftlens/driftlens.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "hoist.hpp"
#include "instrument.hpp"
#include "interp.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "sema.hpp"
#include "tools.hpp"

using namespace driftlens;

struct dl_unit {
  SourceUnit unit;
  SiteTable sites;
  bool instrumented = false;
};

namespace {

char* dup_string(const std::string& s) {
  char* p = (char*)std::malloc(s.size() + 1);
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void set_err(char** err, const std::string& msg) {
  if (err) *err = dup_string(msg);
}

template <class F>
dl_status guarded(char** err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::string msg = error_kind_name(e.kind);
    if (e.loc.line) msg += strf(" at line %d", e.loc.line);
    msg += ": ";
    msg += e.what();
    set_err(err, msg);
    return DL_ERROR;
  } catch (const std::exception& e) {
    set_err(err, e.what());
    return DL_ERROR;
  }
}

FPEnvironment env_from_options(const dl_run_options& o) {
  FPEnvironment env;
  env.assoc = o.assoc == DL_ASSOC_RIGHT_TO_LEFT   ? AssocOrder::RightToLeft
              : o.assoc == DL_ASSOC_PAIRWISE_TREE ? AssocOrder::PairwiseTree
                                                  : AssocOrder::LeftToRight;
  env.precision = o.precision == DL_PRECISION_EXTENDED ? Precision::Extended
                                                       : Precision::Storage;
  env.shortcircuit = o.shortcircuit == DL_SHORTCIRCUIT_REVERSED
                         ? ShortCircuitOrder::Reversed
                         : ShortCircuitOrder::AsWritten;
  switch (o.uninit) {
    case DL_UNINIT_SPACE_PATTERN:
      env.uninit.kind = UninitFill::Kind::SpacePattern;
      break;
    case DL_UNINIT_SEEDED:
      env.uninit.kind = UninitFill::Kind::Seeded;
      env.uninit.seed = o.seed;
      break;
    default:
      env.uninit.kind = UninitFill::Kind::Zero;
      break;
  }
  return env;
}

}  // namespace

extern "C" {

void dl_run_options_init(dl_run_options* opts) {
  if (!opts) return;
  std::memset(opts, 0, sizeof(*opts));
  opts->mode = DL_RUN_PLAIN;
  opts->rel_tol = 1.0e-3;
  opts->abs_tol = 1.0e-10;
  opts->seed = 1;
}

dl_status dl_load(const char* const* paths, size_t n_paths, dl_unit** out,
                  char** err) {
  if (!paths || n_paths == 0 || !out) {
    set_err(err, "dl_load: paths and out must be non-null");
    return DL_ERROR;
  }
  *out = nullptr;
  return guarded(err, [&] {
    SourceUnit merged;
    for (size_t i = 0; i < n_paths; ++i) {
      SourceUnit one = parse_file(paths[i]);
      if (merged.path.empty()) merged.path = one.path;
      for (auto& item : one.items) merged.items.push_back(std::move(item));
    }
    analyze(merged);
    auto* u = new dl_unit;
    u->unit = std::move(merged);
    *out = u;
    return DL_OK;
  });
}

void dl_unit_free(dl_unit* unit) { delete unit; }

dl_status dl_hoist(dl_unit* unit, int line, char** err) {
  if (!unit) {
    set_err(err, "dl_hoist: null unit");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    rewrite_hoist_condition(unit->unit, line);
    return DL_OK;
  });
}

dl_status dl_instrument(dl_unit* unit, int trace_characters, char** err) {
  if (!unit) {
    set_err(err, "dl_instrument: null unit");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    InstrumentOptions opts;
    opts.trace_characters = trace_characters != 0;
    unit->sites = instrument(unit->unit, opts);
    unit->instrumented = true;
    return DL_OK;
  });
}

dl_status dl_emit(dl_unit* unit, char** out, char** err) {
  if (!unit || !out) {
    set_err(err, "dl_emit: null argument");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    *out = dup_string(emit_source(unit->unit));
    return DL_OK;
  });
}

dl_status dl_write_sites(dl_unit* unit, const char* path, char** err) {
  if (!unit || !path) {
    set_err(err, "dl_write_sites: null argument");
    return DL_ERROR;
  }
  if (!unit->instrumented) {
    set_err(err, "dl_write_sites: unit is not instrumented");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    write_site_table(unit->sites, path);
    return DL_OK;
  });
}

dl_status dl_run(dl_unit* unit, const dl_run_options* opts, dl_run_stats* stats,
                 char** err) {
  if (!unit || !opts) {
    set_err(err, "dl_run: null argument");
    return DL_ERROR;
  }
  return guarded(err, [&]() -> dl_status {
    RunConfig cfg;
    cfg.mode = opts->mode == DL_RUN_CAPTURE   ? RunMode::Capture
               : opts->mode == DL_RUN_COMPARE ? RunMode::Compare
                                              : RunMode::Plain;
    if (cfg.mode != RunMode::Plain) {
      if (!opts->trace_path)
        throw Error(ErrorKind::Usage, "capture/compare needs a trace path");
      cfg.trace_path = opts->trace_path;
    }
    cfg.policy.rel_tol = opts->rel_tol;
    cfg.policy.abs_tol = opts->abs_tol;
    cfg.policy.compare_characters = opts->compare_characters != 0;
    cfg.env = env_from_options(*opts);
    if (opts->entry) cfg.entry = opts->entry;
    if (opts->max_records > 0) cfg.max_records = opts->max_records;

    RunSummary summary = run(unit->unit, cfg);

    if (opts->echo_print)
      for (const auto& line : summary.printed)
        std::fprintf(stdout, "%s\n", line.c_str());

    if (opts->raw_report_path && cfg.mode == RunMode::Compare)
      write_raw_report(summary.report, opts->raw_report_path);
    if (opts->report_path && cfg.mode == RunMode::Compare) {
      SiteTable sites = opts->sites_path ? read_site_table(opts->sites_path)
                                         : unit->sites;
      std::string text = render_report(summary.report, sites);
      std::ofstream f(opts->report_path, std::ios::binary);
      if (!f)
        throw Error(ErrorKind::Io,
                    strf("cannot write '%s'", opts->report_path));
      f << text;
    }

    if (stats) {
      stats->records = summary.records;
      stats->identical = summary.report.identical;
      stats->similar = summary.report.similar;
      stats->different = summary.report.different;
      stats->diverged = summary.report.divergence.has_value() ? 1 : 0;
      stats->exit_status = summary.exit_status;
    }
    switch (summary.exit_status) {
      case 1: return DL_DIFFERENCES;
      case 2: return DL_DIVERGENCE;
      default: return DL_OK;
    }
  });
}

dl_status dl_trace_index(const char* trace_path, long k, char** err) {
  if (!trace_path) {
    set_err(err, "dl_trace_index: null path");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    TraceIndex idx = build_index(trace_path, k > 0 ? k : 4096);
    write_index(idx, std::string(trace_path) + ".idx");
    return DL_OK;
  });
}

dl_status dl_trace_slice(const char* trace_path, long from_seq, long to_seq,
                         char** out, char** err) {
  if (!trace_path || !out) {
    set_err(err, "dl_trace_slice: null argument");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    TraceIndex idx = build_index(trace_path);
    std::string text;
    for (const TraceRecord& rec : slice(trace_path, idx, from_seq, to_seq))
      text += format_record(rec);
    *out = dup_string(text);
    return DL_OK;
  });
}

dl_status dl_trace_inspect(const char* trace_path, char** out, char** err) {
  if (!trace_path || !out) {
    set_err(err, "dl_trace_inspect: null argument");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    *out = dup_string(render_index(build_index(trace_path)));
    return DL_OK;
  });
}

dl_status dl_coverage(const char* const* trace_paths, size_t n_traces,
                      const char* sites_path, char** out, char** err) {
  if (!trace_paths || n_traces == 0 || !sites_path || !out) {
    set_err(err, "dl_coverage: null argument");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    SiteTable sites = read_site_table(sites_path);
    std::vector<std::string> paths(trace_paths, trace_paths + n_traces);
    CoverageReport rep = coverage(paths, sites);
    *out = dup_string(render_coverage(rep, sites));
    return DL_OK;
  });
}

dl_status dl_render_report(const char* raw_report_path, const char* sites_path,
                           char** out, char** err) {
  if (!raw_report_path || !sites_path || !out) {
    set_err(err, "dl_render_report: null argument");
    return DL_ERROR;
  }
  return guarded(err, [&] {
    DifferenceReport report = read_raw_report(raw_report_path);
    SiteTable sites = read_site_table(sites_path);
    *out = dup_string(render_report(report, sites));
    return DL_OK;
  });
}

void dl_free(char* p) { std::free(p); }

const char* dl_version(void) { return "0.1.0"; }

}  // extern "C"
