#ifndef DRIFTLENS_H
#define DRIFTLENS_H

/* C interface to the driftlens library: load MiniFort sources, instrument
 * them with trace calls, run them (plain, capture or compare mode) and work
 * with the resulting trace files.
 *
 * Every function returns a dl_status. On DL_ERROR an error message is
 * allocated into *err when err is non-NULL; release it with dl_free().
 * Strings returned through char** out-parameters are also released with
 * dl_free(). Handles are opaque and single-threaded.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dl_status {
  DL_OK = 0,          /* success; compare run saw no significant difference */
  DL_DIFFERENCES = 1, /* compare run reported significant differences */
  DL_DIVERGENCE = 2,  /* compare run halted: execution sequences diverged */
  DL_ERROR = 3        /* usage, parse, semantic or I/O failure */
} dl_status;

typedef struct dl_unit dl_unit; /* a parsed and analyzed source unit */

typedef enum dl_assoc_order {
  DL_ASSOC_LEFT_TO_RIGHT = 0,
  DL_ASSOC_RIGHT_TO_LEFT = 1,
  DL_ASSOC_PAIRWISE_TREE = 2
} dl_assoc_order;

typedef enum dl_precision {
  DL_PRECISION_STORAGE = 0,
  DL_PRECISION_EXTENDED = 1
} dl_precision;

typedef enum dl_shortcircuit_order {
  DL_SHORTCIRCUIT_AS_WRITTEN = 0,
  DL_SHORTCIRCUIT_REVERSED = 1
} dl_shortcircuit_order;

typedef enum dl_uninit_fill {
  DL_UNINIT_ZERO = 0,
  DL_UNINIT_SPACE_PATTERN = 1,
  DL_UNINIT_SEEDED = 2
} dl_uninit_fill;

typedef enum dl_run_mode {
  DL_RUN_PLAIN = 0,   /* execute only; trace calls are no-ops */
  DL_RUN_CAPTURE = 1, /* write the reference trace */
  DL_RUN_COMPARE = 2  /* replay against the reference trace */
} dl_run_mode;

typedef struct dl_run_options {
  dl_run_mode mode;
  const char* trace_path; /* capture/compare */
  double rel_tol;         /* default 1.0e-3 */
  double abs_tol;         /* default 1.0e-10 */
  int compare_characters; /* default 0 */
  dl_assoc_order assoc;
  dl_precision precision;
  dl_shortcircuit_order shortcircuit;
  dl_uninit_fill uninit;
  unsigned long long seed;   /* DL_UNINIT_SEEDED only */
  int echo_print;            /* write the program's PRINT output to stdout */
  const char* entry;         /* PROGRAM name; NULL = the unit's only one */
  long max_records;          /* 0 = unlimited */
  const char* report_path;   /* rendered report; NULL = skip */
  const char* sites_path;    /* site table, needed for report_path */
  const char* raw_report_path; /* machine-readable report; NULL = skip */
} dl_run_options;

void dl_run_options_init(dl_run_options* opts);

typedef struct dl_run_stats {
  long records;   /* trace records written or compared */
  long identical;
  long similar;
  long different;
  int diverged;
  int exit_status; /* 0, 1 or 2 as for dl_status */
} dl_run_stats;

/* Parses and analyzes one or more source files into a unit. */
dl_status dl_load(const char* const* paths, size_t n_paths, dl_unit** out,
                  char** err);
void dl_unit_free(dl_unit* unit);

/* Rewrites IF conditions so calls shared by every operand run exactly once.
 * line selects the IF to rewrite; pass 0 for all eligible conditions. */
dl_status dl_hoist(dl_unit* unit, int line, char** err);

/* Inserts trace calls and assigns site ids. Fails if already instrumented. */
dl_status dl_instrument(dl_unit* unit, int trace_characters, char** err);

/* Renders the unit back to source text. */
dl_status dl_emit(dl_unit* unit, char** out, char** err);

/* Writes the site table produced by dl_instrument. */
dl_status dl_write_sites(dl_unit* unit, const char* path, char** err);

/* Runs the unit. The return value doubles as the run's exit status:
 * DL_OK, DL_DIFFERENCES or DL_DIVERGENCE for a completed compare run,
 * DL_ERROR on failure. stats may be NULL. */
dl_status dl_run(dl_unit* unit, const dl_run_options* opts,
                 dl_run_stats* stats, char** err);

/* Builds the `<trace>.idx` sidecar; k is the checkpoint interval
 * (0 = default 4096). */
dl_status dl_trace_index(const char* trace_path, long k, char** err);

/* Renders records from_seq..to_seq, one wire-format line each. */
dl_status dl_trace_slice(const char* trace_path, long from_seq, long to_seq,
                         char** out, char** err);

/* One-paragraph trace summary: record count, sites, subprogram spans. */
dl_status dl_trace_inspect(const char* trace_path, char** out, char** err);

/* Union execution coverage of the given traces against a site table. */
dl_status dl_coverage(const char* const* trace_paths, size_t n_traces,
                      const char* sites_path, char** out, char** err);

/* Renders a machine-readable report file into readable text. */
dl_status dl_render_report(const char* raw_report_path, const char* sites_path,
                           char** out, char** err);

void dl_free(char* p);
const char* dl_version(void);

#ifdef __cplusplus
}
#endif

#endif /* DRIFTLENS_H */
