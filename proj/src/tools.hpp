#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "instrument.hpp"
#include "trace_runtime.hpp"

namespace driftlens {

// -- indexing ----------------------------------------------------------------

struct SubSpan {
  long first_seq = 0;
  long last_seq = 0;
};

struct TraceIndex {
  long count = 0;
  long checkpoint_every = 4096;
  // seq -> byte offset of its line; seq 1 and every K-th record after.
  std::vector<std::pair<long, long>> checkpoints;
  std::map<long, long> site_counts;
  std::map<std::string, SubSpan> sub_spans;  // from Start/Return records
};

// Single streaming pass; memory stays bounded by the checkpoint list.
TraceIndex build_index(const std::string& trace_path, long every = 4096);

// Sidecar `<trace>.idx`: `DRIFTLENS-IDX v1 k=<K>` then `<seq> <offset>`.
void write_index(const TraceIndex& index, const std::string& path);
TraceIndex read_index(const std::string& path);

// Records from_seq..to_seq inclusive, seeking via the nearest checkpoint.
std::vector<TraceRecord> slice(const std::string& trace_path,
                               const TraceIndex& index, long from_seq,
                               long to_seq);

// One-paragraph summary for `trace inspect`.
std::string render_index(const TraceIndex& index);

// -- difference reports ------------------------------------------------------

// Human-readable rendering; needs the site table to show code locations.
std::string render_report(const DifferenceReport& report, const SiteTable& sites);

// -- coverage ----------------------------------------------------------------

struct SubCoverage {
  long total = 0;
  long visited = 0;
};

struct CoverageReport {
  long total_sites = 0;
  long visited_sites = 0;
  double percentage = 0.0;  // 100*visited/total, one-decimal precision
  std::map<std::string, SubCoverage> by_subprogram;
  std::vector<long> never_visited;
};

// Union of sites visited over all given traces.
CoverageReport coverage(const std::vector<std::string>& trace_paths,
                        const SiteTable& sites);

std::string render_coverage(const CoverageReport& report, const SiteTable& sites);

}  // namespace driftlens
