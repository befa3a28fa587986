#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "trace_format.hpp"

namespace driftlens {

enum class Outcome { Identical, Similar, Different, SequenceDivergence };

// Classifies a computed scalar against the reference record value.
// Reals: similar when |c-r| <= rel*max(|c|,|r|) or |c-r| <= abs.
// Integers, logicals and characters must match exactly. Two NaNs are
// identical; NaN or Inf against anything else is different.
Outcome classify(const TracedValue& computed, const std::string& reference_text,
                 const std::string& reference_typecode,
                 const SimilarityPolicy& policy);

struct DiffEntry {
  long site = 0;
  long seq = 0;
  long file_line = 0;  // line in the reference trace file
  std::string descriptor;
  std::string typecode;
  std::string computed;   // canonical text
  std::string reference;  // canonical text
};

struct SeqDivergence {
  bool reference_exhausted = false;
  TraceRecord expected;       // meaningless when reference_exhausted
  long expected_file_line = 0;
  RecKind encountered_kind = RecKind::Data;
  long encountered_site = 0;
  std::string encountered_descriptor;
};

struct DifferenceReport {
  std::vector<DiffEntry> entries;
  std::optional<SeqDivergence> divergence;
  long identical = 0;
  long similar = 0;
  long different = 0;

  int exit_status() const {
    if (divergence) return 2;
    return different > 0 ? 1 : 0;
  }
};

// Machine-readable report sidecar, re-renderable with a site table.
void write_raw_report(const DifferenceReport& report, const std::string& path);
DifferenceReport read_raw_report(const std::string& path);

// ---------------------------------------------------------------------------
// Capture
// ---------------------------------------------------------------------------

class CaptureSession {
 public:
  CaptureSession(const std::string& path, SimilarityPolicy policy);

  // Appends one record; returns the seq assigned, or 0 when the record was
  // suppressed (character data under compare_characters=false).
  long record(RecKind kind, long site, const std::string& descriptor,
              const TracedValue* value);

  long records_written() const { return seq_; }
  const SimilarityPolicy& policy() const { return policy_; }
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  SimilarityPolicy policy_;
  long seq_ = 0;
};

// ---------------------------------------------------------------------------
// Compare
// ---------------------------------------------------------------------------

struct CompareResult {
  Outcome outcome;
  // Reference value for Similar/Different; the caller stores it back into
  // the program variable so the analysis can continue without drift.
  TracedValue reference;
};

class CompareSession {
 public:
  // The supplied policy wins over the header's snapshot; a mismatch is
  // remembered so drivers can log it.
  CompareSession(const std::string& path, SimilarityPolicy policy);

  // Data comparison: suppressed character sites must not call this.
  CompareResult compare(RecKind kind, long site, const std::string& descriptor,
                        const TracedValue& computed);
  // Start/Return markers: outcome is Identical or SequenceDivergence.
  Outcome compare_marker(RecKind kind, long site, const std::string& name);

  bool diverged() const { return report_.divergence.has_value(); }
  // Records the end of the run; remaining unread reference records count as
  // a divergence at end of run.
  DifferenceReport finalize();

  long records_compared() const { return compared_; }
  const SimilarityPolicy& policy() const { return policy_; }
  bool header_policy_mismatch() const { return header_mismatch_; }
  const SimilarityPolicy& header_policy() const { return header_policy_; }

 private:
  std::optional<TraceRecord> next_record();
  void mark_divergence(const std::optional<TraceRecord>& expected,
                       RecKind enc_kind, long enc_site,
                       const std::string& enc_descriptor);

  std::ifstream in_;
  std::string path_;
  SimilarityPolicy policy_;
  SimilarityPolicy header_policy_;
  bool header_mismatch_ = false;
  long line_no_ = 1;  // header consumed
  long next_seq_ = 1;
  long compared_ = 0;
  std::optional<TraceRecord> pending_;
  long pending_line_ = 0;
  bool at_eof_ = false;
  DifferenceReport report_;
  bool finalized_ = false;
};

}  // namespace driftlens
