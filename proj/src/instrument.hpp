#pragma once

#include <string>
#include <vector>

#include "ast.hpp"

namespace driftlens {

struct InstrumentOptions {
  // Character assignments are skipped by default; most character values in
  // real codes are file names that legitimately differ between runs.
  bool trace_characters = false;
  // First id to assign; lets multi-file runs continue numbering.
  long first_site_id = 1;
};

struct SiteEntry {
  long id = 0;
  std::string subprogram;  // lower-cased name
  int line = 0;            // line of the original statement
  std::string descriptor;  // lvalue text, or subprogram name for entries
  std::string typecode;    // i4/r4/r8/l4/ch, or "sp" for entry sites
};

struct SiteTable {
  std::vector<SiteEntry> entries;  // sorted by id

  const SiteEntry* find(long id) const;
  size_t size() const { return entries.size(); }
};

// Inserts a trace call after every assignment (and after every CALL for its
// INTENT(INOUT) arguments), a loop-variable trace at the top of each DO body,
// and a start call at each subprogram entry. Site ids are assigned in lexical
// order and the transform is deterministic. Refuses units that already
// contain trace calls.
SiteTable instrument(SourceUnit& unit, const InstrumentOptions& opts = {});

// Site table sidecar: `DRIFTLENS-SITES v1` then tab-separated
// id, subprogram, line, descriptor, typecode.
void write_site_table(const SiteTable& table, const std::string& path);
SiteTable read_site_table(const std::string& path);

// Builds the descriptor text for a traced lvalue: scalar names are
// upper-cased, array elements keep their written spelling.
std::string trace_descriptor(const Expr& lvalue);

}  // namespace driftlens
