#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "diag.hpp"

namespace driftlens {

enum class RecKind { Data, Start, Return };

// One traced value in wire form. Reals of any storage kind are carried as
// double so runs using different kinds compare in one format.
struct TracedValue {
  std::string typecode;  // i4, r4, r8, l4, ch
  int32_t i = 0;
  double r = 0.0;
  bool l = false;
  std::string ch;

  static TracedValue of_int(int32_t v);
  static TracedValue of_real(double v, bool is_double);
  static TracedValue of_logical(bool v);
  static TracedValue of_char(std::string v);

  std::string canonical() const;
  bool is_real() const { return typecode == "r4" || typecode == "r8"; }
};

struct TraceRecord {
  long seq = 0;
  RecKind kind = RecKind::Data;
  long site = 0;
  std::string descriptor;  // lvalue text, or subprogram name for Start/Return
  std::string typecode;    // Data only
  std::string value;       // canonical text, Data only

  double real_value() const;  // parses `value` for r4/r8 records
};

struct SimilarityPolicy {
  double rel_tol = 1.0e-3;   // 0.1%
  double abs_tol = 1.0e-10;
  bool compare_characters = false;
};

// Canonical scalar renderings.
std::string canonical_real(double v);   // +1.00000000000000000E+00, NaN, +Inf
std::string canonical_logical(bool v);  // T / F
std::string canonical_char(const std::string& v);
std::optional<double> parse_canonical_real(const std::string& s);

// Wire format, one record per LF-terminated line.
std::string format_record(const TraceRecord& rec);
TraceRecord parse_record(const std::string& line, long line_no);

std::string format_trace_header(const SimilarityPolicy& policy);
SimilarityPolicy parse_trace_header(const std::string& line);

const char* rec_kind_letter(RecKind k);

}  // namespace driftlens
