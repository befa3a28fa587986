#include "trace_format.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <vector>

namespace driftlens {

TracedValue TracedValue::of_int(int32_t v) {
  TracedValue t;
  t.typecode = "i4";
  t.i = v;
  return t;
}

TracedValue TracedValue::of_real(double v, bool is_double) {
  TracedValue t;
  t.typecode = is_double ? "r8" : "r4";
  t.r = v;
  return t;
}

TracedValue TracedValue::of_logical(bool v) {
  TracedValue t;
  t.typecode = "l4";
  t.l = v;
  return t;
}

TracedValue TracedValue::of_char(std::string v) {
  TracedValue t;
  t.typecode = "ch";
  t.ch = std::move(v);
  return t;
}

std::string canonical_real(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "+Inf" : "-Inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%+.17E", v);
  return buf;
}

std::string canonical_logical(bool v) { return v ? "T" : "F"; }

std::string canonical_char(const std::string& v) {
  std::string out = "'";
  for (char c : v) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  out.push_back('\'');
  return out;
}

std::optional<double> parse_canonical_real(const std::string& s) {
  if (s == "NaN") return std::nan("");
  if (s == "+Inf") return HUGE_VAL;
  if (s == "-Inf") return -HUGE_VAL;
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::string TracedValue::canonical() const {
  if (typecode == "i4") return std::to_string(i);
  if (typecode == "l4") return canonical_logical(l);
  if (typecode == "ch") return canonical_char(ch);
  return canonical_real(r);
}

double TraceRecord::real_value() const {
  auto v = parse_canonical_real(value);
  return v ? *v : std::nan("");
}

const char* rec_kind_letter(RecKind k) {
  switch (k) {
    case RecKind::Data: return "D";
    case RecKind::Start: return "S";
    case RecKind::Return: return "R";
  }
  return "?";
}

std::string format_record(const TraceRecord& rec) {
  std::ostringstream os;
  os << rec_kind_letter(rec.kind) << ' ' << rec.seq << ' ' << rec.site << ' '
     << rec.descriptor;
  if (rec.kind == RecKind::Data) os << ' ' << rec.typecode << ' ' << rec.value;
  os << '\n';
  return os.str();
}

namespace {

[[noreturn]] void bad_record(long line_no, const std::string& why) {
  fail(ErrorKind::Format, SourceLoc{(int)line_no, 0},
       strf("trace line %ld: %s", line_no, why.c_str()));
}

std::vector<std::string> split_fields(const std::string& line, size_t max_fields) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < line.size() && out.size() + 1 < max_fields) {
    size_t sp = line.find(' ', pos);
    if (sp == std::string::npos) break;
    out.push_back(line.substr(pos, sp - pos));
    pos = sp + 1;
  }
  out.push_back(line.substr(pos));
  return out;
}

long parse_long(const std::string& s, long line_no, const char* what) {
  if (s.empty()) bad_record(line_no, strf("missing %s", what));
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size())
    bad_record(line_no, strf("bad %s '%s'", what, s.c_str()));
  return v;
}

}  // namespace

TraceRecord parse_record(const std::string& line, long line_no) {
  if (line.empty()) bad_record(line_no, "empty record");
  TraceRecord rec;
  char k = line[0];
  if (k == 'D') rec.kind = RecKind::Data;
  else if (k == 'S') rec.kind = RecKind::Start;
  else if (k == 'R') rec.kind = RecKind::Return;
  else bad_record(line_no, strf("unknown record kind '%c'", k));
  if (line.size() < 2 || line[1] != ' ') bad_record(line_no, "truncated record");
  std::string rest = line.substr(2);

  if (rec.kind == RecKind::Data) {
    auto f = split_fields(rest, 5);
    if (f.size() != 5) bad_record(line_no, "data record needs 5 fields");
    rec.seq = parse_long(f[0], line_no, "seq");
    rec.site = parse_long(f[1], line_no, "site");
    rec.descriptor = f[2];
    rec.typecode = f[3];
    rec.value = f[4];
    if (rec.typecode != "i4" && rec.typecode != "r4" && rec.typecode != "r8" &&
        rec.typecode != "l4" && rec.typecode != "ch")
      bad_record(line_no, strf("unknown typecode '%s'", rec.typecode.c_str()));
    if (rec.value.empty()) bad_record(line_no, "data record without a value");
    if ((rec.typecode == "r4" || rec.typecode == "r8") &&
        !parse_canonical_real(rec.value))
      bad_record(line_no, strf("bad real value '%s'", rec.value.c_str()));
    if (rec.typecode == "l4" && rec.value != "T" && rec.value != "F")
      bad_record(line_no, strf("bad logical value '%s'", rec.value.c_str()));
    if (rec.typecode == "i4") parse_long(rec.value, line_no, "integer value");
  } else {
    auto f = split_fields(rest, 3);
    if (f.size() != 3) bad_record(line_no, "marker record needs 3 fields");
    rec.seq = parse_long(f[0], line_no, "seq");
    rec.site = parse_long(f[1], line_no, "site");
    rec.descriptor = f[2];
    if (rec.descriptor.empty()) bad_record(line_no, "marker without a name");
    if (rec.descriptor.find(' ') != std::string::npos)
      bad_record(line_no, "marker name contains a space");
  }
  if (rec.seq <= 0) bad_record(line_no, "seq must be positive");
  return rec;
}

std::string format_trace_header(const SimilarityPolicy& policy) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "DRIFTLENS-TRACE v1 rel=%.3E abs=%.3E ch=%d\n",
                policy.rel_tol, policy.abs_tol, policy.compare_characters ? 1 : 0);
  return buf;
}

SimilarityPolicy parse_trace_header(const std::string& line) {
  static const char prefix[] = "DRIFTLENS-TRACE ";
  if (line.rfind(prefix, 0) != 0)
    fail(ErrorKind::Format, {}, "not a driftlens trace file");
  std::istringstream iss(line.substr(sizeof(prefix) - 1));
  std::string version, rel, abs, ch;
  iss >> version >> rel >> abs >> ch;
  if (version != "v1")
    fail(ErrorKind::UnsupportedVersion, {},
         strf("unsupported trace version '%s'", version.c_str()));
  SimilarityPolicy p;
  if (rel.rfind("rel=", 0) != 0 || abs.rfind("abs=", 0) != 0 ||
      ch.rfind("ch=", 0) != 0)
    fail(ErrorKind::Format, {}, "malformed trace header");
  p.rel_tol = std::strtod(rel.c_str() + 4, nullptr);
  p.abs_tol = std::strtod(abs.c_str() + 4, nullptr);
  p.compare_characters = ch == "ch=1";
  return p;
}

}  // namespace driftlens
