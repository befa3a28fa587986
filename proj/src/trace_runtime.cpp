#include "trace_runtime.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace driftlens {

Outcome classify(const TracedValue& computed, const std::string& reference_text,
                 const std::string& reference_typecode,
                 const SimilarityPolicy& policy) {
  std::string ctext = computed.canonical();
  if (computed.typecode == reference_typecode && ctext == reference_text)
    return Outcome::Identical;
  if (!computed.is_real() || !(reference_typecode == "r4" ||
                               reference_typecode == "r8"))
    return Outcome::Different;

  // Reals of either kind compare in the consistent double format. Identical
  // canonical text was already handled, which also covers NaN == NaN.
  auto ref = parse_canonical_real(reference_text);
  if (!ref) return Outcome::Different;
  double c = computed.r;
  double r = *ref;
  if (canonical_real(c) == reference_text) return Outcome::Identical;
  if (!std::isfinite(c) || !std::isfinite(r)) return Outcome::Different;
  double diff = std::fabs(c - r);
  if (diff <= policy.rel_tol * std::fmax(std::fabs(c), std::fabs(r)))
    return Outcome::Similar;
  if (diff <= policy.abs_tol) return Outcome::Similar;
  return Outcome::Different;
}

// ---------------------------------------------------------------------------
// Capture
// ---------------------------------------------------------------------------

CaptureSession::CaptureSession(const std::string& path, SimilarityPolicy policy)
    : out_(path, std::ios::binary), path_(path), policy_(policy) {
  if (!out_) throw Error(ErrorKind::Io, strf("cannot write '%s'", path.c_str()));
  out_ << format_trace_header(policy_);
}

long CaptureSession::record(RecKind kind, long site,
                            const std::string& descriptor,
                            const TracedValue* value) {
  if (kind == RecKind::Data) {
    if (!value)
      throw Error(ErrorKind::Usage, "data record needs a value");
    if (value->typecode == "ch" && !policy_.compare_characters) return 0;
  }
  TraceRecord rec;
  rec.kind = kind;
  rec.seq = ++seq_;
  rec.site = site;
  rec.descriptor = descriptor;
  if (kind == RecKind::Data) {
    rec.typecode = value->typecode;
    rec.value = value->canonical();
  }
  out_ << format_record(rec);
  if (!out_)
    throw Error(ErrorKind::Io, strf("write failed on '%s'", path_.c_str()));
  return seq_;
}

void CaptureSession::close() {
  if (out_.is_open()) {
    out_.close();
    if (out_.fail())
      throw Error(ErrorKind::Io, strf("close failed on '%s'", path_.c_str()));
  }
}

// ---------------------------------------------------------------------------
// Compare
// ---------------------------------------------------------------------------

CompareSession::CompareSession(const std::string& path, SimilarityPolicy policy)
    : in_(path, std::ios::binary), path_(path), policy_(policy) {
  if (!in_) throw Error(ErrorKind::Io, strf("cannot open '%s'", path.c_str()));
  std::string header;
  if (!std::getline(in_, header))
    fail(ErrorKind::Format, {}, strf("'%s' is empty", path.c_str()));
  header_policy_ = parse_trace_header(header);
  header_mismatch_ = header_policy_.rel_tol != policy_.rel_tol ||
                     header_policy_.abs_tol != policy_.abs_tol ||
                     header_policy_.compare_characters !=
                         policy_.compare_characters;
}

std::optional<TraceRecord> CompareSession::next_record() {
  if (pending_) {
    auto rec = std::move(pending_);
    pending_.reset();
    return rec;
  }
  std::string line;
  if (!std::getline(in_, line)) {
    at_eof_ = true;
    return std::nullopt;
  }
  ++line_no_;
  TraceRecord rec = parse_record(line, line_no_);
  if (rec.seq != next_seq_)
    fail(ErrorKind::Format, SourceLoc{(int)line_no_, 0},
         strf("trace line %ld: seq %ld, expected %ld", line_no_, rec.seq,
              next_seq_));
  ++next_seq_;
  return rec;
}

void CompareSession::mark_divergence(const std::optional<TraceRecord>& expected,
                                     RecKind enc_kind, long enc_site,
                                     const std::string& enc_descriptor) {
  SeqDivergence div;
  if (expected) {
    div.expected = *expected;
    div.expected_file_line = line_no_;
  } else {
    div.reference_exhausted = true;
    div.expected_file_line = line_no_;
  }
  div.encountered_kind = enc_kind;
  div.encountered_site = enc_site;
  div.encountered_descriptor = enc_descriptor;
  report_.divergence = div;
}

CompareResult CompareSession::compare(RecKind kind, long site,
                                      const std::string& descriptor,
                                      const TracedValue& computed) {
  if (report_.divergence)
    throw Error(ErrorKind::Usage, "session already diverged");
  auto rec = next_record();
  if (!rec || rec->kind != kind || rec->site != site) {
    mark_divergence(rec, kind, site, descriptor);
    return {Outcome::SequenceDivergence, {}};
  }
  ++compared_;
  Outcome out = classify(computed, rec->value, rec->typecode, policy_);
  CompareResult res;
  res.outcome = out;
  if (out == Outcome::Identical) {
    ++report_.identical;
    return res;
  }
  // Similar and Different both hand back the reference value so the caller
  // overwrites the program variable and the analysis can continue.
  TracedValue ref;
  ref.typecode = rec->typecode;
  if (rec->typecode == "i4") ref.i = (int32_t)std::strtol(rec->value.c_str(), nullptr, 10);
  else if (rec->typecode == "l4") ref.l = rec->value == "T";
  else if (rec->typecode == "ch") {
    // strip quotes, undouble
    std::string v = rec->value;
    std::string outv;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
      outv.push_back(v[i]);
      if (v[i] == '\'' && i + 2 < v.size() && v[i + 1] == '\'') ++i;
    }
    ref.ch = outv;
  } else {
    ref.r = rec->real_value();
  }
  res.reference = ref;
  if (out == Outcome::Similar) {
    ++report_.similar;
  } else {
    ++report_.different;
    DiffEntry e;
    e.site = site;
    e.seq = rec->seq;
    e.file_line = line_no_;
    e.descriptor = descriptor;
    e.typecode = rec->typecode;
    e.computed = computed.canonical();
    e.reference = rec->value;
    report_.entries.push_back(std::move(e));
  }
  return res;
}

Outcome CompareSession::compare_marker(RecKind kind, long site,
                                       const std::string& name) {
  if (report_.divergence)
    throw Error(ErrorKind::Usage, "session already diverged");
  auto rec = next_record();
  if (!rec || rec->kind != kind || rec->site != site) {
    mark_divergence(rec, kind, site, name);
    return Outcome::SequenceDivergence;
  }
  ++compared_;
  ++report_.identical;
  return Outcome::Identical;
}

DifferenceReport CompareSession::finalize() {
  if (!finalized_) {
    finalized_ = true;
    if (!report_.divergence) {
      // A run that ends while reference records remain did not follow the
      // reference path either.
      auto rec = next_record();
      if (rec) {
        pending_ = rec;
        SeqDivergence div;
        div.expected = *rec;
        div.expected_file_line = line_no_;
        div.encountered_kind = RecKind::Return;
        div.encountered_site = 0;
        div.encountered_descriptor = "<end of run>";
        report_.divergence = div;
      }
    }
  }
  return report_;
}

// ---------------------------------------------------------------------------
// Raw report sidecar
// ---------------------------------------------------------------------------

void write_raw_report(const DifferenceReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, strf("cannot write '%s'", path.c_str()));
  out << "DRIFTLENS-REPORT v1 identical=" << report.identical
      << " similar=" << report.similar << " different=" << report.different
      << "\n";
  for (const auto& e : report.entries) {
    // Tab-separated: character values may contain spaces.
    out << "V\t" << e.site << '\t' << e.seq << '\t' << e.file_line << '\t'
        << e.descriptor << '\t' << e.typecode << '\t' << e.computed << '\t'
        << e.reference << '\n';
  }
  if (report.divergence) {
    const auto& d = *report.divergence;
    out << "Q " << (d.reference_exhausted ? 1 : 0) << ' ' << d.expected.seq
        << ' ' << rec_kind_letter(d.expected.kind) << ' ' << d.expected.site << ' '
        << (d.expected.descriptor.empty() ? "-" : d.expected.descriptor) << ' '
        << (d.expected.value.empty() ? "-" : d.expected.value) << ' '
        << d.expected_file_line << ' ' << rec_kind_letter(d.encountered_kind)
        << ' ' << d.encountered_site << ' ' << d.encountered_descriptor << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, strf("write failed on '%s'", path.c_str()));
}

DifferenceReport read_raw_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, strf("cannot open '%s'", path.c_str()));
  std::string line;
  if (!std::getline(in, line) || line.rfind("DRIFTLENS-REPORT v1 ", 0) != 0)
    fail(ErrorKind::Format, {}, strf("'%s' is not a driftlens report", path.c_str()));
  DifferenceReport rep;
  std::sscanf(line.c_str(), "DRIFTLENS-REPORT v1 identical=%ld similar=%ld different=%ld",
              &rep.identical, &rep.similar, &rep.different);
  long n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string tag;
    iss >> tag;
    if (tag == "V") {
      std::vector<std::string> f;
      size_t start = 0;
      for (size_t t = line.find('\t'); t != std::string::npos;
           t = line.find('\t', start)) {
        f.push_back(line.substr(start, t - start));
        start = t + 1;
      }
      f.push_back(line.substr(start));
      if (f.size() != 8)
        fail(ErrorKind::Format, SourceLoc{(int)n, 0}, "bad report entry");
      DiffEntry e;
      e.site = std::atol(f[1].c_str());
      e.seq = std::atol(f[2].c_str());
      e.file_line = std::atol(f[3].c_str());
      e.descriptor = f[4];
      e.typecode = f[5];
      e.computed = f[6];
      e.reference = f[7];
      rep.entries.push_back(std::move(e));
    } else if (tag == "Q") {
      SeqDivergence d;
      int exhausted;
      std::string ek, nk, edesc, eval;
      iss >> exhausted >> d.expected.seq >> ek >> d.expected.site >> edesc >>
          eval >> d.expected_file_line >> nk >> d.encountered_site;
      if (!iss) fail(ErrorKind::Format, SourceLoc{(int)n, 0}, "bad divergence entry");
      // Descriptor is the rest of the line; it may contain spaces.
      std::getline(iss, d.encountered_descriptor);
      if (!d.encountered_descriptor.empty() &&
          d.encountered_descriptor.front() == ' ')
        d.encountered_descriptor.erase(0, 1);
      d.reference_exhausted = exhausted != 0;
      d.expected.kind = ek == "S" ? RecKind::Start
                        : ek == "R" ? RecKind::Return
                                    : RecKind::Data;
      d.encountered_kind = nk == "S" ? RecKind::Start
                           : nk == "R" ? RecKind::Return
                                       : RecKind::Data;
      d.expected.descriptor = edesc == "-" ? "" : edesc;
      d.expected.value = eval == "-" ? "" : eval;
      rep.divergence = d;
    } else {
      fail(ErrorKind::Format, SourceLoc{(int)n, 0},
           strf("unknown report tag '%s'", tag.c_str()));
    }
  }
  return rep;
}

}  // namespace driftlens
