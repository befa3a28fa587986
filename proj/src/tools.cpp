#include "tools.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace driftlens {

namespace {

std::ifstream open_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, strf("cannot open trace '%s'", path.c_str()));
  return in;
}

const char* kind_text(RecKind k) {
  switch (k) {
    case RecKind::Start: return "Start sub-program";
    case RecKind::Return: return "Return from sub-program";
    default: return "Value";
  }
}

}  // namespace

TraceIndex build_index(const std::string& trace_path, long every) {
  if (every < 1)
    throw Error(ErrorKind::Usage, "index interval must be at least 1");
  std::ifstream in = open_trace(trace_path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::Format, strf("'%s' is empty", trace_path.c_str()));
  parse_trace_header(line);

  TraceIndex idx;
  idx.checkpoint_every = every;
  long offset = (long)line.size() + 1;
  long line_no = 2;
  while (std::getline(in, line)) {
    if (line.empty() && in.peek() == EOF) break;
    TraceRecord rec = parse_record(line, line_no);
    if (rec.seq != idx.count + 1)
      throw Error(ErrorKind::Format,
                  strf("line %ld: sequence number %ld, expected %ld", line_no,
                       rec.seq, idx.count + 1));
    if ((rec.seq - 1) % every == 0) idx.checkpoints.push_back({rec.seq, offset});
    idx.site_counts[rec.site]++;
    if (rec.kind == RecKind::Start) {
      auto& span = idx.sub_spans[rec.descriptor];
      if (span.first_seq == 0) span.first_seq = rec.seq;
      span.last_seq = rec.seq;
    } else if (rec.kind == RecKind::Return) {
      idx.sub_spans[rec.descriptor].last_seq = rec.seq;
    }
    idx.count = rec.seq;
    offset += (long)line.size() + 1;
    ++line_no;
  }
  return idx;
}

void write_index(const TraceIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, strf("cannot write '%s'", path.c_str()));
  out << "DRIFTLENS-IDX v1 k=" << index.checkpoint_every << "\n";
  for (const auto& [seq, off] : index.checkpoints)
    out << seq << " " << off << "\n";
}

TraceIndex read_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, strf("cannot open '%s'", path.c_str()));
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::Format, strf("'%s' is empty", path.c_str()));
  long k = 0;
  if (std::sscanf(line.c_str(), "DRIFTLENS-IDX v1 k=%ld", &k) != 1 || k < 1) {
    if (line.rfind("DRIFTLENS-IDX", 0) == 0)
      throw Error(ErrorKind::UnsupportedVersion,
                  strf("unsupported index header: %s", line.c_str()));
    throw Error(ErrorKind::Format, strf("bad index header: %s", line.c_str()));
  }
  TraceIndex idx;
  idx.checkpoint_every = k;
  long line_no = 2;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long seq = 0, off = 0;
    if (std::sscanf(line.c_str(), "%ld %ld", &seq, &off) != 2)
      throw Error(ErrorKind::Format,
                  strf("index line %ld: expected `seq offset`", line_no));
    idx.checkpoints.push_back({seq, off});
    ++line_no;
  }
  if (!idx.checkpoints.empty()) idx.count = idx.checkpoints.back().first;
  return idx;
}

std::vector<TraceRecord> slice(const std::string& trace_path,
                               const TraceIndex& index, long from_seq,
                               long to_seq) {
  if (from_seq < 1 || from_seq > to_seq || to_seq > index.count)
    throw Error(ErrorKind::Range,
                strf("slice %ld..%ld is outside 1..%ld", from_seq, to_seq,
                     index.count));
  // Greatest checkpoint at or before from_seq.
  long start_seq = 1;
  long start_off = -1;
  for (const auto& [seq, off] : index.checkpoints) {
    if (seq > from_seq) break;
    start_seq = seq;
    start_off = off;
  }
  std::ifstream in = open_trace(trace_path);
  std::string line;
  if (start_off >= 0) {
    in.seekg(start_off);
  } else {
    std::getline(in, line);  // skip the header
  }
  std::vector<TraceRecord> out;
  long seq = start_seq;
  while (seq <= to_seq && std::getline(in, line)) {
    TraceRecord rec = parse_record(line, seq + 1);
    if (rec.seq != seq)
      throw Error(ErrorKind::Format,
                  strf("expected sequence number %ld, found %ld", seq, rec.seq));
    if (seq >= from_seq) out.push_back(std::move(rec));
    ++seq;
  }
  if (seq <= to_seq)
    throw Error(ErrorKind::Format,
                strf("trace ended before sequence number %ld", to_seq));
  return out;
}

std::string render_index(const TraceIndex& index) {
  std::ostringstream os;
  os << index.count << " records, " << index.site_counts.size()
     << " distinct sites, checkpoint every " << index.checkpoint_every
     << " records\n";
  for (const auto& [name, span] : index.sub_spans)
    os << "  " << to_upper(name) << ": seq " << span.first_seq << ".."
       << span.last_seq << "\n";
  return os.str();
}

// -- difference reports ------------------------------------------------------

namespace {

const SiteEntry& site_or_throw(const SiteTable& sites, long id) {
  const SiteEntry* e = sites.find(id);
  if (!e)
    throw Error(ErrorKind::UnknownSite,
                strf("site %ld is not in the site table", id));
  return *e;
}

}  // namespace

std::string render_report(const DifferenceReport& report, const SiteTable& sites) {
  std::ostringstream os;
  for (const auto& d : report.entries) {
    const SiteEntry& site = site_or_throw(sites, d.site);
    os << "!*** Trace value error:\n";
    os << strf("!Value computed: %14s\n", d.computed.c_str());
    os << strf("!Trace file line: %8ld  %s = %s\n", d.file_line,
               d.descriptor.c_str(), d.reference.c_str());
    os << strf("!Site %ld: %s line %d\n", d.site,
               to_upper(site.subprogram).c_str(), site.line);
  }
  if (report.divergence) {
    const SeqDivergence& q = *report.divergence;
    if (!q.reference_exhausted && q.expected.kind == RecKind::Data &&
        q.encountered_kind == RecKind::Start) {
      site_or_throw(sites, q.encountered_site);
      os << "!*** Trace error at start of sub-program: "
         << to_upper(q.encountered_descriptor) << "\n";
      os << strf("!Trace file line: %8ld  %s = %s\n", q.expected_file_line,
                 q.expected.descriptor.c_str(), q.expected.value.c_str());
    } else if (q.reference_exhausted) {
      os << "!*** Trace sequence error:\n";
      os << "!Reference trace exhausted\n";
      os << strf("!Encountered at site %ld: %s: %s\n", q.encountered_site,
                 kind_text(q.encountered_kind),
                 q.encountered_descriptor.c_str());
    } else {
      os << "!*** Trace sequence error:\n";
      os << strf("!Sequence number reached: %10ld\n", q.expected.seq);
      if (q.expected.kind == RecKind::Data) {
        os << strf("!Trace line: %ld %ld  %s = %s\n", q.expected_file_line,
                   q.expected.site, q.expected.descriptor.c_str(),
                   q.expected.value.c_str());
      } else {
        os << strf("!Trace line: %ld %ld %s:\n", q.expected_file_line,
                   q.expected.site, kind_text(q.expected.kind));
        os << "!\n";
        os << strf("!%33s\n", to_upper(q.expected.descriptor).c_str());
      }
      if (q.encountered_descriptor == "<end of run>") {
        os << strf("!Encountered: end of run\n");
      } else {
        os << strf("!Encountered at site %ld: %s: %s\n", q.encountered_site,
                   kind_text(q.encountered_kind),
                   q.encountered_descriptor.c_str());
      }
    }
  }
  if (report.entries.empty() && !report.divergence) {
    os << "0 differences\n";
  } else {
    os << strf("%ld differences, %ld similar, %ld identical\n",
               report.different, report.similar, report.identical);
  }
  return os.str();
}

// -- coverage ----------------------------------------------------------------

CoverageReport coverage(const std::vector<std::string>& trace_paths,
                        const SiteTable& sites) {
  std::set<long> visited;
  for (const auto& path : trace_paths) {
    std::ifstream in = open_trace(path);
    std::string line;
    if (!std::getline(in, line))
      throw Error(ErrorKind::Format, strf("'%s' is empty", path.c_str()));
    parse_trace_header(line);
    long line_no = 2;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      TraceRecord rec = parse_record(line, line_no++);
      if (!sites.find(rec.site))
        throw Error(ErrorKind::SiteMismatch,
                    strf("'%s' visits site %ld, which is not in the site table",
                         path.c_str(), rec.site));
      visited.insert(rec.site);
    }
  }
  CoverageReport rep;
  rep.total_sites = (long)sites.size();
  for (const auto& e : sites.entries) {
    rep.by_subprogram[e.subprogram].total++;
    if (visited.count(e.id)) {
      rep.by_subprogram[e.subprogram].visited++;
      rep.visited_sites++;
    } else {
      rep.never_visited.push_back(e.id);
    }
  }
  if (rep.total_sites > 0)
    rep.percentage =
        std::round(1000.0 * rep.visited_sites / rep.total_sites) / 10.0;
  return rep;
}

std::string render_coverage(const CoverageReport& report, const SiteTable& sites) {
  std::ostringstream os;
  os << strf("Sites visited: %ld of %ld (%.1f%%)\n", report.visited_sites,
             report.total_sites, report.percentage);
  for (const auto& [name, c] : report.by_subprogram)
    os << strf("  %s: %ld of %ld\n", to_upper(name).c_str(), c.visited,
               c.total);
  if (!report.never_visited.empty()) {
    os << "Never visited:\n";
    for (long id : report.never_visited) {
      const SiteEntry* e = sites.find(id);
      os << strf("  %ld  %s line %d  %s\n", id,
                 e ? to_upper(e->subprogram).c_str() : "?", e ? e->line : 0,
                 e ? e->descriptor.c_str() : "");
    }
  }
  return os.str();
}

}  // namespace driftlens
