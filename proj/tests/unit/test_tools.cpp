#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "tools.hpp"

using namespace driftlens;

namespace {

// Writes a synthetic but well-formed trace with `n` data records.
std::string make_trace(const std::string& name, long n) {
  std::string path = testutil::temp_path(name);
  SimilarityPolicy p;
  CaptureSession cap(path, p);
  cap.record(RecKind::Start, 1, "P", nullptr);
  for (long i = 2; i <= n - 1; ++i) {
    TracedValue v = TracedValue::of_real(1.0 / (double)i, true);
    cap.record(RecKind::Data, (i % 7) + 2, strf("x(%ld)", i), &v);
  }
  cap.record(RecKind::Return, 1, "P", nullptr);
  cap.close();
  return path;
}

std::vector<TraceRecord> scan_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string line;
  std::getline(in, line);
  std::vector<TraceRecord> out;
  long n = 2;
  while (std::getline(in, line)) out.push_back(parse_record(line, n++));
  return out;
}

}  // namespace

TEST_CASE("a three-record file indexes with one checkpoint") {
  std::string path = make_trace("idx3.trc", 3);
  TraceIndex idx = build_index(path);
  CHECK(idx.count == 3);
  REQUIRE(idx.checkpoints.size() == 1);
  CHECK(idx.checkpoints[0].first == 1);
}

TEST_CASE("checkpoints appear every K records") {
  std::string path = make_trace("idxk.trc", 1000);
  TraceIndex idx = build_index(path, 100);
  CHECK(idx.count == 1000);
  REQUIRE(idx.checkpoints.size() == 10);
  CHECK(idx.checkpoints[1].first == 101);
  CHECK(idx.sub_spans.at("P").first_seq == 1);
  CHECK(idx.sub_spans.at("P").last_seq == 1000);
}

TEST_CASE("slices agree with a linear scan") {
  std::string path = make_trace("slice.trc", 500);
  TraceIndex idx = build_index(path, 64);
  auto all = scan_all(path);
  for (auto [from, to] : {std::pair<long, long>{1, 500},
                          {100, 120},
                          {499, 500},
                          {65, 65}}) {
    auto part = slice(path, idx, from, to);
    REQUIRE((long)part.size() == to - from + 1);
    for (long i = 0; i < (long)part.size(); ++i)
      CHECK(format_record(part[i]) == format_record(all[from - 1 + i]));
  }
}

TEST_CASE("slices outside the record range are rejected") {
  std::string path = make_trace("slicerange.trc", 10);
  TraceIndex idx = build_index(path);
  CHECK_THROWS_AS(slice(path, idx, 0, 5), Error);
  CHECK_THROWS_AS(slice(path, idx, 5, 3), Error);
  try {
    slice(path, idx, 11, 12);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::Range);
  }
}

TEST_CASE("a corrupted line is a format error naming the line") {
  std::string path = make_trace("corrupt.trc", 50);
  std::string text = testutil::read_file(path);
  // Break the typecode of a record in the middle.
  size_t pos = text.find(" r8 ", text.size() / 2);
  REQUIRE(pos != std::string::npos);
  text[pos + 1] = 'q';
  std::ofstream(path, std::ios::binary) << text;
  try {
    build_index(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::Format);
    CHECK(e.loc.line > 1);
  }
}

TEST_CASE("index sidecars round-trip") {
  std::string path = make_trace("sidecar.trc", 300);
  TraceIndex idx = build_index(path, 50);
  write_index(idx, path + ".idx");
  TraceIndex r = read_index(path + ".idx");
  CHECK(r.checkpoint_every == 50);
  REQUIRE(r.checkpoints.size() == idx.checkpoints.size());
  CHECK(r.checkpoints.back() == idx.checkpoints.back());
}

TEST_CASE("value errors render as the expected block") {
  SiteTable sites;
  sites.entries.push_back({4, "med_initialize", 12, "NEW_DOMDESC", "i4"});
  DifferenceReport rep;
  rep.identical = 6;
  rep.different = 1;
  DiffEntry e;
  e.site = 4;
  e.seq = 9;
  e.file_line = 24468;
  e.descriptor = "NEW_DOMDESC";
  e.typecode = "i4";
  e.computed = "148443456";
  e.reference = "538976288";
  rep.entries.push_back(e);
  std::string text = render_report(rep, sites);
  CHECK(text.find("!*** Trace value error:") != std::string::npos);
  CHECK(text.find("148443456") != std::string::npos);
  CHECK(text.find("NEW_DOMDESC = 538976288") != std::string::npos);
  CHECK(text.find("24468") != std::string::npos);
  // Rendering is deterministic.
  CHECK(render_report(rep, sites) == text);
}

TEST_CASE("an empty report renders as a single summary line") {
  SiteTable sites;
  DifferenceReport rep;
  CHECK(render_report(rep, sites) == "0 differences\n");
}

TEST_CASE("reports with unknown sites are refused") {
  SiteTable sites;
  DifferenceReport rep;
  DiffEntry e;
  e.site = 99;
  rep.entries.push_back(e);
  try {
    render_report(rep, sites);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind == ErrorKind::UnknownSite);
  }
}

TEST_CASE("a start-of-subprogram mismatch renders its own block") {
  SiteTable sites;
  sites.entries.push_back({6, "esmf_timecopy", 3, "ESMF_TIMECOPY", "sp"});
  DifferenceReport rep;
  SeqDivergence d;
  d.expected.seq = 9;
  d.expected.kind = RecKind::Data;
  d.expected.site = 5;
  d.expected.descriptor = "STOPTIME";
  d.expected.typecode = "i4";
  d.expected.value = "0";
  d.expected_file_line = 9608;
  d.encountered_kind = RecKind::Start;
  d.encountered_site = 6;
  d.encountered_descriptor = "esmf_timecopy";
  rep.divergence = d;
  std::string text = render_report(rep, sites);
  CHECK(text.find("!*** Trace error at start of sub-program: ESMF_TIMECOPY") !=
        std::string::npos);
  CHECK(text.find("STOPTIME = 0") != std::string::npos);
}

TEST_CASE("coverage arithmetic and union behavior") {
  SiteTable sites;
  for (long i = 1; i <= 10; ++i)
    sites.entries.push_back({i, i <= 5 ? "alpha" : "beta", (int)i, "X", "i4"});

  auto write_visiting = [&](const std::string& name,
                            std::vector<long> visited) {
    std::string path = testutil::temp_path(name);
    SimilarityPolicy p;
    CaptureSession cap(path, p);
    for (long s : visited) {
      TracedValue v = TracedValue::of_int(1);
      cap.record(RecKind::Data, s, "X", &v);
    }
    cap.close();
    return path;
  };

  std::string t7 = write_visiting("cov7.trc", {1, 2, 3, 4, 5, 6, 7});
  std::string t3 = write_visiting("cov3.trc", {8, 9, 10});
  std::string tall =
      write_visiting("covall.trc", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});

  CoverageReport r7 = coverage({t7}, sites);
  CHECK(r7.visited_sites == 7);
  CHECK(r7.percentage == doctest::Approx(70.0));
  CHECK(r7.by_subprogram.at("alpha").visited == 5);
  CHECK(r7.by_subprogram.at("beta").visited == 2);
  CHECK(r7.never_visited == std::vector<long>({8, 9, 10}));

  CoverageReport r3 = coverage({t3}, sites);
  CHECK(r3.percentage == doctest::Approx(30.0));

  CoverageReport runion = coverage({t7, t3}, sites);
  CHECK(runion.percentage == doctest::Approx(100.0));
  CHECK(runion.percentage > r7.percentage);
  CHECK(runion.percentage > r3.percentage);

  CHECK(coverage({tall}, sites).percentage == doctest::Approx(100.0));
}

TEST_CASE("coverage rejects traces with sites missing from the table") {
  SiteTable sites;
  sites.entries.push_back({1, "p", 1, "X", "i4"});
  std::string path = testutil::temp_path("covbad.trc");
  SimilarityPolicy p;
  CaptureSession cap(path, p);
  TracedValue v = TracedValue::of_int(1);
  cap.record(RecKind::Data, 2, "X", &v);
  cap.close();
  try {
    coverage({path}, sites);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::SiteMismatch);
  }
}
