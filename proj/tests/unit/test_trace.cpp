#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "trace_runtime.hpp"

using namespace driftlens;

TEST_CASE("canonical real renderings") {
  CHECK(canonical_real(1.0) == "+1.00000000000000000E+00");
  CHECK(canonical_real(-2.5) == "-2.50000000000000000E+00");
  CHECK(canonical_real(0.0) == "+0.00000000000000000E+00");
  CHECK(canonical_real(std::nan("")) == "NaN");
  CHECK(canonical_real(HUGE_VAL) == "+Inf");
  CHECK(canonical_real(-HUGE_VAL) == "-Inf");
  CHECK(parse_canonical_real("+1.00000000000000000E+00") == 1.0);
  CHECK(std::isnan(*parse_canonical_real("NaN")));
}

TEST_CASE("record formatting matches the wire examples") {
  TraceRecord d;
  d.seq = 1;
  d.kind = RecKind::Data;
  d.site = 38749;
  d.descriptor = "RDT";
  d.typecode = "r4";
  d.value = canonical_real(1.0);
  CHECK(format_record(d) == "D 1 38749 RDT r4 +1.00000000000000000E+00\n");

  TraceRecord s;
  s.seq = 1;
  s.kind = RecKind::Start;
  s.site = 6914;
  s.descriptor = "ACMPBL";
  CHECK(format_record(s) == "S 1 6914 ACMPBL\n");
}

TEST_CASE("header carries the similarity policy") {
  SimilarityPolicy p;
  std::string h = format_trace_header(p);
  CHECK(h == "DRIFTLENS-TRACE v1 rel=1.000E-03 abs=1.000E-10 ch=0\n");
  SimilarityPolicy q = parse_trace_header(
      "DRIFTLENS-TRACE v1 rel=1.000E-03 abs=1.000E-10 ch=0");
  CHECK(q.rel_tol == doctest::Approx(1.0e-3));
  CHECK(q.abs_tol == doctest::Approx(1.0e-10));
  CHECK_FALSE(q.compare_characters);
}

TEST_CASE("future trace versions are refused") {
  try {
    parse_trace_header("DRIFTLENS-TRACE v2 rel=1.000E-03 abs=1.000E-10 ch=0");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::UnsupportedVersion);
  }
}

TEST_CASE("truncated record lines name their location") {
  try {
    parse_record("D 5 38749 RDT", 17);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::Format);
    CHECK(e.loc.line == 17);
  }
}

TEST_CASE("records round-trip for every type") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dr(-1e10, 1e10);
  for (int i = 0; i < 500; ++i) {
    TraceRecord r;
    r.seq = i + 1;
    r.site = (long)(rng() % 100000) + 1;
    switch (rng() % 5) {
      case 0:
        r.kind = RecKind::Start;
        r.descriptor = "SUBNAME";
        break;
      case 1:
        r.kind = RecKind::Data;
        r.descriptor = "X";
        r.typecode = "i4";
        r.value = strf("%d", (int)(rng() % 1000) - 500);
        break;
      case 2:
        r.kind = RecKind::Data;
        r.descriptor = "y(k-1)";
        r.typecode = "r8";
        r.value = canonical_real(dr(rng));
        break;
      case 3:
        r.kind = RecKind::Data;
        r.descriptor = "OK";
        r.typecode = "l4";
        r.value = rng() % 2 ? "T" : "F";
        break;
      default:
        r.kind = RecKind::Data;
        r.descriptor = "NAME";
        r.typecode = "ch";
        r.value = "'a b''c'";
        break;
    }
    std::string line = format_record(r);
    TraceRecord q = parse_record(line.substr(0, line.size() - 1), 1);
    CHECK(q.seq == r.seq);
    CHECK(q.kind == r.kind);
    CHECK(q.site == r.site);
    CHECK(q.descriptor == r.descriptor);
    CHECK(q.typecode == r.typecode);
    CHECK(q.value == r.value);
  }
}

TEST_CASE("classification of the documented cases") {
  SimilarityPolicy p;

  // Integers match exactly or not at all.
  CHECK(classify(TracedValue::of_int(148443456), "538976288", "i4", p) ==
        Outcome::Different);
  CHECK(classify(TracedValue::of_int(7), "7", "i4", p) == Outcome::Identical);

  // 0.05% off: inside the relative tolerance.
  CHECK(classify(TracedValue::of_real(1.0005, true), canonical_real(1.0), "r8",
                 p) == Outcome::Similar);
  // 0.2% off: outside.
  CHECK(classify(TracedValue::of_real(1.002, true), canonical_real(1.0), "r8",
                 p) == Outcome::Different);
  // Near zero the absolute criterion takes over.
  CHECK(classify(TracedValue::of_real(5.0e-11, true), canonical_real(0.0), "r8",
                 p) == Outcome::Similar);
  CHECK(classify(TracedValue::of_real(5.0e-10, true), canonical_real(0.0), "r8",
                 p) == Outcome::Different);

  // Non-finite values.
  CHECK(classify(TracedValue::of_real(std::nan(""), true), "NaN", "r8", p) ==
        Outcome::Identical);
  CHECK(classify(TracedValue::of_real(std::nan(""), true), canonical_real(1.0),
                 "r8", p) == Outcome::Different);
  CHECK(classify(TracedValue::of_real(HUGE_VAL, true), canonical_real(1.0),
                 "r8", p) == Outcome::Different);
  CHECK(classify(TracedValue::of_real(HUGE_VAL, true), "+Inf", "r8", p) ==
        Outcome::Identical);

  CHECK(classify(TracedValue::of_logical(true), "T", "l4", p) ==
        Outcome::Identical);
  CHECK(classify(TracedValue::of_logical(true), "F", "l4", p) ==
        Outcome::Different);
}

TEST_CASE("capture suppresses character data by default") {
  std::string path = testutil::temp_path("cap_ch.trc");
  SimilarityPolicy p;
  CaptureSession cap(path, p);
  CHECK(cap.record(RecKind::Start, 1, "P", nullptr) == 1);
  TracedValue ch = TracedValue::of_char("hi");
  CHECK(cap.record(RecKind::Data, 2, "NAME", &ch) == 0);
  TracedValue iv = TracedValue::of_int(3);
  CHECK(cap.record(RecKind::Data, 3, "N", &iv) == 2);
  cap.close();
}

TEST_CASE("compare flags an unexpected site as sequence divergence") {
  std::string path = testutil::temp_path("cmp_div.trc");
  SimilarityPolicy p;
  {
    CaptureSession cap(path, p);
    cap.record(RecKind::Start, 1, "P", nullptr);
    TracedValue v = TracedValue::of_int(5);
    cap.record(RecKind::Data, 2, "A", &v);
    cap.close();
  }
  CompareSession cmp(path, p);
  CHECK(cmp.compare_marker(RecKind::Start, 1, "P") == Outcome::Identical);
  CHECK(cmp.compare_marker(RecKind::Start, 9, "Q") ==
        Outcome::SequenceDivergence);
  DifferenceReport rep = cmp.finalize();
  REQUIRE(rep.divergence);
  CHECK(rep.divergence->expected.site == 2);
  CHECK(rep.divergence->encountered_site == 9);
  CHECK(rep.exit_status() == 2);
}

TEST_CASE("running past the end of the reference is a divergence") {
  std::string path = testutil::temp_path("cmp_eof.trc");
  SimilarityPolicy p;
  {
    CaptureSession cap(path, p);
    cap.record(RecKind::Start, 1, "P", nullptr);
    cap.close();
  }
  CompareSession cmp(path, p);
  CHECK(cmp.compare_marker(RecKind::Start, 1, "P") == Outcome::Identical);
  TracedValue v = TracedValue::of_int(1);
  CHECK(cmp.compare(RecKind::Data, 2, "A", v).outcome ==
        Outcome::SequenceDivergence);
  DifferenceReport rep = cmp.finalize();
  REQUIRE(rep.divergence);
  CHECK(rep.divergence->reference_exhausted);
}

TEST_CASE("an unfinished reference trace is a divergence at end of run") {
  std::string path = testutil::temp_path("cmp_short.trc");
  SimilarityPolicy p;
  {
    CaptureSession cap(path, p);
    cap.record(RecKind::Start, 1, "P", nullptr);
    TracedValue v = TracedValue::of_int(5);
    cap.record(RecKind::Data, 2, "A", &v);
    cap.close();
  }
  CompareSession cmp(path, p);
  CHECK(cmp.compare_marker(RecKind::Start, 1, "P") == Outcome::Identical);
  DifferenceReport rep = cmp.finalize();
  REQUIRE(rep.divergence);
  CHECK_FALSE(rep.divergence->reference_exhausted);
  CHECK(rep.divergence->expected.site == 2);
}

TEST_CASE("similar and different values hand back the reference") {
  std::string path = testutil::temp_path("cmp_ref.trc");
  SimilarityPolicy p;
  {
    CaptureSession cap(path, p);
    TracedValue v = TracedValue::of_real(1.0, true);
    cap.record(RecKind::Data, 1, "X", &v);
    cap.close();
  }
  CompareSession cmp(path, p);
  CompareResult r =
      cmp.compare(RecKind::Data, 1, "X", TracedValue::of_real(1.0004, true));
  CHECK(r.outcome == Outcome::Similar);
  CHECK(r.reference.r == doctest::Approx(1.0));
}

TEST_CASE("raw reports round-trip") {
  DifferenceReport rep;
  rep.identical = 10;
  rep.similar = 2;
  rep.different = 1;
  DiffEntry e;
  e.site = 4;
  e.seq = 9;
  e.file_line = 10;
  e.descriptor = "X";
  e.typecode = "r4";
  e.computed = canonical_real(2.0);
  e.reference = canonical_real(1.0);
  rep.entries.push_back(e);
  SeqDivergence d;
  d.expected.seq = 12;
  d.expected.kind = RecKind::Start;
  d.expected.site = 6;
  d.expected.descriptor = "SUB_A";
  d.expected_file_line = 13;
  d.encountered_kind = RecKind::Start;
  d.encountered_site = 7;
  d.encountered_descriptor = "SUB_B";
  rep.divergence = d;

  std::string path = testutil::temp_path("report.raw");
  write_raw_report(rep, path);
  DifferenceReport r = read_raw_report(path);
  CHECK(r.identical == 10);
  CHECK(r.similar == 2);
  CHECK(r.different == 1);
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].descriptor == "X");
  CHECK(r.entries[0].reference == canonical_real(1.0));
  REQUIRE(r.divergence);
  CHECK(r.divergence->expected.seq == 12);
  CHECK(r.divergence->expected.site == 6);
  CHECK(r.divergence->encountered_site == 7);
  CHECK(r.divergence->encountered_descriptor == "SUB_B");
}
