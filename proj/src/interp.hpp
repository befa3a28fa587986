#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ast.hpp"
#include "trace_runtime.hpp"

namespace driftlens {

// -- the simulated computing environment ------------------------------------

enum class AssocOrder { LeftToRight, RightToLeft, PairwiseTree };
enum class ShortCircuitOrder { AsWritten, Reversed };
enum class Precision { Storage, Extended };

struct UninitFill {
  enum class Kind { Zero, SpacePattern, Seeded };
  Kind kind = Kind::Zero;
  uint64_t seed = 1;
};

struct FPEnvironment {
  AssocOrder assoc = AssocOrder::LeftToRight;
  Precision precision = Precision::Storage;
  ShortCircuitOrder shortcircuit = ShortCircuitOrder::AsWritten;
  UninitFill uninit;
};

// Spellings: `<assoc>,<precision>,<shortcircuit>,<uninit>` with
// assoc in left|right|pairwise, precision in storage|extended,
// shortcircuit in aswritten|reversed, uninit in zero|space|seeded[:N].
FPEnvironment parse_fp_environment(const std::string& spec);
std::string fp_environment_spec(const FPEnvironment& env);
// Named presets for demos: A and B differ in every knob.
FPEnvironment fp_environment_preset(const std::string& name);

// -- run configuration -------------------------------------------------------

enum class RunMode { Plain, Capture, Compare };

struct RunConfig {
  RunMode mode = RunMode::Plain;
  std::string trace_path;  // capture/compare
  SimilarityPolicy policy;
  FPEnvironment env;
  std::string entry;  // empty: the unit's only PROGRAM
  std::optional<long> max_records;
};

struct RunSummary {
  // Canonical text of every entry-program variable at the end of the run;
  // arrays render as comma-joined element lists.
  std::map<std::string, std::string> finals;
  long records = 0;  // written (capture) or compared (compare)
  DifferenceReport report;       // compare mode
  std::set<long> executed_sites;
  std::vector<std::string> printed;  // PRINT output lines
  std::vector<std::string> uninit_warnings;
  bool hit_record_cap = false;
  int exit_status = 0;
};

// Executes an analyzed (optionally instrumented) unit under the configured
// environment. Capture writes the reference trace; compare classifies every
// traced value against it, overwrites similar/different values with the
// reference, and halts on sequence divergence.
RunSummary run(const SourceUnit& unit, const RunConfig& cfg);

}  // namespace driftlens
