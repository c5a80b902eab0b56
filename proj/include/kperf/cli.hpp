#pragma once

#include "kperf/io.hpp"

#include <cstdint>
#include <string>

namespace kperf {

inline constexpr const char* kToolVersion = "kperf 0.1.0";

// One fully parsed invocation. Exactly one verb; paths and parameters are
// only read by the verbs that need them.
struct RunConfig {
  std::string verb;  // "lemell-check", "colim-equal", "localize",
                     // "lambda load|adams|gamma-filtration|verify-prop",
                     // "perfection k1-units|ptorsion|negk", "paper-suite"
  std::string group_path, endo_path, ring_path, datum_path;
  std::string ring_builtin;       // "Z", "RC2", "trunc:<m>" instead of a file
  std::string element;            // basis name or comma-separated coordinates
  std::string elem_a, elem_b;
  long stage_a = 0, stage_b = 0;
  Int ell = 2;
  Int p = 2;
  long m = 2;
  unsigned long adams_degree = 2;
  long cap = 8;
  long h0_rank = 1;
  std::uint64_t budget = 50'000'000;
  int jobs = 1;
  bool json_output = false;
};

struct Report {
  std::string verb;
  Json inputs;    // echo of the interpreted inputs
  Json verdicts;  // verb-specific results
  Json witnesses;
  double timing_ms = 0.0;
  std::string version = kToolVersion;
  bool positive = true;  // all verdicts positive (computational verbs stay true)

  Json to_json() const;
  static Report from_json(const Json& j);
  std::string to_text() const;
  // 0 when positive, 1 otherwise; input errors exit 2 at the boundary
  int exit_code() const { return positive ? 0 : 1; }
};

Report run(const RunConfig& config);

// Bundled regression cases covering the worked examples: the 2x2 integer
// matrix for ell in {2,3,5}, the C2 representation ring counterexample, the
// truncated line ring family, the units model grid, and the negative-K
// scaling data. Statuses: pass, fail, and inconclusive (a capped filtration;
// distinct and non-failing). Runs offline from built-in constructions.
Report paper_suite(const RunConfig& config);

}  // namespace kperf
