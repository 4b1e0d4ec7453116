#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hadams {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOutcome {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  std::string report_text;  // deterministic; one line per criterion + details
};

// Runs every acceptance criterion at its pinned tolerance.  Criterion 10
// (determinism) re-runs the entire suite with the same seed and compares the
// two report texts byte for byte.
AcceptanceOutcome run_acceptance(uint64_t seed = 20240901, int threads = 1);

}  // namespace hadams
