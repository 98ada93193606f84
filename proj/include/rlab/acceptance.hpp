#pragma once

// The acceptance battery: fourteen criteria, each a Report with its runtime.

#include "rlab/report.hpp"

#include <string>
#include <vector>

namespace rlab {

struct AcceptanceConfig {
  std::string models_dir;
  long order = 6;             // q-window of the genus criteria
  bool quick = false;         // exact criteria at order 2 only; the numeric and E8-heavy ones are skipped
  bool inject_fault = false;  // corrupts one theta coefficient before criterion 1
  bool timing = true;         // runtime limits count towards pass/fail
  unsigned seed = 1;
  unsigned threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool skipped = false;
  Report report;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: none
  std::string error;        // exception text, if the criterion threw

  bool passed() const;
};

/// Runs criteria 1..14; results are in criterion order whatever the thread count.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config);

/// One line per criterion: "[PASS]  1  title  (0.12 s)". Without timing the output is deterministic.
std::string acceptance_text(const std::vector<CriterionResult>& results, bool details = false, bool timing = true);
nlohmann::json acceptance_json(const std::vector<CriterionResult>& results, bool timing = true);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace rlab
