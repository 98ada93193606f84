// Acceptance battery: one pass/fail line per criterion, exit status 1 on any failure.

#include "rlab/acceptance.hpp"

#include <iostream>

int main() {
  rlab::AcceptanceConfig cfg;
  cfg.models_dir = RLAB_MODELS_DIR;
  auto results = rlab::run_acceptance(cfg);
  std::cout << rlab::acceptance_text(results);
  const bool ok = rlab::all_passed(results);
  std::cout << (ok ? "all criteria passed\n" : "some criteria failed\n");
  return ok ? 0 : 1;
}
