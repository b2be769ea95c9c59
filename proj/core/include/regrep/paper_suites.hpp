#pragma once

#include <string>
#include <vector>

namespace regrep {

/// One acceptance suite: a named, self-contained verification run.
/// Stretch suites report failures without failing the overall gate.
struct SuiteResult {
  std::string name;
  bool pass = false;
  bool stretch = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> suite_names();
bool is_suite_name(const std::string& name);

/// Runs one suite (throws Error on unknown names).
SuiteResult run_suite(const std::string& name);

/// Runs every suite in order.
std::vector<SuiteResult> run_all_suites();

}  // namespace regrep
