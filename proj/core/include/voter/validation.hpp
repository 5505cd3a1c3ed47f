#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voter::validation {

enum class Suite { core, figures, all };

Suite parse_suite(const std::string& text);

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string measured;
  std::string expected;
  std::string tolerance;
  double seconds = 0.0;
};

/// Check ids in execution order.
std::vector<std::string> suite_checks(Suite suite);

/// Throws invalid_argument for an unknown id.
CheckResult run_check(const std::string& id);

/// One line: PASS|FAIL id measured=... expected=... tolerance=... (t s)
std::string format_result(const CheckResult& result);

/// Runs every check of the suite, streaming one line per check to `out`.
std::vector<CheckResult> run_suite(Suite suite, std::ostream& out);

}  // namespace voter::validation
