#pragma once

#include <regex>
#include <string>
#include <vector>

namespace tplreach {

/// A pattern applied line by line to generated scenario text. Blocking rules
/// fail validation; the others are only reported.
struct ValidationRule {
  std::string name;
  std::string pattern;  // ECMAScript regex
  bool blocking = true;
};

struct Violation {
  std::string rule;
  int line = 0;
  std::string excerpt;
  bool blocking = true;
};

struct ValidationResult {
  bool passed = true;
  std::vector<Violation> violations;  // blocking matches
  std::vector<Violation> findings;    // non-blocking matches, e.g. mock usage

  std::string describe() const;
};

/// Override annotations, class extension, anonymous inner classes, assertion
/// directives, plus a non-blocking mock-usage counter. When `path_classes`
/// (simple names) is non-empty, the extension rule only fires for those.
std::vector<ValidationRule> default_rules(const std::vector<std::string>& path_classes = {});

/// Throws std::invalid_argument when `rules` is empty or a pattern is invalid.
ValidationResult static_validate(const std::string& scenario_text, const std::vector<ValidationRule>& rules);

}  // namespace tplreach
