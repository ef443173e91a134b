#include "tplreach/validation.hpp"

#include <stdexcept>

#include "tplreach/model.hpp"

namespace tplreach {

namespace {

std::string regex_escape(const std::string& text) {
  static const std::string special = R"(\^$.|?*+()[]{}/)";
  std::string out;
  for (char c : text) {
    if (special.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

std::string trimmed(const std::string& line) {
  auto b = line.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = line.find_last_not_of(" \t");
  return line.substr(b, e - b + 1);
}

}  // namespace

std::vector<ValidationRule> default_rules(const std::vector<std::string>& path_classes) {
  std::string extends_target = R"([\w$.]+)";
  if (!path_classes.empty()) {
    std::string alternatives;
    for (const auto& c : path_classes) {
      if (!alternatives.empty()) alternatives += '|';
      alternatives += regex_escape(c);
    }
    extends_target = R"((?:[\w$]+\.)*(?:)" + alternatives + R"()\b)";
  }
  return {
      {"override-annotation", R"(@Override\b)", true},
      {"class-extension", R"(\bclass\s+[\w$]+(?:\s*<[^>]*>)?\s+extends\s+)" + extends_target, true},
      {"anonymous-inner-class", R"(\bnew\s+[\w$.]+(?:\s*<[^>]*>)?\s*\([^()]*\)\s*\{)", true},
      {"assertion", R"((?:^|[^\w$])assert(?:[A-Z]\w*)?\s*\(|^\s*assert\s)", true},
      {"mock-usage", R"(\b(?:mock|spy|Mockito)\b\s*[.(])", false},
  };
}

ValidationResult static_validate(const std::string& scenario_text, const std::vector<ValidationRule>& rules) {
  if (rules.empty()) throw std::invalid_argument("static validation needs at least one rule");
  std::vector<std::pair<const ValidationRule*, std::regex>> compiled;
  for (const auto& r : rules) {
    try {
      compiled.emplace_back(&r, std::regex(r.pattern, std::regex::ECMAScript));
    } catch (const std::regex_error& e) {
      throw std::invalid_argument("invalid pattern for rule '" + r.name + "': " + e.what());
    }
  }

  ValidationResult result;
  auto lines = split_lines(scenario_text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const auto& [rule, re] : compiled) {
      if (!std::regex_search(lines[i], re)) continue;
      Violation v{rule->name, static_cast<int>(i + 1), trimmed(lines[i]), rule->blocking};
      if (rule->blocking) {
        result.violations.push_back(std::move(v));
        result.passed = false;
      } else {
        result.findings.push_back(std::move(v));
      }
    }
  }
  return result;
}

std::string ValidationResult::describe() const {
  std::string out;
  for (const auto& v : violations)
    out += "rule '" + v.rule + "' violated at line " + std::to_string(v.line) + ": " + v.excerpt + "\n";
  return out;
}

}  // namespace tplreach
