#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tplreach {

class BadGlob : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shell-style glob over whole strings: `*` (any run, dots included), `?`,
/// `[abc]`, `[a-z]`, `[!x]`/`[^x]` and `\` escapes.
class Glob {
 public:
  /// Throws BadGlob on an unterminated class, an empty class or a dangling `\`.
  explicit Glob(std::string_view pattern);

  bool matches(std::string_view text) const;
  const std::string& pattern() const { return pattern_; }

 private:
  struct Token {
    enum Kind { Literal, Any, Star, Class } kind;
    char ch = 0;
    bool negated = false;
    std::vector<std::pair<char, char>> ranges{};
  };
  bool token_matches(const Token& t, char c) const;

  std::string pattern_;
  std::vector<Token> tokens_;
};

}  // namespace tplreach
