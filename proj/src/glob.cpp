#include "tplreach/glob.hpp"

namespace tplreach {

Glob::Glob(std::string_view pattern) : pattern_(pattern) {
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char c = pattern[i];
    if (c == '*') {
      if (tokens_.empty() || tokens_.back().kind != Token::Star) tokens_.push_back({Token::Star});
    } else if (c == '?') {
      tokens_.push_back({Token::Any});
    } else if (c == '\\') {
      if (i + 1 == pattern.size()) throw BadGlob("glob '" + pattern_ + "' ends with a bare escape");
      tokens_.push_back({Token::Literal, pattern[++i]});
    } else if (c == '[') {
      Token t{Token::Class};
      std::size_t j = i + 1;
      if (j < pattern.size() && (pattern[j] == '!' || pattern[j] == '^')) {
        t.negated = true;
        ++j;
      }
      bool closed = false;
      while (j < pattern.size()) {
        char lo = pattern[j];
        if (lo == ']' && !t.ranges.empty()) {
          closed = true;
          break;
        }
        if (lo == '\\') {
          if (++j == pattern.size()) break;
          lo = pattern[j];
        }
        char hi = lo;
        if (j + 2 < pattern.size() && pattern[j + 1] == '-' && pattern[j + 2] != ']') {
          hi = pattern[j + 2];
          if (hi == '\\') {
            if (j + 3 >= pattern.size()) break;
            hi = pattern[j + 3];
            ++j;
          }
          j += 2;
          if (hi < lo) throw BadGlob("glob '" + pattern_ + "' has a reversed range");
        }
        t.ranges.emplace_back(lo, hi);
        ++j;
      }
      if (!closed) throw BadGlob("glob '" + pattern_ + "' has an unterminated or empty character class");
      tokens_.push_back(std::move(t));
      i = j;
    } else {
      tokens_.push_back({Token::Literal, c});
    }
  }
}

bool Glob::token_matches(const Token& t, char c) const {
  switch (t.kind) {
    case Token::Literal:
      return t.ch == c;
    case Token::Any:
      return true;
    case Token::Class: {
      bool in = false;
      for (auto [lo, hi] : t.ranges) in = in || (c >= lo && c <= hi);
      return in != t.negated;
    }
    case Token::Star:
      return true;
  }
  return false;
}

bool Glob::matches(std::string_view text) const {
  // Greedy star with single backtrack point; linear-ish for typical patterns.
  std::size_t ti = 0, si = 0;
  std::size_t star_t = std::string::npos, star_s = 0;
  while (si < text.size()) {
    if (ti < tokens_.size() && tokens_[ti].kind == Token::Star) {
      star_t = ti++;
      star_s = si;
    } else if (ti < tokens_.size() && token_matches(tokens_[ti], text[si])) {
      ++ti;
      ++si;
    } else if (star_t != std::string::npos) {
      ti = star_t + 1;
      si = ++star_s;
    } else {
      return false;
    }
  }
  while (ti < tokens_.size() && tokens_[ti].kind == Token::Star) ++ti;
  return ti == tokens_.size();
}

}  // namespace tplreach
