#include <gtest/gtest.h>

#include <random>

#include "tplreach/glob.hpp"

using tplreach::BadGlob;
using tplreach::Glob;

namespace {

// Plain recursive matcher over the subset without classes or escapes.
bool naive(std::string_view p, std::string_view s) {
  if (p.empty()) return s.empty();
  if (p[0] == '*') return naive(p.substr(1), s) || (!s.empty() && naive(p, s.substr(1)));
  if (s.empty()) return false;
  return (p[0] == '?' || p[0] == s[0]) && naive(p.substr(1), s.substr(1));
}

}  // namespace

TEST(Glob, Basics) {
  EXPECT_TRUE(Glob("*.SpelExpressionParser.parseExpression*")
                  .matches("org.springframework.expression.spel.standard.SpelExpressionParser.parseExpression(String)"));
  EXPECT_FALSE(Glob("*.SpelExpressionParser.parseExpression*")
                   .matches("org.springframework.expression.spel.standard.SpelExpressionParser.SpelExpressionParser()"));
  EXPECT_TRUE(Glob("a?c").matches("abc"));
  EXPECT_FALSE(Glob("a?c").matches("ac"));
  EXPECT_TRUE(Glob("*").matches(""));
  EXPECT_TRUE(Glob("").matches(""));
  EXPECT_FALSE(Glob("").matches("x"));
  EXPECT_TRUE(Glob("a*b*c").matches("a.x.b.y.c"));
  EXPECT_FALSE(Glob("a*b*c").matches("a.x.c.y.b"));
}

TEST(Glob, ClassesAndEscapes) {
  EXPECT_TRUE(Glob("v[0-9].[a-c]").matches("v7.b"));
  EXPECT_FALSE(Glob("v[0-9]").matches("vx"));
  EXPECT_TRUE(Glob("[!a]x").matches("bx"));
  EXPECT_FALSE(Glob("[^a]x").matches("ax"));
  EXPECT_TRUE(Glob("f\\*").matches("f*"));
  EXPECT_FALSE(Glob("f\\*").matches("fo"));
  EXPECT_TRUE(Glob("m\\(int\\)").matches("m(int)"));
}

TEST(Glob, MalformedPatterns) {
  EXPECT_THROW(Glob("[abc"), BadGlob);
  EXPECT_THROW(Glob("[]"), BadGlob);
  EXPECT_THROW(Glob("trailing\\"), BadGlob);
}

TEST(Glob, AgreesWithNaiveMatcher) {
  std::mt19937 rng(17);
  const std::string alphabet = "ab.";
  const std::string pattern_alphabet = "ab.*?";
  for (int i = 0; i < 5000; ++i) {
    std::string p, s;
    for (auto n = rng() % 7; n > 0; --n) p += pattern_alphabet[rng() % pattern_alphabet.size()];
    for (auto n = rng() % 9; n > 0; --n) s += alphabet[rng() % alphabet.size()];
    EXPECT_EQ(Glob(p).matches(s), naive(p, s)) << "pattern '" << p << "' text '" << s << "'";
  }
}
