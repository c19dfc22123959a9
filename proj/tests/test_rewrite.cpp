#include <gtest/gtest.h>

#include <random>

#include "support/machines.hpp"
#include "support/rewrite_oracle.hpp"
#include "ymtok/rewrite/compile.hpp"
#include "ymtok/rewrite/rule_io.hpp"
#include "ymtok/wfst/search.hpp"

using namespace ymtok;
using namespace ymtok::rewrite;

namespace {

std::set<char32_t> sigma_of(std::u32string_view s) { return {s.begin(), s.end()}; }

std::string run(const Wfst& t, std::string_view in) {
  return utf8::encode(fst::best_path(t, utf8::decode(in)).output);
}

std::vector<std::pair<std::u32string, double>> outputs(const Wfst& lattice, std::u32string_view x) {
  auto outs = ymtok::testing::brute_outputs(lattice, x, 32);
  std::sort(outs.begin(), outs.end(), [](auto& a, auto& b) { return a.second < b.second || (a.second == b.second && a.first < b.first); });
  return outs;
}

}  // namespace

TEST(Pattern, ParsesTheSupportedSubset) {
  const std::set<char32_t> sigma = sigma_of(U"abcd");
  auto accepts = [&](std::u32string_view pat, std::u32string_view s) {
    return determinize(build_nfa(parse_pattern(pat).root, sigma), sigma).accepts(s);
  };
  EXPECT_TRUE(accepts(U"ab|cd", U"cd"));
  EXPECT_FALSE(accepts(U"ab|cd", U"ad"));
  EXPECT_TRUE(accepts(U"a[bc]{2}d", U"acbd"));
  EXPECT_FALSE(accepts(U"a[bc]{2}d", U"abd"));
  EXPECT_TRUE(accepts(U"a{1,3}", U"aaa"));
  EXPECT_FALSE(accepts(U"a{1,3}", U"aaaa"));
  EXPECT_TRUE(accepts(U"[^a]b?", U"c"));
  EXPECT_FALSE(accepts(U"[^a]b?", U"a"));
  EXPECT_TRUE(accepts(U"(ab)*", U"abab"));
  EXPECT_TRUE(accepts(U".+", U"dcba"));
  EXPECT_TRUE(accepts(U"a{", U"a{") == false);  // '{' is not in sigma
  EXPECT_THROW(parse_pattern(U"(ab"), Error);
  EXPECT_THROW(parse_pattern(U"[ab"), Error);
  EXPECT_THROW(parse_pattern(U"*a"), Error);
  EXPECT_THROW(parse_pattern(U"a^b"), Error);
  const auto anchored = parse_pattern(U"^ab$");
  EXPECT_TRUE(anchored.anchored_start);
  EXPECT_TRUE(anchored.anchored_end);
  EXPECT_EQ(literal_of(anchored.root), U"ab");
}

TEST(CompileRule, ContextExamples) {
  const Wfst t = compile_rule({"a", "b", "c", "d", 0}, sigma_of(U"abcd"));
  EXPECT_EQ(run(t, "cad"), "cbd");
  EXPECT_EQ(run(t, "aad"), "aad");
  EXPECT_EQ(run(t, "cadcad"), "cbdcbd");
  EXPECT_EQ(run(t, ""), "");
}

TEST(CompileRule, FirstMoraNegation) {
  const auto sigma = sigma_of(U"abcdefghijklmnopqrstuvwxyz'~1234");
  const Wfst t = compile_rule({"3", "14", "^[a-z'~]*", "", 0}, sigma);
  EXPECT_EQ(run(t, "ta'3bi4"), "ta'14bi4");
  EXPECT_EQ(run(t, "ta'3bi3"), "ta'14bi3");
  EXPECT_EQ(run(t, "ta'4bi3"), "ta'4bi3");
}

TEST(CompileRule, AnchoredRightContext) {
  const Wfst t = compile_rule({"a", "x", "", "b$", 0}, sigma_of(U"abx"));
  EXPECT_EQ(run(t, "abab"), "abxb");
}

TEST(CompileRule, Insertion) {
  const Wfst t = compile_rule({"", "x", "a", "b", 0}, sigma_of(U"abx"));
  EXPECT_EQ(run(t, "abab"), "axbaxb");
  EXPECT_EQ(run(t, "ba"), "ba");
}

TEST(CompileRule, LeftContextSeesRewrittenText) {
  const Wfst t = compile_rule({"a", "b", "b", "", 0}, sigma_of(U"ab"));
  EXPECT_EQ(run(t, "baa"), "bbb");
}

TEST(CompileRule, OverlappingMatchesGoLeftToRight) {
  const Wfst t = compile_rule({"aa", "x", "", "", 0}, sigma_of(U"ax"));
  EXPECT_EQ(run(t, "aaa"), "xa");
  EXPECT_EQ(run(t, "aaaa"), "xx");
}

TEST(CompileRule, OptionalRuleKeepsBothReadings) {
  const Wfst t = compile_rule({"a", "b", "", "", 1.5}, sigma_of(U"ab"));
  const auto outs = outputs(t, U"a");
  ASSERT_EQ(outs.size(), 2u);
  EXPECT_EQ(outs[0], (std::pair<std::u32string, double>{U"a", 0}));
  EXPECT_EQ(outs[1], (std::pair<std::u32string, double>{U"b", 1.5}));
}

TEST(CompileRule, Errors) {
  const auto sigma = sigma_of(U"ab");
  auto code_of = [&](const RewriteRule& r, const std::set<char32_t>& s) {
    try {
      compile_rule(r, s);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  EXPECT_EQ(code_of({"a*", "b", "", "", 0}, sigma), Errc::UnboundedPattern);
  EXPECT_EQ(code_of({"a?", "b", "", "", 0}, sigma), Errc::BadPattern);
  EXPECT_EQ(code_of({utf8::encode(kMarkRight), "b", "", "", 0}, sigma), Errc::MarkerCollision);
  auto bad = sigma;
  bad.insert(kMarkLeft1);
  EXPECT_EQ(code_of({"a", "b", "", "", 0}, bad), Errc::MarkerCollision);
  EXPECT_EQ(code_of({"a", "z", "", "", 0}, sigma), Errc::BadPattern);
  // Unbounded repetition is fine in contexts.
  EXPECT_NO_THROW(compile_rule({"a", "b", "b*", "", 0}, sigma));
}

TEST(CompileRule, MarkersNeverReachTheOutput) {
  const Wfst t = compile_rule({"ab", "", "a", "b", 0}, sigma_of(U"ab"));
  for (const auto& x : ymtok::testing::all_strings(U"ab", 5))
    for (char32_t c : fst::best_path(t, x).output) ASSERT_FALSE(is_marker(c));
}

TEST(CompileRule, MatchesSubstitutionOracle) {
  std::mt19937_64 rng(5);
  const std::string letters = "abcd";
  auto word = [&](int lo, int hi) {
    std::string s(std::uniform_int_distribution<int>(lo, hi)(rng), ' ');
    for (auto& c : s) c = letters[std::uniform_int_distribution<int>(0, 3)(rng)];
    return s;
  };
  const auto inputs = ymtok::testing::all_strings(U"abcd", 5);
  for (int trial = 0; trial < 60; ++trial) {
    const RewriteRule r{word(0, 2), word(0, 2), word(0, 3), word(0, 3), 0};
    const Wfst t = compile_rule(r, sigma_of(U"abcd"));
    for (const auto& x : inputs) {
      const std::string in = utf8::encode(x);
      ASSERT_EQ(run(t, in), ymtok::testing::substitute(in, r.phi, r.psi, r.left, r.right))
          << r.phi << " -> " << r.psi << " / " << r.left << " _ " << r.right << " on " << in;
    }
  }
}

TEST(ApplyRules, EmptyListIsIdentity) {
  const Wfst l = apply_rules({}, "abc");
  EXPECT_EQ(fst::best_path(l, U"abc").output, U"abc");
}

TEST(ApplyRules, SequentialObligatoryRules) {
  const Wfst l = apply_rules({{"a", "b", "", "", 0}, {"b", "c", "", "", 0}}, "ab");
  EXPECT_EQ(fst::best_path(l, U"ab").output, U"cc");
}

TEST(ApplyRules, TwoOptionalRulesGiveFourOutputs) {
  const Wfst l = apply_rules({{"a", "b", "", "", 1}, {"c", "d", "", "", 2}}, "ac");
  const std::vector<std::pair<std::u32string, double>> want{{U"ac", 0}, {U"bc", 1}, {U"ad", 2}, {U"bd", 3}};
  EXPECT_EQ(outputs(l, U"ac"), want);
}

TEST(RuleFile, JsonRoundTripAndValidation) {
  const std::vector<RewriteRule> rules{{"3", "14", "^[a-z'~]*", "", 0}, {"a", "b", "", "c$", 0.5}};
  EXPECT_EQ(rules_from_json(rules_to_json(rules)), rules);
  const auto partial = rules_from_json(nlohmann::json::parse(R"([{"phi": "a"}])"));
  EXPECT_EQ(partial[0], (RewriteRule{"a", "", "", "", 0}));
  nlohmann::json bad = nlohmann::json::array();
  bad.push_back({{"phi", "a"}, {"psi", utf8::encode(kMarkLeft2)}});
  try {
    rules_from_json(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MarkerCollision);
  }
  EXPECT_THROW(rules_from_json(nlohmann::json::parse(R"({"phi": "a"})")), Error);
}
