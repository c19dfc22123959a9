#include <gtest/gtest.h>

#include <random>

#include "ymtok/core/g3.hpp"
#include "ymtok/core/surface.hpp"
#include "ymtok/core/utf8.hpp"
#include "ymtok/core/word.hpp"

using namespace ymtok;

TEST(Tone, Inventory) {
  EXPECT_TRUE(Tone("14").is_basic());
  EXPECT_TRUE(Tone("42").is_attested());
  EXPECT_FALSE(Tone("41").is_basic());
  EXPECT_TRUE(Tone("41").is_rare_attested());
  EXPECT_TRUE(Tone("143").is_attested());
  EXPECT_FALSE(Tone("444").is_attested());  // constructible, not attested
  EXPECT_THROW(Tone("5"), Error);
  EXPECT_THROW(Tone("1234"), Error);
  EXPECT_THROW(Tone(""), Error);
  EXPECT_TRUE(Tone::placeholder().is_placeholder());
}

TEST(ParseWord, Examples) {
  const Word w = parse_word("ta'14bi4");
  ASSERT_EQ(w.kind, WordKind::Native);
  ASSERT_EQ(w.morae.size(), 2u);
  EXPECT_EQ(w.morae[0], (Mora{"ta'", Tone("14")}));
  EXPECT_EQ(w.morae[1], (Mora{"bi", Tone("4")}));
  EXPECT_TRUE(w.trailing.empty());

  const Word face = parse_word("nu14u3");
  ASSERT_EQ(face.morae.size(), 2u);
  EXPECT_EQ(face.morae[0].tone.str(), "14");
  EXPECT_EQ(face.morae[1], (Mora{"u", Tone("3")}));

  const Word pero = parse_word("pero");
  EXPECT_EQ(pero.kind, WordKind::Foreign);
  EXPECT_TRUE(pero.morae.empty());
  EXPECT_EQ(pero.trailing, "pero");

  try {
    parse_word("");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyWord);
  }
}

TEST(ParseWord, TrailingAndForeignFallbacks) {
  const Word w = parse_word("ku3un");
  EXPECT_EQ(w.kind, WordKind::Native);
  EXPECT_EQ(w.morae.size(), 1u);
  EXPECT_EQ(w.trailing, "un");
  EXPECT_EQ(parse_word("12ab").kind, WordKind::Foreign);
  EXPECT_EQ(parse_word("ta1234").kind, WordKind::Foreign);
  EXPECT_EQ(parse_word("Maria").kind, WordKind::Foreign);
}

TEST(RenderWord, Examples) {
  EXPECT_EQ(render_word(Word{{{"ta'", Tone("14")}, {"bi", Tone("4")}}, "", WordKind::Native}), "ta'14bi4");
  EXPECT_EQ(render_word(Word{{}, "pero", WordKind::Foreign}), "pero");
  EXPECT_EQ(render_word(Word{{{"nda", Tone("4")}, {"a", Tone("2")}}, "", WordKind::Native}), "nda4a2");
}

TEST(ParseWord, RoundTripOnRandomTokens) {
  std::mt19937_64 rng(3);
  const std::string chars = "abkmnt'~14230xyzAQ";
  for (int i = 0; i < 5000; ++i) {
    std::string t(1 + rng() % 10, ' ');
    for (auto& c : t) c = chars[rng() % chars.size()];
    const Word w = parse_word(t);
    ASSERT_EQ(render_word(w), t);
    for (const auto& m : w.morae) {
      ASSERT_FALSE(m.segment.empty());
      ASSERT_FALSE(m.tone.str().empty());
    }
    if (w.kind == WordKind::Foreign) {
      ASSERT_TRUE(w.morae.empty());
      ASSERT_FALSE(w.trailing.empty());
    }
  }
}

TEST(G3, ParseExamples) {
  const G3String buy = g3_parse("sa{3>4}ta{>2}4");
  const G3String want{{g3::Literal{"sa"}, g3::Rewrite{{"3", "4"}}, g3::Literal{"ta"}, g3::Rewrite{{"", "2"}},
                       g3::Literal{"4"}}};
  EXPECT_EQ(buy, want);
  EXPECT_EQ(g3_parse("i4in4"), (G3String{{g3::Literal{"i4in4"}}}));
  const G3String chain = g3_parse("cho'{3>1>4}ma{>1}4");
  const auto& rw = std::get<g3::Rewrite>(chain.spans[1]);
  EXPECT_EQ(rw.steps, (std::vector<std::string>{"3", "1", "4"}));
  EXPECT_EQ(g3_surface(chain), "cho'4ma14");
  EXPECT_EQ(g3_morphemic(chain), "cho'3ma4");
}

TEST(G3, Errors) {
  auto code_of = [](std::string_view s) {
    try {
      g3_parse(s);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  EXPECT_EQ(code_of("sa{3>4ta"), Errc::UnbalancedBraces);
  EXPECT_EQ(code_of("sa3>4}ta"), Errc::UnbalancedBraces);
  EXPECT_EQ(code_of("sa{>}ta"), Errc::EmptyRewrite);
  EXPECT_EQ(code_of("sa{3}ta"), Errc::BadFormat);
}

TEST(G3, MorphemicAndSurface) {
  EXPECT_EQ(g3_morphemic(g3_parse("sa{3>4}ta{>2}4")), "sa3ta4");
  EXPECT_EQ(g3_morphemic(g3_parse("i4in4")), "i4in4");
  EXPECT_EQ(g3_morphemic(g3_parse("ta'{3>14}bi4")), "ta'3bi4");
  EXPECT_EQ(g3_surface(g3_parse("ta'{3>14}bi4")), "ta'14bi4");
  EXPECT_EQ(g3_surface(g3_parse("i4in4")), "i4in4");
  EXPECT_EQ(g3_surface(g3_parse("{kw>}i{3>4}in{3>4}")), "i4in4");
}

TEST(G3, RoundTrip) {
  for (const char* s : {"sa{3>4}ta{>2}4", "{kw>}i{3>4}in{3>4}", "cho'{3>1>4}ma{>1}4", "plain", "", "a{b>}c"})
    EXPECT_EQ(g3_render(g3_parse(s)), s);
}

TEST(G3, ToneChangeRendering) {
  EXPECT_EQ(g3_tone_change("3", "14"), "{3>14}");
  EXPECT_EQ(g3_tone_change("3", "13"), "{>1}3");
  EXPECT_EQ(g3_tone_change("1", "14"), "1{>4}");
  EXPECT_EQ(g3_tone_change("14", "4"), "{1>}4");
  EXPECT_EQ(g3_tone_change("4", "4"), "4");
}

TEST(Surface, SplitAndJoin) {
  const auto units = split_surface("¿ni1-cho'3ma4 =2, pero?");
  ASSERT_EQ(units.size(), 9u);
  EXPECT_EQ(units[0], (SurfaceUnit{UnitKind::Open, "¿"}));
  EXPECT_EQ(units[2], (SurfaceUnit{UnitKind::Glue, "-"}));
  EXPECT_EQ(units[4], (SurfaceUnit{UnitKind::Glue, "="}));
  EXPECT_EQ(join_surface(units), "¿ni1-cho'3ma4=2, pero?");
}

TEST(Surface, NormalizationIsIdempotent) {
  const std::string raw = "  ña1a4 [ruido] \"ku3un4\" ,  ni1- cho'3ma4 . ";
  const std::string once = normalize_line(raw);
  EXPECT_EQ(once, "~na1a4 ku3un4, ni1-cho'3ma4.");
  EXPECT_EQ(normalize_line(once), once);
}

TEST(Utf8, MalformedBytesBecomeReplacement) {
  EXPECT_EQ(utf8::decode("a\xffz"), U"a�z");
  EXPECT_EQ(utf8::encode(U"ñ¿"), "ñ¿");
}
