#include <gtest/gtest.h>

#include <set>

#include "support/corpus.hpp"
#include "ymtok/tok/segmel.hpp"
#include "ymtok/tok/simple.hpp"

using namespace ymtok;

using Strings = std::vector<std::string>;

TEST(CharTokenizer, SpacesBecomeUnderscore) {
  CharTokenizer t;
  const auto ts = t.tokenize("ab ñ");
  EXPECT_EQ(ts.texts(), (Strings{"a", "b", "_", "ñ"}));
  EXPECT_EQ(ts.tokens[2].kind, TokenKind::Space);
  EXPECT_EQ(t.detokenize(ts.texts()), "ab ñ");
}

TEST(WordTokenizer, Whitespace) {
  WordTokenizer t;
  EXPECT_EQ(t.tokenize("  ta'14bi4  pero ").texts(), (Strings{"ta'14bi4", "pero"}));
  EXPECT_EQ(t.detokenize({"ta'14bi4", "pero"}), "ta'14bi4 pero");
}

TEST(SegMel, Tokenize) {
  EXPECT_EQ(segmel_tokenize("ta'14bi4").texts(), (Strings{"ta'|bi", "14|4"}));
  EXPECT_EQ(segmel_tokenize("pero").texts(), (Strings{"pero"}));
  EXPECT_EQ(segmel_tokenize("ni1-cho'3ma4").texts(), (Strings{"ni", "1", "-", "cho'|ma", "3|4"}));
  EXPECT_EQ(segmel_tokenize("ku3un").texts(), (Strings{"ku|un", "3|"}));
  EXPECT_EQ(segmel_tokenize("¿ta'14bi4=2?").texts(), (Strings{"¿", "ta'|bi", "14|4", "=", "2", "?"}));

  const auto ts = segmel_tokenize("ta'14bi4, pero");
  ASSERT_EQ(ts.tokens.size(), 4u);
  EXPECT_EQ(ts.tokens[0].kind, TokenKind::Segments);
  EXPECT_EQ(ts.tokens[1].kind, TokenKind::Melody);
  EXPECT_EQ(ts.tokens[2].kind, TokenKind::Boundary);
  EXPECT_EQ(ts.tokens[3].kind, TokenKind::Foreign);
}

TEST(SegMel, DetokenizeRepairs) {
  RepairStats rs;
  EXPECT_EQ(segmel_detokenize({"ta'|bi", "14|4"}, &rs), "ta'14bi4");
  EXPECT_EQ(rs.total(), 0u);

  EXPECT_EQ(segmel_detokenize({"ta'|bi", "14"}, &rs), "ta'14bi#");
  EXPECT_EQ(rs.padded_melodies, 1u);

  EXPECT_EQ(segmel_detokenize({"ta'|bi", "14|4|3"}, &rs), "ta'14bi4");
  EXPECT_EQ(rs.truncated_melodies, 1u);

  EXPECT_EQ(segmel_detokenize({"14|4", "pero"}, &rs), "pero");
  EXPECT_EQ(rs.orphan_melodies, 1u);

  EXPECT_EQ(segmel_detokenize({"ta'|bi", "pero"}, &rs), "ta'#bi# pero");
  EXPECT_EQ(rs.missing_melodies, 1u);
  EXPECT_EQ(rs.total(), 4u);
}

TEST(SegMel, TonalEncliticAfterGlueIsKept) {
  RepairStats rs;
  EXPECT_EQ(segmel_detokenize({"ta'|bi", "14|4", "=", "2"}, &rs), "ta'14bi4=2");
  EXPECT_EQ(rs.total(), 0u);
}

TEST(SegMel, MelodyPartsMatchSegments) {
  ymtok::testing::CorpusGen gen(11);
  for (const auto& line : gen.lines(300)) {
    const auto ts = segmel_tokenize(line);
    for (std::size_t i = 0; i < ts.tokens.size(); ++i) {
      if (ts.tokens[i].kind != TokenKind::Segments) continue;
      ASSERT_LT(i + 1, ts.tokens.size());
      ASSERT_EQ(ts.tokens[i + 1].kind, TokenKind::Melody);
      EXPECT_EQ(segmel::split_parts(ts.tokens[i].text).size(), segmel::split_parts(ts.tokens[i + 1].text).size());
    }
  }
}

TEST(SegMel, VocabularyBound) {
  ymtok::testing::CorpusGen gen(12);
  std::set<std::string> all, segs, mels, other;
  for (const auto& line : gen.lines(500)) {
    for (const auto& t : segmel_tokenize(line).tokens) {
      all.insert(t.text);
      (t.kind == TokenKind::Segments ? segs : t.kind == TokenKind::Melody ? mels : other).insert(t.text);
    }
  }
  EXPECT_LE(all.size(), segs.size() + mels.size() + other.size());
}

TEST(RoundTrip, SimpleAndSegMelOnSyntheticCorpus) {
  ymtok::testing::CorpusGen gen(7);
  CharTokenizer ch;
  WordTokenizer wd;
  SegMelTokenizer sm;
  for (const auto& line : gen.lines(1000)) {
    for (const Tokenizer* t : std::initializer_list<const Tokenizer*>{&ch, &wd, &sm}) {
      RepairStats rs;
      ASSERT_EQ(t->detokenize(t->tokenize(line).texts(), &rs), line) << t->name();
      ASSERT_EQ(rs.total(), 0u) << t->name() << ": " << line;
    }
  }
}
