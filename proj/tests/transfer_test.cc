#include "conspec/transfer.h"

#include <cmath>

#include <gtest/gtest.h>

#include "conspec/error.h"
#include "conspec/parser.h"
#include "conspec/realizer.h"
#include "conspec/treeline.h"
#include "test_util.h"

namespace conspec {
namespace {

const LanguagePair &Sov() {
  static const LanguagePair pair =
      LoadPair(testing::DataPath("pairs/english-toysov.pair"));
  return pair;
}

TEST(ApplyTransferTest, IdentityMapReturnsInput) {
  ConceptMap map;
  map.set_identity(true);
  Model m;
  Network n = Canonicalize(ParseNetwork("approach > [{past}, {agent} > Anne]"));
  auto out = ApplyTransfer({}, map, m, n);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(Equal(out[0].network, n));
  EXPECT_EQ(out[0].score, 1.0);
}

TEST(ApplyTransferTest, RelocatesTense) {
  const LanguagePair &p = Sov();
  auto out = ApplyTransfer(
      p.rules, p.map, p.source,
      Canonicalize(ParseNetwork("trust > [{past}, {agent} > he, {theme} > John]")));
  ASSERT_FALSE(out.empty());
  EXPECT_TRUE(Equal(out[0].network,
                    ParseNetwork("(shin > [{ag} > ka, {th} > Jon]) > {pst}")))
      << PrintNetwork(out[0].network);
  EXPECT_EQ(out[0].score, 1.0);
}

TEST(ApplyTransferTest, AnalogicalRuleUseScoresBelowOne) {
  const LanguagePair &p = Sov();
  auto out = ApplyTransfer(
      p.rules, p.map, p.source,
      Canonicalize(ParseNetwork("lift > [{past}, {agent} > John, {theme} > rock > a]")));
  ASSERT_FALSE(out.empty());
  EXPECT_TRUE(Equal(out[0].network,
                    ParseNetwork("(age > [{ag} > Jon, {th} > ishi > aru]) > {pst}")))
      << PrintNetwork(out[0].network);
  EXPECT_LT(out[0].score, 1.0);
}

TEST(ApplyTransferTest, Untranslatable) {
  const LanguagePair &p = Sov();
  try {
    ApplyTransfer(p.rules, p.map, p.source,
                  Canonicalize(ParseNetwork("dog > happy")));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUntranslatableConcept);
    EXPECT_EQ(e.stage(), "transfer");
    EXPECT_NE(e.message().find("dog"), std::string::npos) << e.what();
  }
}

TEST(TranslateTest, Fixtures) {
  auto rows = ParseCorpus(ReadFile(testing::DataPath("corpus/translations.tsv")));
  ASSERT_EQ(rows.size(), 10u);
  for (const CorpusEntry &row : rows) {
    auto out = Translate(Sov(), row.surface);
    ASSERT_FALSE(out.empty()) << row.surface;
    EXPECT_EQ(out[0].text, row.treeline) << row.surface;
  }
}

TEST(TranslateTest, IdentityPairPreservesStrings) {
  LanguagePair id = LoadPair(testing::DataPath("pairs/english-identity.pair"));
  auto rows = ParseCorpus(ReadFile(testing::DataPath("corpus/translations.tsv")));
  for (const CorpusEntry &row : rows) {
    auto out = Translate(id, row.surface);
    ASSERT_FALSE(out.empty()) << row.surface;
    EXPECT_EQ(out[0].text, row.surface);
  }
}

TEST(TranslateTest, ScoreIsProductOfStages) {
  const LanguagePair &p = Sov();
  for (const char *text : {"He trusted John.", "John lifted a rock.", "Fred is happy."}) {
    auto parsed = ParseText(p.source, text);
    auto moved = ApplyTransfer(p.rules, p.map, p.source, parsed[0].network);
    auto realized = Realize(p.receptor, moved[0].network);
    auto out = Translate(p, text);
    EXPECT_NEAR(out[0].score, parsed[0].score * moved[0].score * realized[0].score,
                1e-12)
        << text;
  }
}

TEST(TranslateTest, ErrorsCarryStage) {
  try {
    Translate(Sov(), "xyzzy");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnparseableText);
    EXPECT_EQ(e.stage(), "parse");
  }
  try {
    Translate(Sov(), "The dog slept.");
  } catch (const Error &e) {
    EXPECT_FALSE(e.stage().empty());
  }
}

TEST(LoadPairTest, Errors) {
  try {
    LoadPairFromString("source: nope.tl\nreceptor: nope.tl\n", "/tmp/x.pair");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kModelLoad);
  }
  std::string models = testing::DataPath("models/");
  EXPECT_THROW(LoadPairFromString("source: " + models + "trust.tl\nreceptor: " +
                                      models + "trust.tl\na <=> [a]\n"),
               Error);
  EXPECT_THROW(LoadPairFromString("source: " + models + "trust.tl\nreceptor: " +
                                      models + "trust.tl\na > {nosuch} => b\n"),
               Error);
  EXPECT_THROW(LoadPairFromString("source: " + models + "trust.tl\n"), Error);
}

}  // namespace
}  // namespace conspec
