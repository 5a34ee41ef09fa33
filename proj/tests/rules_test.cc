#include "conspec/rules.h"

#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "conspec/error.h"
#include "conspec/model.h"
#include "conspec/treeline.h"
#include "test_util.h"

namespace conspec {
namespace {

// Matches point into the target, so it lives as long as the test.
std::vector<Match> MatchAll(const Model &m, const char *net) {
  static std::vector<std::unique_ptr<Network>> targets;
  targets.push_back(std::make_unique<Network>(Canonicalize(ParseNetwork(net))));
  return MatchRules(m.rules(), m.matcher(), targets.back()->roots[0]);
}

TEST(MatchRulesTest, ExactMatch) {
  Model m = LoadModel(testing::DataPath("models/trust.tl"));
  std::vector<Match> got = MatchAll(m, "trust > {past}");
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].score, 1.0);
  EXPECT_TRUE(got[0].exact());
  EXPECT_EQ(got[0].rule->id(), 1);
}

TEST(MatchRulesTest, AnalogicalMatch) {
  Model m = LoadModel(testing::DataPath("models/analogy.tl"));
  std::vector<Match> got = MatchAll(m, "jump > {past}");
  ASSERT_EQ(got.size(), 1u);
  EXPECT_NEAR(got[0].score, std::sqrt(0.9), 1e-12);
  EXPECT_FALSE(got[0].exact());
  // The bound node for the carried concept is jump.
  bool jump = false;
  for (const Node *b : got[0].bound) {
    if (b != nullptr && b->is_concept() && b->as_concept().label == "jump") jump = true;
  }
  EXPECT_TRUE(jump);
}

TEST(MatchRulesTest, NoMatch) {
  Model m = LoadModel(testing::DataPath("models/analogy.tl"));
  EXPECT_TRUE(MatchAll(m, "Anne > quiet").empty());
}

TEST(MatchRulesTest, SortedByScoreThenDeclaration) {
  Model m = LoadModelFromString(
      "jump = {verb}\n"
      "trust = {verb}\n"
      "trust > {past} <=> [trust, '+ed']\n"
      "jump > {past} <=> [jump, '+ed']\n"
      "x > {past} <=> [x, '+t']\n");
  std::vector<Match> got = MatchAll(m, "jump > {past}");
  ASSERT_GE(got.size(), 2u);
  EXPECT_EQ(got[0].rule->id(), 2);
  EXPECT_EQ(got[0].score, 1.0);
  EXPECT_LT(got[1].score, 1.0);
  for (size_t i = 1; i < got.size(); ++i) {
    EXPECT_TRUE(got[i - 1].score > got[i].score ||
                (got[i - 1].score == got[i].score &&
                 got[i - 1].rule->id() < got[i].rule->id()));
  }
}

TEST(MatchRulesTest, ApplyProducesItems) {
  Model m = LoadModel(testing::DataPath("models/trust.tl"));
  std::vector<Match> got =
      MatchAll(m, "trust > [{past}, {agent} > he, {theme} > John]");
  ASSERT_FALSE(got.empty());
  EXPECT_EQ(PrintItems(m.matcher().Apply(got[0])), "[he, trust > {past}, John]");
}

TEST(MatchRulesTest, Deterministic) {
  Model m = LoadModel(testing::DataPath("models/english.tl"));
  Network n = Canonicalize(ParseNetwork("trust > [{past}, {agent} > he, {theme} > John]"));
  std::vector<Match> a = MatchRules(m.rules(), m.matcher(), n.roots[0]);
  std::vector<Match> b = MatchRules(m.rules(), m.matcher(), n.roots[0]);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].rule, b[i].rule);
    EXPECT_EQ(a[i].score, b[i].score);
  }
}

TEST(RuleCompileTest, Errors) {
  const char *bad[] = {
      "a > b <=> [c]",               // part not in lhs
      "a > [b, b] <=> [a, b]",       // ambiguous part
      "a > b <=> [a > b, b]",        // overlapping parts
      "a > b <=> [a, '']",           // empty literal
  };
  for (const char *text : bad) {
    try {
      LoadModelFromString(text, "r.tl");
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kModelLoad) << text;
      EXPECT_EQ(e.location().line, 1) << text;
    }
  }
  EXPECT_THROW(LoadModelFromString("a > b\nc > d <=> [c]\nx"), Error);
}

}  // namespace
}  // namespace conspec
