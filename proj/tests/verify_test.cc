#include "conspec/verify.h"

#include <gtest/gtest.h>

#include "conspec/model.h"
#include "conspec/treeline.h"
#include "test_util.h"

namespace conspec {
namespace {

std::vector<std::string> Warnings(const std::vector<LintMessage> &messages) {
  std::vector<std::string> out;
  for (const LintMessage &m : messages) {
    if (m.severity == LintMessage::Severity::kWarning) out.push_back(m.ToString());
  }
  return out;
}

TEST(LintTest, ReportsEachProblemWithItsLine) {
  const char *model =
      "a = b\n"
      "x > {mood} <=> [x, '+s']\n"
      "a = c\n"
      "p > q\n"
      "p, q\n"
      "trust > {past} <=> [trust, '+ed']\n";
  auto w = Warnings(LintModel(model, "m.tl", nullptr));
  ASSERT_EQ(w.size(), 4u);
  EXPECT_NE(w[0].find("m.tl:2"), std::string::npos) << w[0];
  EXPECT_NE(w[0].find("{mood}"), std::string::npos);
  EXPECT_NE(w[1].find("m.tl:3"), std::string::npos) << w[1];
  EXPECT_NE(w[1].find("1"), std::string::npos);
  EXPECT_NE(w[2].find("m.tl:4"), std::string::npos) << w[2];
  EXPECT_NE(w[3].find("multi-root"), std::string::npos) << w[3];
}

TEST(LintTest, UnusedRulesNeedACorpus) {
  const char *model =
      "trust > {past} <=> [trust, '+ed']\n"
      "jump > {past} <=> [jump, '+ed']\n";
  auto corpus = ParseCorpus("trusted\ttrust > {past}\n");
  auto w = Warnings(LintModel(model, "m.tl", &corpus));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("m.tl:2"), std::string::npos) << w[0];
  EXPECT_NE(w[0].find("not used"), std::string::npos) << w[0];
  EXPECT_TRUE(Warnings(LintModel(model, "m.tl", nullptr)).empty());
}

TEST(LintTest, ShippedModelsAreClean) {
  for (const char *name : {"models/english.tl", "models/toysov.tl",
                           "models/trust.tl", "models/analogy.tl"}) {
    std::string path = testing::DataPath(name);
    EXPECT_TRUE(Warnings(LintModel(ReadFile(path), path, nullptr)).empty()) << name;
  }
}

TEST(CheckCorpusTest, ReportsFailingRows) {
  Model m = LoadModel(testing::DataPath("models/trust.tl"));
  auto corpus = ParseCorpus(
      "trusted\ttrust > {past}\n"
      "he trusted John\ttrust > [{past}, {agent} > he, {theme} > John]\n"
      "jumped\tjump > {past}\n");
  CheckReport report = CheckCorpus(m, corpus);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_TRUE(report.rows[0].ok());
  EXPECT_TRUE(report.rows[1].ok());
  EXPECT_FALSE(report.rows[2].ok());
  EXPECT_FALSE(report.ok());
  EXPECT_NE(report.Table().find("2/3 lines passed"), std::string::npos)
      << report.Table();
}

TEST(CheckCorpusTest, OrderIndependent) {
  Model m = LoadModel(testing::DataPath("models/english.tl"));
  auto rows = ParseCorpus(ReadFile(testing::DataPath("corpus/english.tsv")));
  CheckReport forward = CheckCorpus(m, rows);
  std::reverse(rows.begin(), rows.end());
  CheckReport backward = CheckCorpus(m, rows);
  ASSERT_EQ(forward.rows.size(), backward.rows.size());
  for (size_t i = 0; i < forward.rows.size(); ++i) {
    const CheckRow &a = forward.rows[i];
    const CheckRow &b = backward.rows[backward.rows.size() - 1 - i];
    EXPECT_EQ(a.line, b.line);
    EXPECT_EQ(a.ok(), b.ok());
  }
  EXPECT_TRUE(forward.ok());
}

}  // namespace
}  // namespace conspec
