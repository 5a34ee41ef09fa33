#include "cli.h"

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace conspec {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args, const std::string &input = "") {
  args.insert(args.begin(), "conspec");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = RunCli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kTrust =
    "trust > [{past}, {agent} > he, {theme} > John]";

TEST(CliTest, Realize) {
  CliRun r = Cli({"realize", "--model", testing::DataPath("models/trust.tl"), kTrust});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "he trusted John\n");
  r = Cli({"realize", "--model", testing::DataPath("models/trust.tl"), "--all",
           "--trace", "-"},
          kTrust + "\n");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("1.000000\the trusted John"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("= [he, trust > {past}, John]"), std::string::npos);
}

TEST(CliTest, ParseJson) {
  CliRun r = Cli({"parse", "--model", testing::DataPath("models/trust.tl"), "--json",
               "he trusted John"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"treeline\": \"" + kTrust + "\""), std::string::npos)
      << r.out;
}

TEST(CliTest, Translate) {
  CliRun r = Cli({"translate", "--pair", testing::DataPath("pairs/english-toysov.pair"),
               "He trusted John."});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "ka ga Jon o shinta\n");
}

TEST(CliTest, Canon) {
  CliRun r = Cli({"canon", "-"},
              "approach > [{agent} > Anne, {past}, {theme} > (teacher > stern) > "
              "the, reluctantly]\n");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out,
            "approach > [{past}, {agent} > Anne, {theme} > (teacher > stern) > "
            "the, reluctantly]\n");
}

TEST(CliTest, CheckCorpus) {
  CliRun r = Cli({"check", "--model", testing::DataPath("models/english.tl"),
               "--corpus", testing::DataPath("corpus/english.tsv")});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  r = Cli({"check", "--notation", "--corpus", testing::DataPath("corpus/notation.tsv")});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  // The demo sentences are beyond the trust model.
  r = Cli({"check", "--model", testing::DataPath("models/trust.tl"), "--corpus",
           testing::DataPath("corpus/english.tsv")});
  EXPECT_EQ(r.code, kExitFailure);
}

TEST(CliTest, Lint) {
  CliRun r = Cli({"lint", "--model", testing::DataPath("models/english.tl")});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("0 warning(s)"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"realize", "--beam", "zero", "x"}).code, kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
  EXPECT_EQ(Cli({"parse", "--model", "/nonexistent.tl", "x"}).code, kExitModelLoad);
  CliRun r = Cli({"parse", "--model", testing::DataPath("models/english.tl"), "xyzzy"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("parse"), std::string::npos) << r.err;
  EXPECT_EQ(Cli({"canon", "-"}, "a > [b\n").code, kExitFailure);
}

int Count(const std::string &s, const std::string &needle) {
  int n = 0;
  for (size_t pos = s.find(needle); pos != std::string::npos;
       pos = s.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

TEST(CliTest, ExportDotCounts) {
  // 12 concepts + 2 capsules; 11 specification edges, 2 body edges and
  // 1 reference.
  CliRun r = Cli({"export", "--dot", "-"},
              "bark > [{past}, {agent} > dog > (eat > [{past}, >>{agent}, "
              "{theme} > (butter > peanut) > the]), happily]\n");
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Count(r.out, "shape="), 14);
  EXPECT_EQ(Count(r.out, "->"), 14);
  EXPECT_EQ(Count(r.out, "style=dashed"), 2);
  EXPECT_EQ(Count(r.out, "style=dotted"), 1);
  EXPECT_EQ(Cli({"export", "-"}, "a\n").code, kExitUsage);
}

}  // namespace
}  // namespace conspec
