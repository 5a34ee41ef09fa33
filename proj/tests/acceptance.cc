// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "conspec/error.h"
#include "conspec/model.h"
#include "conspec/parser.h"
#include "conspec/realizer.h"
#include "conspec/transfer.h"
#include "conspec/treeline.h"
#include "conspec/verify.h"
#include "test_util.h"

namespace conspec {
namespace {

using testing::DataPath;

// Throws with a description of the first failed check.
struct Failure {
  std::string what;
};

void Require(bool ok, const std::string &what) {
  if (!ok) throw Failure{what};
}

Node NodeOf(const NetworkIndex &index, int id) { return index.node(id); }

void TrustDerivation() {
  Model m = LoadModel(DataPath("models/trust.tl"));
  auto r = Realize(m, ParseNetwork("trust > [{past}, {agent} > he, {theme} > John]"));
  Require(!r.empty() && r[0].text == "he trusted John", "top is not 'he trusted John'");
  for (size_t i = 1; i < r.size(); ++i) {
    Require(r[i].text != "he trusted John", "top hypothesis not unique");
  }
  std::vector<std::string> want = {
      "trust > [{past}, {agent} > he, {theme} > John]",
      "[he, trust > {past}, John]",
      "['he', trust, '+ed', 'John']",
      "['he', 'trust', '+ed', 'John']",
      "['he trusted John']",
  };
  Require(r[0].states == want, "trace does not replay the four steps");
}

void Analogy() {
  Model m = LoadModel(DataPath("models/analogy.tl"));
  auto j = Realize(m, ParseNetwork("jump > {past}"));
  Require(j[0].text == "jumped", "jump > {past} gave '" + j[0].text + "'");
  Require(j[0].score < 1.0, "jumped scored 1");
  auto t = Realize(m, ParseNetwork("trust > {past}"));
  Require(t[0].text == "trusted" && t[0].score == 1.0, "trusted not exact");
}

void Affixes() {
  Require(JoinAffixes({"trust", "+ed"}) == "trusted", "trusted");
  Require(JoinAffixes({"un+", "wanted"}) == "unwanted", "unwanted");
  Require(JoinAffixes({"berry", "-y", "+ies"}) == "berries", "berries");
  bool threw = false;
  try {
    JoinAffixes({"trust", "-z"});
  } catch (const Error &) {
    threw = true;
  }
  Require(threw, "['trust', '-z'] did not fail");
}

void NotationCorpus() {
  auto rows = ParseCorpus(ReadFile(DataPath("corpus/notation.tsv")));
  Require(rows.size() >= 45, "fewer than 45 rows");
  CheckReport report = CheckNotation(rows);
  Require(report.ok(), "notation check failed:\n" + report.Table());
  auto canon = [&](const std::string &surface) {
    for (const CorpusEntry &r : rows) {
      if (r.surface == surface) return Canonicalize(ParseNetwork(r.treeline));
    }
    throw Failure{"missing row " + surface};
  };
  Require(Equal(canon("Fred is the plumber."), canon("The plumber is Fred.")),
          "reification pair differs");
  Require(Equal(canon("Fred seems happy."), canon("It seems that Fred is happy.")),
          "copula pair differs");
  Model m = LoadModel(DataPath("models/english.tl"));
  Require(Equal(ParseText(m, "Fred seems happy.")[0].network,
                ParseText(m, "It seems that Fred is happy.")[0].network),
          "copula pair parses differ");
}

std::map<std::string, std::string> References(const char *text) {
  Network net = ResolveAnchors(ParseNetwork(text));
  NetworkIndex index(net);
  std::map<std::string, std::string> out;
  for (const Reference &r : net.references) {
    Node from = NodeOf(index, r.from);
    Node to = NodeOf(index, r.to);
    std::string key = from.is_concept() ? from.as_concept().label
                                        : "(" + HeadConcept(from).label + ")";
    out[key] = to.as_concept().label;
  }
  return out;
}

void Anchors() {
  using M = std::map<std::string, std::string>;
  Require(References("dog > (eat > [{past}, >>{agent}, {theme} > (butter > "
                     "peanut) > the])") == M{{"agent", "dog"}},
          "relative clause");
  Require(References("(dog > (have > [<<{agent}, >>{theme}]) > John)") ==
              M{{"agent", "John"}, {"theme", "dog"}},
          "possessive have");
  Require(References("Mary > (>>(sing > [>>{agent}, beautiful]) > a)") ==
              M{{"agent", "Mary"}, {"(sing)", "Mary"}},
          "beautiful singer");
}

void Inverse() {
  Model m = LoadModel(DataPath("models/english.tl"));
  auto rows = ParseCorpus(ReadFile(DataPath("corpus/english.tsv")));
  Require(rows.size() >= 15, "fewer than 15 corpus lines");
  CheckReport report = CheckCorpus(m, rows, 3);
  Require(report.ok(), "corpus check failed:\n" + report.Table());
}

void Oracle() {
  Lexicon lex = testing::SimilarityLexicon();
  testing::NetworkGenerator gen(8675309);
  for (int i = 0; i < 500; ++i) {
    Network a = Canonicalize(gen.Generate(6, false));
    // Half the pairs share a shape so that nonzero scores are common.
    Network b = i % 2 ? Canonicalize(gen.Generate(6, false))
                      : testing::Perturbed(a, gen.rng());
    double want = testing::BruteForceSim(lex, a, b, kDefaultAlpha);
    double got = NetworkSim(lex, a, b).score;
    Require(std::fabs(want - got) <= 1e-12,
            PrintNetwork(a) + " ~ " + PrintNetwork(b) + ": " +
                std::to_string(got) + " vs " + std::to_string(want));
  }
}

void Translation() {
  LanguagePair sov = LoadPair(DataPath("pairs/english-toysov.pair"));
  LanguagePair id = LoadPair(DataPath("pairs/english-identity.pair"));
  auto rows = ParseCorpus(ReadFile(DataPath("corpus/translations.tsv")));
  Require(rows.size() == 10, "expected 10 fixtures");
  for (const CorpusEntry &row : rows) {
    std::string got = Translate(sov, row.surface)[0].text;
    Require(got == row.treeline, row.surface + " -> " + got);
    got = Translate(id, row.surface)[0].text;
    Require(got == row.surface, "identity: " + row.surface + " -> " + got);
  }
}

void Robustness() {
  testing::NetworkGenerator gen(20240611);
  std::mt19937 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Network n = gen.Generate(12);
    Network c = Canonicalize(n);
    Require(Identical(Canonicalize(c), c), "not idempotent: " + PrintNetwork(n));
    Network s = testing::Shuffled(n, rng);
    Network t = testing::Shuffled(s, rng);
    Require(Equal(n, n) && Equal(n, s) && Equal(s, n) && Equal(s, t) && Equal(n, t),
            "equal not an equivalence on " + PrintNetwork(n));
  }
  auto rows = ParseCorpus(ReadFile(DataPath("corpus/notation.tsv")));
  const std::string alphabet = "ab {}[]()<>,^#'\".=+-~\t2";
  for (int i = 0; i < 20000; ++i) {
    std::string text = rows[rng() % rows.size()].treeline;
    for (int k = 0; k < 3 && !text.empty(); ++k) {
      size_t pos = rng() % text.size();
      switch (rng() % 3) {
        case 0: text.erase(pos, 1); break;
        case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        default: text[pos] = alphabet[rng() % alphabet.size()]; break;
      }
    }
    try {
      Network n = ParseNetwork(text);
      Canonicalize(n);
    } catch (const Error &) {
    }
  }
}

}  // namespace
}  // namespace conspec

int main() {
  using conspec::Failure;
  struct Criterion {
    const char *name;
    void (*run)();
  };
  const Criterion criteria[] = {
      {"trust derivation and trace", conspec::TrustDerivation},
      {"analogical generation", conspec::Analogy},
      {"affix joining", conspec::Affixes},
      {"notation corpus regression", conspec::NotationCorpus},
      {"anchor resolution", conspec::Anchors},
      {"parse/realize inverse on demo corpus", conspec::Inverse},
      {"network similarity oracle", conspec::Oracle},
      {"translation pipeline", conspec::Translation},
      {"robustness", conspec::Robustness},
  };
  int failed = 0;
  int n = 0;
  for (const Criterion &c : criteria) {
    ++n;
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.run();
    } catch (const Failure &f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception &e) {
      ok = false;
      detail = std::string("unexpected exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (ok && secs >= 5.0) {
      ok = false;
      detail = "took " + std::to_string(secs) + " s";
    }
    std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", n,
                c.name, secs);
    if (!ok) {
      std::printf("  %s\n", detail.c_str());
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
