#include "conspec/similarity.h"

#include <cmath>

#include <gtest/gtest.h>

#include "conspec/treeline.h"
#include "test_util.h"

namespace conspec {
namespace {

Lexicon VerbLexicon() {
  Lexicon lex = Lexicon::WithDefaults();
  lex.Define(Concept::Stem("trust"), ParseNetwork("{verb}"));
  lex.Define(Concept::Stem("jump"), ParseNetwork("{verb}"));
  lex.Define(Concept::Stem("Anne"), ParseNetwork("girl"));
  return lex;
}

TEST(ConceptSimTest, Examples) {
  Lexicon lex = VerbLexicon();
  EXPECT_EQ(ConceptSim(lex, Concept::Stem("trust"), Concept::Stem("trust")), 1.0);
  EXPECT_DOUBLE_EQ(ConceptSim(lex, Concept::Stem("trust"), Concept::Stem("jump")), 0.9);
  EXPECT_EQ(ConceptSim(lex, Concept::Stem("trust"), Concept::Stem("Anne")), 0.0);
}

TEST(ConceptSimTest, SymmetricAndBounded) {
  Lexicon lex = testing::SimilarityLexicon();
  testing::NetworkGenerator gen(3);
  for (int i = 0; i < 500; ++i) {
    Concept a = gen.RandomConcept(), b = gen.RandomConcept();
    double ab = ConceptSim(lex, a, b), ba = ConceptSim(lex, b, a);
    EXPECT_EQ(ab, ba);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_EQ(ConceptSim(lex, a, a), 1.0);
    if (!(a == b)) EXPECT_LT(ab, 1.0);
  }
}

TEST(NetworkSimTest, AnalogicalTrustJump) {
  Lexicon lex = VerbLexicon();
  SimilarityResult r =
      NetworkSim(lex, ParseNetwork("trust > {past}"), ParseNetwork("jump > {past}"));
  EXPECT_NEAR(r.score, std::sqrt(0.9), 1e-12);
  EXPECT_NEAR(r.score, 0.949, 5e-4);
  EXPECT_EQ(r.binding, (Binding{{0, 0}, {1, 1}}));
}

TEST(NetworkSimTest, IdentityAndStemlessMismatch) {
  Lexicon lex = VerbLexicon();
  Network n = Canonicalize(ParseNetwork("trust > [{past}, {agent} > he]"));
  SimilarityResult same = NetworkSim(lex, n, n);
  EXPECT_EQ(same.score, 1.0);
  for (const auto &[p, t] : same.binding) EXPECT_EQ(p, t);

  SimilarityResult r = NetworkSim(lex, ParseNetwork("trust > {past}"),
                                  ParseNetwork("trust > {future}"));
  EXPECT_EQ(r.score, 0.0);
  EXPECT_TRUE(r.binding.empty());
}

// The dynamic-programming aligner against exhaustive enumeration.
TEST(NetworkSimTest, MatchesBruteForceOracle) {
  Lexicon lex = testing::SimilarityLexicon();
  testing::NetworkGenerator gen(8675309);
  int nonzero = 0, analogical = 0;
  for (int i = 0; i < 500; ++i) {
    Network a = Canonicalize(gen.Generate(6, false));
    Network b;
    // Half the pairs share a shape so that nonzero scores are common.
    if (i % 2 == 0) {
      b = testing::Perturbed(a, gen.rng());
    } else {
      b = Canonicalize(gen.Generate(6, false));
    }
    double want = testing::BruteForceSim(lex, a, b, kDefaultAlpha);
    SimilarityResult got = NetworkSim(lex, a, b);
    EXPECT_NEAR(got.score, want, 1e-12)
        << PrintNetwork(a) << " ~ " << PrintNetwork(b);
    if (want > 0) ++nonzero;
    if (want > 0 && want < 1) ++analogical;
  }
  EXPECT_GT(nonzero, 100);
  EXPECT_GE(analogical, 15);
}

}  // namespace
}  // namespace conspec
