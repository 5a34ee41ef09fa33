#include "conspec/network.h"

#include <algorithm>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "conspec/error.h"
#include "conspec/treeline.h"
#include "test_util.h"

namespace conspec {
namespace {

Network P(const char *text) { return ParseNetwork(text); }

std::string Canon(const char *text) { return PrintNetwork(Canonicalize(P(text))); }

TEST(CanonicalizeTest, StemlessFirstThenLabel) {
  EXPECT_EQ(Canon("approach > [{agent} > Anne, {past}]"),
            "approach > [{past}, {agent} > Anne]");
}

TEST(CanonicalizeTest, SingleConceptUnchanged) {
  EXPECT_EQ(Canon("trust"), "trust");
}

TEST(CanonicalizeTest, ApproachExampleOrdering) {
  EXPECT_EQ(Canon("approach > [{agent} > Anne, {past}, {theme} > (teacher > "
                  "stern) > the, reluctantly]"),
            "approach > [{past}, {agent} > Anne, {theme} > (teacher > stern) "
            "> the, reluctantly]");
}

TEST(CanonicalizeTest, ReificationRowsShareOneNetwork) {
  Network a = P("{re} > [Fred, (plumber > the)] > {present}");
  Network b = P("{re} > [(plumber > the), Fred] > {present}");
  EXPECT_TRUE(Equal(a, b));
}

// Every ordering of every specifier list must give the same canonical form.
TEST(CanonicalizeTest, AllSpecifierPermutationsAgree) {
  const char *cases[] = {
      "approach > [{agent} > Anne, {past}, {theme} > (teacher > stern) > the, "
      "reluctantly]",
      "x > [b > [q, p], a, {past}, {agent} > y, a > z]",
      "trade > [{past}, {agent} > John, {recipient} > Mary, {object 1} > "
      "marble > his, {object 2} > ribbon > her]",
  };
  for (const char *text : cases) {
    Network base = P(text);
    std::string want = PrintNetwork(Canonicalize(base));
    // Enumerate permutations of the root's specifiers, and of each child's.
    Node root = base.roots[0];
    std::vector<int> order(root.specifiers.size());
    std::iota(order.begin(), order.end(), 0);
    int count = 0;
    do {
      Node n = root;
      for (size_t i = 0; i < order.size(); ++i) {
        n.specifiers[i] = root.specifiers[order[i]];
      }
      for (Node &child : n.specifiers) {
        std::reverse(child.specifiers.begin(), child.specifiers.end());
      }
      EXPECT_EQ(PrintNetwork(Canonicalize(Network::Of(n))), want) << text;
      ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    EXPECT_GT(count, 1);
  }
}

TEST(EqualTest, Examples) {
  EXPECT_TRUE(Equal(P("Anne > quiet > {past}"), P("Anne > quiet > {past}")));
  EXPECT_TRUE(Equal(P("x > [a, b]"), P("x > [b, a]")));
  EXPECT_FALSE(Equal(P("((clothing > silk) > all)"),
                     P("(clothing > (silk > all))")));
}

TEST(EqualTest, GroupingIsSignificant) {
  EXPECT_FALSE(Equal(P("a > b > c"), P("a > [b, c]")));
  EXPECT_FALSE(Equal(P("(a > b) > c"), P("a > b > c")));
}

TEST(EqualTest, ExplicitHeadOnFirstRootIsImplicit) {
  EXPECT_TRUE(Equal(P("(^a, b) > c"), P("(a, b) > c")));
  EXPECT_FALSE(Equal(P("(a, ^b) > c"), P("(a, b) > c")));
  EXPECT_TRUE(Equal(P("(a, ^b) > c"), P("(^b, a) > c")));
}

TEST(ResolveAnchorsTest, RelativeClauseAgentIsDog) {
  Network net =
      ResolveAnchors(P("dog > (eat > [{past}, >>{agent}, {theme} > (butter > "
                       "peanut) > the])"));
  NetworkIndex index(net);
  ASSERT_EQ(net.references.size(), 1u);
  EXPECT_EQ(index.node(net.references[0].from).as_concept().label, "agent");
  EXPECT_EQ(index.node(net.references[0].to).as_concept().label, "dog");
}

TEST(ResolveAnchorsTest, PossessiveHave) {
  Network net = ResolveAnchors(P("(dog > (have > [<<{agent}, >>{theme}]) > John)"));
  NetworkIndex index(net);
  std::map<std::string, std::string> got;
  for (const Reference &r : net.references) {
    got[index.node(r.from).as_concept().label] =
        index.node(r.to).as_concept().label;
  }
  EXPECT_EQ(got, (std::map<std::string, std::string>{{"agent", "John"},
                                                     {"theme", "dog"}}));
}

TEST(ResolveAnchorsTest, DoubleUpReachesMary) {
  Network net = ResolveAnchors(P("Mary > (>>(sing > [>>{agent}, beautiful]) > a)"));
  NetworkIndex index(net);
  ASSERT_EQ(net.references.size(), 2u);
  for (const Reference &r : net.references) {
    EXPECT_EQ(index.node(r.to).as_concept().label, "Mary");
  }
  bool agent = std::any_of(net.references.begin(), net.references.end(),
                           [&](const Reference &r) {
                             const Node &n = index.node(r.from);
                             return n.is_concept() &&
                                    n.as_concept().label == "agent";
                           });
  EXPECT_TRUE(agent);
}

TEST(ResolveAnchorsTest, PreservesConceptMultiset) {
  Network net = P("(dog > (have > [<<{agent}, >>{theme}]) > John) > hungry");
  EXPECT_EQ(ConceptMultiset(ResolveAnchors(net)), ConceptMultiset(net));
}

TEST(ResolveAnchorsTest, Errors) {
  // No capsule to cross.
  EXPECT_THROW(ResolveAnchors(Network::Of([] {
                 Node n = Node::Of(Concept::Stem("x"));
                 n.anchor = Anchor{AnchorDirection::kUp, 1};
                 return n;
               }())),
               Error);
  // A capsule body root that specifies nothing outside.
  EXPECT_THROW(Canonicalize(P("(eat > >>{agent})")), Error);
  try {
    Canonicalize(P("(eat > >>{agent})"));
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedNetwork);
  }
}

TEST(PropertyTest, CanonicalizeIdempotentOnGeneratedNetworks) {
  testing::NetworkGenerator gen(20240611);
  for (int i = 0; i < 1000; ++i) {
    Network n = gen.Generate(12);
    Network c = Canonicalize(n);
    EXPECT_TRUE(Identical(Canonicalize(c), c)) << PrintNetwork(c);
    EXPECT_EQ(CanonicalKey(Canonicalize(c)), CanonicalKey(c));
  }
}

TEST(PropertyTest, EqualIsAnEquivalence) {
  testing::NetworkGenerator gen(77);
  std::vector<Network> pool;
  for (int i = 0; i < 1000; ++i) pool.push_back(gen.Generate(8));
  std::mt19937 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Network &a = pool[i];
    Network b = testing::Shuffled(a, rng);
    Network c = testing::Shuffled(b, rng);
    // Reflexive.
    EXPECT_TRUE(Equal(a, a));
    // Shuffled copies are equal, both ways, and transitively.
    EXPECT_TRUE(Equal(a, b)) << PrintNetwork(a) << " vs " << PrintNode(b.roots[0]);
    EXPECT_TRUE(Equal(b, a));
    EXPECT_TRUE(Equal(b, c));
    EXPECT_TRUE(Equal(a, c));
    // Symmetry and transitivity against a different network.
    const Network &d = pool[(i * 7 + 3) % pool.size()];
    EXPECT_EQ(Equal(a, d), Equal(d, a));
    if (Equal(a, d)) EXPECT_TRUE(Equal(c, d));
    else EXPECT_FALSE(Equal(c, d));
  }
}

TEST(PropertyTest, ResolveAnchorsKeepsConcepts) {
  testing::NetworkGenerator gen(99);
  for (int i = 0; i < 300; ++i) {
    Network n = Canonicalize(gen.Generate(12));
    Network r = ResolveAnchors(n);
    EXPECT_EQ(ConceptMultiset(r), ConceptMultiset(n));
    int anchored = 0;
    NetworkIndex index(n);
    for (int id = 0; id < index.size(); ++id) anchored += index.node(id).anchor.has_value();
    EXPECT_EQ(static_cast<int>(r.references.size()), anchored);
  }
}

}  // namespace
}  // namespace conspec
