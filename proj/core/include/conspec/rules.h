#ifndef CONSPEC_RULES_H_
#define CONSPEC_RULES_H_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conspec/lexicon.h"
#include "conspec/network.h"
#include "conspec/similarity.h"
#include "conspec/treeline.h"

namespace conspec {

struct EngineOptions {
  double alpha = kDefaultAlpha;
  // Minimum match score for a rule to apply.
  double tau = 0.5;
  // Hypotheses kept per step (realizer, transfer) or per chart cell (parser).
  int beam = 16;
  // Sentence-initial capital and terminal period on output text.
  bool orthography = false;
};

// One element of a hypothesis: a surface literal or a network fragment.
using Item = std::variant<std::string, Node>;

std::string PrintItems(const std::vector<Item> &items);

// A realization rule `lhs <=> [part, ...]`.
//
// Each non-literal part names a piece of the left side; the lhs nodes it
// covers are "carried" (their concepts may be substituted by analogy), the
// nodes in no part are "consumed" (matched exactly or through is_a and
// dropped from the output). A part that is a single lhs node without
// specifiers is a slot: it captures the whole matched subtree.
class Rule {
 public:
  struct PatternNode {
    bool capsule = false;
    Concept term;       // concept nodes; head concept for capsules
    std::optional<Anchor> anchor;
    bool head = false;
    std::vector<int> body;  // capsule roots
    std::vector<int> specs;
    int part = -1;  // index into parts(), or -1 when consumed
    bool slot = false;
    // Part root that is a capsule with one body root and specifiers: the
    // capsule is dropped when realizing and rebuilt when parsing.
    bool unwrap = false;
  };

  struct Part {
    std::optional<std::string> literal;
    int node = -1;  // pattern root of a sub-pattern part
  };

  // Throws a model-load error when a part is missing from or ambiguous in
  // the left side, or two parts overlap.
  static Rule Compile(const RuleStmt &stmt, int id, int line = 0);

  int id() const { return id_; }
  int line() const { return line_; }
  const std::string &text() const { return text_; }
  const Network &lhs() const { return lhs_; }
  const std::vector<PatternNode> &nodes() const { return nodes_; }
  const std::vector<Part> &parts() const { return parts_; }
  // Number of factors in the geometric-mean match score.
  int factor_count() const { return factor_count_; }
  int pattern_part_count() const;
  std::string Name() const;

 private:
  int Flatten(const Node &node);

  int id_ = 0;
  int line_ = 0;
  std::string text_;
  Network lhs_;
  std::vector<PatternNode> nodes_;
  std::vector<Part> parts_;
  int factor_count_ = 0;
};

using RuleSet = std::vector<Rule>;

// A realize-direction match of a rule's lhs at the root of a fragment.
struct Match {
  const Rule *rule = nullptr;
  double score = 0.0;
  // Target node bound to each pattern node (null inside capsule slots).
  std::vector<const Node *> bound;

  bool exact() const { return score >= 1.0; }
};

// A parse-direction match: the lhs network rebuilt from part fragments.
struct ParseMatch {
  const Rule *rule = nullptr;
  double score = 0.0;
  Node node;
};

class Matcher {
 public:
  Matcher(const Lexicon &lexicon, const SimilarityProvider &similarity,
          double tau)
      : lexicon_(lexicon), similarity_(similarity), tau_(tau) {}

  // Every alignment of the rule's lhs onto `target` scoring at least tau.
  std::vector<Match> MatchRealize(const Rule &rule, const Node &target) const;

  // The items replacing the matched fragment.
  std::vector<Item> Apply(const Match &match) const;

  // Matches the rule's sub-pattern parts, in order, against `fragments`
  // and rebuilds the lhs. Literal parts are the caller's business.
  std::vector<ParseMatch> MatchParse(
      const Rule &rule, const std::vector<const Node *> &fragments) const;

  // Score of a carried pattern concept against a target concept: 1 for
  // equality or is_a, else similarity; stemless concepts never substitute.
  double Carried(const Concept &pattern, const Concept &target) const;
  // Score of a consumed pattern concept: 1 for equality or is_a, else 0.
  double Consumed(const Concept &pattern, const Concept &target) const;

  const Lexicon &lexicon() const { return lexicon_; }
  double tau() const { return tau_; }

 private:
  const Lexicon &lexicon_;
  const SimilarityProvider &similarity_;
  double tau_;
};

// All realize-direction matches at the root of `target`, sorted by score
// (descending), then rule declaration order.
std::vector<Match> MatchRules(const RuleSet &rules, const Matcher &matcher,
                              const Node &target);

// Parse direction: all rules whose right side lines up with `items`
// (literals against literals, sub-patterns against fragments), sorted the
// same way.
std::vector<ParseMatch> MatchRules(const RuleSet &rules,
                                   const Matcher &matcher,
                                   const std::vector<Item> &items);

}  // namespace conspec

#endif  // CONSPEC_RULES_H_
