#ifndef CONSPEC_REALIZER_H_
#define CONSPEC_REALIZER_H_

#include <string>
#include <vector>

#include "conspec/model.h"
#include "conspec/network.h"

namespace conspec {

struct RealizeResult {
  std::string text;
  double score = 0.0;
  // Hypothesis states, from the input network to the joined text.
  std::vector<std::string> states;
  // Applied rules, surface lookups and beam pruning, in order.
  std::vector<std::string> trace;
};

// Folds affix-marked literals: "+x" appends to the previous token, "-x"
// strips suffix x from it, "x+" prefixes the next token; plain tokens are
// joined with single spaces. Throws an unrealizable-fragment error on a
// dangling affix or a missing suffix.
std::string JoinAffixes(const std::vector<std::string> &tokens);

// Sentence-initial capital and a terminal period unless the text already
// ends in '.', '?' or '!'.
std::string ApplyOrthography(const std::string &text);

// Rewrites the network into text. Each step rewrites every fragment of
// every hypothesis once, bifurcating over matching rules. Results are
// ranked by score, then shorter text, then lexicographically, and
// deduplicated by text. Throws an unrealizable-fragment error (stage
// "realize") when every hypothesis gets stuck.
std::vector<RealizeResult> Realize(const Model &model, const Network &network);

}  // namespace conspec

#endif  // CONSPEC_REALIZER_H_
