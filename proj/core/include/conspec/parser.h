#ifndef CONSPEC_PARSER_H_
#define CONSPEC_PARSER_H_

#include <string>
#include <vector>

#include "conspec/model.h"
#include "conspec/network.h"

namespace conspec {

// Stems and affix literals whose JoinAffixes is the segmented text.
struct Segmentation {
  std::vector<std::string> tokens;
};

// All ways to split `text` into known surface forms and the affix
// literals of the model's rules (at most four affixes per word). Throws an
// unparseable-text error naming the longest segmentable prefix.
std::vector<Segmentation> Segment(const Model &model, const std::string &text);

struct ParseResult {
  Network network;  // canonical
  double score = 0.0;
  std::vector<std::string> trace;
};

// Runs the realization rules backwards over a chart of token spans. Only
// complete parses are returned: canonical, deduplicated, ranked by score
// and then by tree-line text. Throws an unparseable-text error (stage
// "parse") listing the best partial spans when nothing covers the input.
std::vector<ParseResult> ParseText(const Model &model, const std::string &text);

}  // namespace conspec

#endif  // CONSPEC_PARSER_H_
