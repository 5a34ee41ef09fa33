#ifndef CONSPEC_VERIFY_H_
#define CONSPEC_VERIFY_H_

#include <string>
#include <vector>

#include "conspec/error.h"
#include "conspec/model.h"
#include "conspec/treeline.h"

namespace conspec {

// One corpus line of a regression run.
struct CheckRow {
  int line = 0;
  std::string surface;
  std::string treeline;
  bool parse = false;          // parse(surface) top-k holds the network
  bool realize = false;        // realize(network) top-k holds the surface
  bool parse_realize = false;  // parse(realize(network).top) holds it
  bool realize_parse = false;  // realize(parse(surface).top) holds surface
  std::string detail;          // first error, if any

  bool ok() const { return parse && realize && parse_realize && realize_parse; }
};

struct CheckReport {
  std::vector<CheckRow> rows;
  bool ok() const;
  // Fixed-width pass/fail table, one row per corpus line.
  std::string Table() const;
};

// Full regression of a corpus against a model, `top` candidates deep.
CheckReport CheckCorpus(const Model &model,
                        const std::vector<CorpusEntry> &corpus, int top = 3);

// Notation-only regression: every tree-line string parses, canonicalizes to
// a fixed point and round-trips through the printer. Only the `parse`
// column is filled; the others are marked passing.
CheckReport CheckNotation(const std::vector<CorpusEntry> &corpus);

struct LintMessage {
  enum class Severity { kNote, kWarning };
  Severity severity = Severity::kWarning;
  Location location;
  std::string message;

  std::string ToString() const;
};

// Lints a model file: undeclared stemless labels, multi-root networks,
// duplicate definitions and, given a corpus, rules that no corpus line
// uses. Throws a model-load error when the text does not load.
std::vector<LintMessage> LintModel(const std::string &text,
                                   const std::string &path,
                                   const std::vector<CorpusEntry> *corpus =
                                       nullptr);

}  // namespace conspec

#endif  // CONSPEC_VERIFY_H_
