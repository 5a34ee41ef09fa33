#ifndef CONSPEC_TREELINE_H_
#define CONSPEC_TREELINE_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "conspec/network.h"

namespace conspec {

// Tree-line notation.
//
//   network := chain ("," chain)*
//   chain   := item (">" (item | group))*
//   group   := "[" chain ("," chain)* "]"
//   item    := anchor* "^"? (word | "{" words "}" | "(" network ")")
//   anchor  := ">>" | "<<"
//
// Each item after ">" specifies the chain's current head and becomes the new
// head; a group attaches every element to the current head and leaves the
// head unchanged. Words may contain inner spaces ("pick up") and a "#N"
// sense suffix. "^" marks a capsule head other than the left-most root.

// Parses a single tree-line expression. Parse notes (normalizations worth a
// lint message) are appended to `notes` when given.
Network ParseNetwork(std::string_view text,
                     std::vector<std::string> *notes = nullptr);

// Parses a single concept spelling: "trust", "{past}", "bank#2".
Concept ParseConcept(std::string_view text);

// Canonical tree-line text of a network (the input is canonicalized first).
std::string PrintNetwork(const Network &network);
// Prints a node exactly as ordered, without canonicalizing.
std::string PrintNode(const Node &node);

// Quotes a surface literal for display: 'he', "+'s".
std::string QuoteLiteral(const std::string &literal);

struct RulePart {
  // A quoted surface literal, or a sub-pattern of the rule's left side.
  std::optional<std::string> literal;
  Network pattern;

  bool is_literal() const { return literal.has_value(); }
};

struct NetworkStmt {
  Network network;
};
struct DefinitionStmt {
  Concept name;
  Network body;
};
struct RuleStmt {
  Network lhs;
  std::vector<RulePart> rhs;
  std::string text;
};
struct TransferRuleStmt {
  Network src;
  Network dst;
  std::string text;
};
struct DeclareStmt {
  Concept label;
  std::string description;
};
struct PragmaStmt {
  std::string key;
  std::string value;
};
// `map src -> dst`; a missing side is the `*` wildcard.
struct MapStmt {
  std::optional<Concept> src;
  std::optional<Concept> dst;
};
struct SurfaceStmt {
  Concept term;
  std::vector<std::string> forms;
};
// `source: path` / `receptor: path` in language-pair files.
struct IncludeStmt {
  std::string role;
  std::string path;
};

using StatementBody =
    std::variant<NetworkStmt, DefinitionStmt, RuleStmt, TransferRuleStmt,
                 DeclareStmt, PragmaStmt, MapStmt, SurfaceStmt, IncludeStmt>;

struct Statement {
  int line = 0;
  StatementBody body;
};

struct TreelineDocument {
  std::vector<Statement> statements;
  std::vector<std::string> notes;
};

// Parses a model, pair or network file: one statement per line, `#`
// comments, blank lines ignored. Throws conspec::Error with file:line:col.
// Duplicate definitions are an error unless `allow_duplicates` is set (the
// linter reports them itself).
TreelineDocument ParseDocument(std::string_view text,
                               std::string_view file = {},
                               bool allow_duplicates = false);

// Splits "surface<TAB>tree-line" corpus lines.
struct CorpusEntry {
  int line = 0;
  std::string surface;
  std::string treeline;
};
std::vector<CorpusEntry> ParseCorpus(std::string_view text,
                                     std::string_view file = {});

}  // namespace conspec

#endif  // CONSPEC_TREELINE_H_
