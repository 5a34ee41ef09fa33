#ifndef CONSPEC_TRANSFER_H_
#define CONSPEC_TRANSFER_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conspec/model.h"
#include "conspec/network.h"
#include "conspec/treeline.h"

namespace conspec {

// A transfer rule `src => dst`.
//
// Stemmed concepts that occur in both sides are variables. A variable
// without specifiers in src captures the matched subtree, which is
// transferred recursively and may gain the specifiers written in dst. A
// variable with specifiers keeps its own concept, translated through the
// concept map. Everything else in src is consumed; everything else in dst
// is copied as written.
class TransferRule {
 public:
  // Throws a model-load error for multi-root sides, a src root that is a
  // bare variable, or a variable repeated in src.
  static TransferRule Compile(const TransferRuleStmt &stmt, int id,
                              int line = 0);

  int id() const { return id_; }
  int line() const { return line_; }
  const std::string &text() const { return text_; }
  const Node &src() const { return src_; }
  const Node &dst() const { return dst_; }
  const std::set<Concept> &variables() const { return variables_; }
  bool IsVariable(const Concept &c) const { return variables_.count(c) > 0; }
  std::string Name() const;

 private:
  int id_ = 0;
  int line_ = 0;
  std::string text_;
  Node src_;
  Node dst_;
  std::set<Concept> variables_;
};

// One-to-one bilingual concept entries, with an optional identity
// fallback (`map * -> *`).
class ConceptMap {
 public:
  void Add(const Concept &src, const Concept &dst) { entries_[src] = dst; }
  void set_identity(bool identity) { identity_ = identity; }
  bool identity() const { return identity_; }
  std::optional<Concept> Lookup(const Concept &src) const;
  const std::map<Concept, Concept> &entries() const { return entries_; }

 private:
  std::map<Concept, Concept> entries_;
  bool identity_ = false;
};

struct TransferResult {
  Network network;  // canonical
  double score = 1.0;
  std::vector<std::string> trace;
};

struct TransferOptions {
  double tau = 0.5;
  int beam = 16;
};

// Rewrites a source network into receptor networks. At each node the
// matching rules bifurcate the hypotheses; a node no rule matches keeps
// its shape and has its concept translated by the map. Recursion only
// descends into strict subtrees, so the process terminates. Throws an
// untranslatable-concept error (stage "transfer") naming a concept with
// neither a rule nor a map entry.
std::vector<TransferResult> ApplyTransfer(
    const std::vector<TransferRule> &rules, const ConceptMap &map,
    const Model &source, const Network &network,
    const TransferOptions &options = {});

struct LanguagePair {
  Model source;
  Model receptor;
  std::vector<TransferRule> rules;
  ConceptMap map;
  std::string path;
};

// Reads a pair file: `source:` and `receptor:` model paths (relative to
// the pair file), transfer rules and `map` lines.
LanguagePair LoadPair(const std::string &path);
LanguagePair LoadPairFromString(std::string_view text,
                                std::string_view path = {});

struct TranslateResult {
  std::string text;
  double score = 0.0;
  std::vector<std::string> trace;
};

// Parse, transfer, realize. Scores multiply across stages; traces are
// concatenated with stage headers. Errors carry the failing stage.
std::vector<TranslateResult> Translate(const LanguagePair &pair,
                                       const std::string &text);

}  // namespace conspec

#endif  // CONSPEC_TRANSFER_H_
