#ifndef CONSPEC_LEXICON_H_
#define CONSPEC_LEXICON_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "conspec/network.h"

namespace conspec {

struct Definition {
  Concept name;
  Network body;
  int line = 0;
  // Head concept of the body's canonical first root; the is_a parent.
  Concept head;
};

// Concept definitions, the stemless registry and surface forms. Built once
// while a model loads and read-only afterwards.
class Lexicon {
 public:
  // Empty lexicon: no registry entries and no definitions.
  Lexicon() = default;

  // The default registry (the stemless labels used in the notation corpus) plus
  // the predefined {have} macro.
  static Lexicon WithDefaults();

  // Adds a definition. Throws a model-load error if the name is already
  // defined.
  void Define(Concept name, Network body, int line = 0);
  void Declare(const std::string &label, std::string description);
  void AddSurfaceForms(const Concept &term,
                       const std::vector<std::string> &forms);

  // Rejects definition cycles through any concept referenced in a body.
  // Throws a model-load error naming every concept on the cycle.
  void CheckAcyclic() const;

  const Definition *Find(const Concept &term) const;
  const std::map<Concept, Definition> &definitions() const {
    return definitions_;
  }
  bool IsDeclared(const std::string &stemless_label) const;
  const std::map<std::string, std::string> &registry() const {
    return registry_;
  }

  // Surface forms of a stemmed concept; the bare label when none were
  // registered.
  std::vector<std::string> SurfaceForms(const Concept &term) const;
  const std::map<Concept, std::vector<std::string>> &surface_forms() const {
    return surface_forms_;
  }

  // Substitutes definition bodies for defined concepts, `depth` levels deep.
  Network Expand(const Concept &term, int depth) const;
  Network ExpandNetwork(const Network &network, int depth) const;

  // The concept itself plus the chain of definition heads above it.
  std::set<Concept> Ancestors(const Concept &term) const;
  bool IsA(const Concept &term, const Concept &category) const;

 private:
  Node ExpandNode(const Node &node, int depth) const;

  std::map<Concept, Definition> definitions_;
  std::map<std::string, std::string> registry_;
  std::map<Concept, std::vector<std::string>> surface_forms_;
};

}  // namespace conspec

#endif  // CONSPEC_LEXICON_H_
