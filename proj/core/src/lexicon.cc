#include "conspec/lexicon.h"

#include <algorithm>
#include <functional>

#include "conspec/error.h"
#include "conspec/treeline.h"

namespace conspec {

namespace {

struct RegistryEntry {
  const char *label;
  const char *description;
};

constexpr RegistryEntry kDefaultRegistry[] = {
    {"past", "event or attribute timing before now"},
    {"present", "timing at the time of speaking"},
    {"future", "timing after now"},
    {"past cont.", "ongoing in the past"},
    {"present continuous", "ongoing now"},
    {"agent", "role: the doer of an event"},
    {"theme", "role: the thing acted upon"},
    {"recipient", "role: the receiver"},
    {"object 1", "role: first traded object"},
    {"object 2", "role: second traded object"},
    {"implied", "concept not present in the surface text"},
    {"plural", "more than one instance"},
    {"?", "question"},
    {"!", "exclamation"},
    {"emphasis", "emphasis or intensive use"},
    {"topic", "focal entity (voice, topicalization)"},
    {"re", "reification: separately reified entities are one"},
    {"seq", "discourse sequence"},
    {"quote", "quoted speech"},
    {"more than", "comparison by degree"},
    {"how", "manner"},
    {"verb", "verb category"},
    {"have", "possession macro"},
};

void CollectConcepts(const Node &node, std::set<Concept> *out) {
  if (node.is_concept()) {
    out->insert(node.as_concept());
  } else {
    for (const Node &r : node.capsule().roots) CollectConcepts(r, out);
  }
  for (const Node &s : node.specifiers) CollectConcepts(s, out);
}

}  // namespace

Lexicon Lexicon::WithDefaults() {
  Lexicon lex;
  for (const RegistryEntry &e : kDefaultRegistry) {
    lex.Declare(e.label, e.description);
  }
  lex.Define(Concept::Stemless("have"),
             ParseNetwork("(have > [<<{agent}, >>{theme}])"));
  return lex;
}

void Lexicon::Define(Concept name, Network body, int line) {
  if (body.roots.empty()) {
    throw Error(ErrorKind::kModelLoad,
                "empty definition body for '" + name.ToString() + "'");
  }
  auto it = definitions_.find(name);
  // Built-in macros (line 0) may be replaced by a model file.
  if (it != definitions_.end() && it->second.line == 0 && line > 0) {
    definitions_.erase(it);
    it = definitions_.end();
  }
  if (it != definitions_.end()) {
    throw Error(ErrorKind::kModelLoad,
                "duplicate definition of '" + name.ToString() + "' at lines " +
                    std::to_string(it->second.line) + " and " +
                    std::to_string(line),
                Location{"", line, 0});
  }
  Concept head = HeadConcept(CanonicalizeUnchecked(body).roots.front());
  Concept key = name;
  definitions_.emplace(std::move(key), Definition{std::move(name),
                                                  std::move(body), line,
                                                  std::move(head)});
}

void Lexicon::Declare(const std::string &label, std::string description) {
  registry_[label] = std::move(description);
}

void Lexicon::AddSurfaceForms(const Concept &term,
                              const std::vector<std::string> &forms) {
  auto &list = surface_forms_[term];
  for (const std::string &f : forms) {
    if (std::find(list.begin(), list.end(), f) == list.end()) list.push_back(f);
  }
}

void Lexicon::CheckAcyclic() const {
  enum Color { kWhite, kGray, kBlack };
  std::map<Concept, Color> color;
  std::vector<Concept> stack;

  std::function<void(const Concept &)> visit = [&](const Concept &c) {
    color[c] = kGray;
    stack.push_back(c);
    std::set<Concept> refs;
    for (const Node &r : definitions_.at(c).body.roots) CollectConcepts(r, &refs);
    for (const Concept &ref : refs) {
      if (definitions_.count(ref) == 0) continue;
      Color state = color.count(ref) ? color[ref] : kWhite;
      if (state == kGray) {
        auto start = std::find(stack.begin(), stack.end(), ref);
        std::string names;
        for (auto it = start; it != stack.end(); ++it) {
          names += it->ToString() + " -> ";
        }
        names += ref.ToString();
        throw Error(ErrorKind::kModelLoad, "definition cycle: " + names,
                    Location{"", definitions_.at(c).line, 0});
      }
      if (state == kWhite) visit(ref);
    }
    stack.pop_back();
    color[c] = kBlack;
  };

  for (const auto &[name, def] : definitions_) {
    if (!color.count(name)) visit(name);
  }
}

const Definition *Lexicon::Find(const Concept &term) const {
  auto it = definitions_.find(term);
  return it == definitions_.end() ? nullptr : &it->second;
}

bool Lexicon::IsDeclared(const std::string &stemless_label) const {
  return registry_.count(stemless_label) > 0;
}

std::vector<std::string> Lexicon::SurfaceForms(const Concept &term) const {
  auto it = surface_forms_.find(term);
  if (it != surface_forms_.end() && !it->second.empty()) return it->second;
  return {term.label};
}

Node Lexicon::ExpandNode(const Node &node, int depth) const {
  Node out = node;
  if (depth <= 0) return out;
  for (Node &s : out.specifiers) s = ExpandNode(s, depth);
  if (out.is_capsule()) {
    for (Node &r : out.capsule().roots) r = ExpandNode(r, depth);
    return out;
  }
  const Definition *def = Find(out.as_concept());
  if (def == nullptr) return out;

  Network body = ExpandNetwork(def->body, depth - 1);
  Node replacement;
  if (body.roots.size() == 1 && out.specifiers.empty()) {
    replacement = body.roots[0];
  } else if (body.roots.size() == 1 && body.roots[0].specifiers.empty()) {
    // A bare concept or a capsule takes the place of the node directly.
    replacement.content = body.roots[0].content;
    replacement.specifiers = out.specifiers;
  } else {
    replacement = Node::Wrap(body.roots);
    replacement.specifiers = out.specifiers;
  }
  if (out.anchor) replacement.anchor = out.anchor;
  replacement.head = out.head;
  return replacement;
}

Network Lexicon::ExpandNetwork(const Network &network, int depth) const {
  Network out;
  for (const Node &r : network.roots) out.roots.push_back(ExpandNode(r, depth));
  return out;
}

Network Lexicon::Expand(const Concept &term, int depth) const {
  return ExpandNetwork(Network::Of(Node::Of(term)), depth);
}

std::set<Concept> Lexicon::Ancestors(const Concept &term) const {
  std::set<Concept> out;
  Concept cur = term;
  while (out.insert(cur).second) {
    const Definition *def = Find(cur);
    if (def == nullptr) break;
    cur = def->head;
  }
  return out;
}

bool Lexicon::IsA(const Concept &term, const Concept &category) const {
  if (term == category) return true;
  return Ancestors(term).count(category) > 0;
}

}  // namespace conspec
