#include "conspec/network.h"

#include <algorithm>
#include <functional>
#include <tuple>

#include "conspec/error.h"

namespace conspec {

namespace {

constexpr std::string_view kStructural = "<>[](){},='\"^#";

// Ordering rank: bare stemless leaves (tense, number) first, then stemless
// nodes carrying detail (roles), then stemmed concepts, then capsules.
int Rank(const Node &node) {
  if (node.is_capsule()) return 3;
  if (!node.as_concept().stemless) return 2;
  if (node.specifiers.empty() && !node.anchor) return 0;
  return 1;
}

void AppendKey(const Node &node, std::string *out) {
  if (node.anchor) {
    const char *mark = node.anchor->direction == AnchorDirection::kUp ? ">>"
                                                                      : "<<";
    for (int i = 0; i < node.anchor->depth; ++i) *out += mark;
  }
  if (node.head) *out += '^';
  if (node.is_concept()) {
    *out += node.as_concept().ToString();
  } else {
    *out += '(';
    const auto &roots = node.capsule().roots;
    for (size_t i = 0; i < roots.size(); ++i) {
      if (i > 0) *out += ',';
      AppendKey(roots[i], out);
    }
    *out += ')';
  }
  if (!node.specifiers.empty()) {
    *out += '[';
    for (size_t i = 0; i < node.specifiers.size(); ++i) {
      if (i > 0) *out += ',';
      AppendKey(node.specifiers[i], out);
    }
    *out += ']';
  }
}

struct Keyed {
  int rank;
  std::string label;
  int sense;
  std::string key;
  Node node;
};

bool KeyedLess(const Keyed &a, const Keyed &b) {
  return std::tie(a.rank, a.label, a.sense, a.key) <
         std::tie(b.rank, b.label, b.sense, b.key);
}

void SortNodes(std::vector<Node> *nodes) {
  std::vector<Keyed> keyed;
  keyed.reserve(nodes->size());
  for (Node &n : *nodes) {
    Keyed k;
    k.rank = Rank(n);
    if (n.is_concept()) {
      k.label = n.as_concept().label;
      k.sense = n.as_concept().sense;
    } else {
      k.sense = 0;
    }
    AppendKey(n, &k.key);
    k.node = std::move(n);
    keyed.push_back(std::move(k));
  }
  std::stable_sort(keyed.begin(), keyed.end(), KeyedLess);
  nodes->clear();
  for (Keyed &k : keyed) nodes->push_back(std::move(k.node));
}

bool HasMarkedHead(const std::vector<Node> &roots);

bool SubtreeHasHead(const Node &node) {
  if (node.head) return true;
  // Heads inside nested capsules belong to those capsules.
  for (const Node &s : node.specifiers) {
    if (SubtreeHasHead(s)) return true;
  }
  return false;
}

bool HasMarkedHead(const std::vector<Node> &roots) {
  for (const Node &r : roots) {
    if (SubtreeHasHead(r)) return true;
  }
  return false;
}

void CanonicalizeInPlace(Node *node) {
  if (node->is_capsule()) {
    auto &roots = node->capsule().roots;
    for (Node &r : roots) CanonicalizeInPlace(&r);
    // The default head is the left-most root as written; pin it before
    // reordering.
    if (roots.size() > 1 && !HasMarkedHead(roots)) roots[0].head = true;
    SortNodes(&roots);
    if (!roots.empty() && roots[0].head) roots[0].head = false;
  }
  for (Node &s : node->specifiers) CanonicalizeInPlace(&s);
  SortNodes(&node->specifiers);
}

const Node *FindHead(const Node &node) {
  if (node.head) return &node;
  for (const Node &s : node.specifiers) {
    if (const Node *h = FindHead(s)) return h;
  }
  return nullptr;
}

std::string Describe(const Node &node) {
  if (node.is_concept()) return node.as_concept().ToString();
  return "(" + HeadConcept(node).ToString() + " ...)";
}

}  // namespace

Concept Concept::Stem(std::string label, int sense) {
  return Concept{std::move(label), false, sense};
}

Concept Concept::Stemless(std::string label, int sense) {
  return Concept{std::move(label), true, sense};
}

std::string Concept::ToString() const {
  std::string out = stemless ? "{" + label + "}" : label;
  if (sense != 1) out += "#" + std::to_string(sense);
  return out;
}

bool IsValidLabel(std::string_view label) {
  if (label.empty()) return false;
  if (label.front() == ' ' || label.back() == ' ') return false;
  return label.find_first_of(kStructural) == std::string_view::npos;
}

Node Node::Of(Concept term) {
  Node n;
  n.content = std::move(term);
  return n;
}

Node Node::Wrap(std::vector<Node> body) {
  Node n;
  n.content = Capsule{std::move(body)};
  return n;
}

Node &Node::Specify(Node child) {
  specifiers.push_back(std::move(child));
  return specifiers.back();
}

Network Network::Of(Node root) {
  Network net;
  net.roots.push_back(std::move(root));
  return net;
}

NetworkIndex::NetworkIndex(const Network &network) {
  for (const Node &r : network.roots) Visit(r, -1, -1);
}

NetworkIndex::NetworkIndex(const Node &root) { Visit(root, -1, -1); }

void NetworkIndex::Visit(const Node &node, int parent, int container) {
  int id = static_cast<int>(entries_.size());
  entries_.push_back({&node, parent, container});
  if (node.is_capsule()) {
    for (const Node &r : node.capsule().roots) Visit(r, -1, id);
  }
  for (const Node &s : node.specifiers) Visit(s, id, container);
}

int NetworkIndex::IdOf(const Node *node) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].node == node) return static_cast<int>(i);
  }
  return -1;
}

const Node &HeadNode(const Capsule &capsule) {
  for (const Node &r : capsule.roots) {
    if (const Node *h = FindHead(r)) return *h;
  }
  return capsule.roots.front();
}

const Concept &HeadConcept(const Node &node) {
  const Node *cur = &node;
  while (cur->is_capsule()) cur = &HeadNode(cur->capsule());
  return cur->as_concept();
}

Node CanonicalizeNode(const Node &node) {
  Node copy = node;
  CanonicalizeInPlace(&copy);
  return copy;
}

Network CanonicalizeUnchecked(const Network &network) {
  Network out;
  out.roots = network.roots;
  for (Node &r : out.roots) CanonicalizeInPlace(&r);
  SortNodes(&out.roots);
  return out;
}

Network Canonicalize(const Network &network) {
  Network out = CanonicalizeUnchecked(network);
  ResolveAnchors(out);
  return out;
}

bool Identical(const Network &a, const Network &b) {
  return a.roots == b.roots;
}

bool Equal(const Network &a, const Network &b) {
  return Identical(Canonicalize(a), Canonicalize(b));
}

std::string CanonicalKey(const Node &node) {
  std::string out;
  AppendKey(node, &out);
  return out;
}

std::string CanonicalKey(const Network &network) {
  std::string out;
  for (size_t i = 0; i < network.roots.size(); ++i) {
    if (i > 0) out += ';';
    AppendKey(network.roots[i], &out);
  }
  return out;
}

Network ResolveAnchors(const Network &network) {
  Network out;
  out.roots = network.roots;
  NetworkIndex index(out);

  std::function<int(int, std::vector<int> &)> resolve_up;
  resolve_up = [&](int id, std::vector<int> &visiting) -> int {
    const Node &node = index.node(id);
    if (std::find(visiting.begin(), visiting.end(), id) != visiting.end()) {
      throw Error(ErrorKind::kMalformedNetwork,
                  "anchor cycle at " + Describe(node));
    }
    visiting.push_back(id);
    int capsule = index.container(id);
    if (capsule < 0) {
      throw Error(ErrorKind::kMalformedNetwork,
                  "anchor on " + Describe(node) +
                      " is not inside any encapsulation");
    }
    for (int step = 1; step < node.anchor->depth; ++step) {
      capsule = index.container(capsule);
      if (capsule < 0) {
        throw Error(ErrorKind::kMalformedNetwork,
                    "anchor depth " + std::to_string(node.anchor->depth) +
                        " on " + Describe(node) +
                        " exceeds its encapsulation nesting");
      }
    }
    int target = index.parent(capsule);
    if (target >= 0) return target;
    // A capsule that is itself a body root reaches outward only through
    // its own `>>` anchor.
    const Node &cap = index.node(capsule);
    if (cap.anchor && cap.anchor->direction == AnchorDirection::kUp) {
      return resolve_up(capsule, visiting);
    }
    throw Error(ErrorKind::kMalformedNetwork,
                "anchor on " + Describe(node) +
                    " has no concept outside its encapsulation to refer to");
  };

  for (int id = 0; id < index.size(); ++id) {
    const Node &node = index.node(id);
    if (!node.anchor) continue;
    int target = -1;
    if (node.anchor->direction == AnchorDirection::kUp) {
      std::vector<int> visiting;
      target = resolve_up(id, visiting);
    } else {
      if (node.anchor->depth != 1) {
        throw Error(ErrorKind::kMalformedNetwork,
                    "`<<` anchors deeper than one boundary are unsupported (" +
                        Describe(node) + ")");
      }
      int capsule = index.container(id);
      if (capsule < 0) {
        throw Error(ErrorKind::kMalformedNetwork,
                    "anchor on " + Describe(node) +
                        " is not inside any encapsulation");
      }
      const Node &cap = index.node(capsule);
      if (cap.specifiers.size() != 1) {
        throw Error(ErrorKind::kMalformedNetwork,
                    "`<<` anchor on " + Describe(node) +
                        " needs exactly one concept specifying its "
                        "encapsulation, found " +
                        std::to_string(cap.specifiers.size()));
      }
      target = index.IdOf(&cap.specifiers.front());
    }
    out.references.push_back({id, target});
  }
  return out;
}

std::multiset<Concept> ConceptMultiset(const Network &network) {
  std::multiset<Concept> out;
  NetworkIndex index(network);
  for (int i = 0; i < index.size(); ++i) {
    if (index.node(i).is_concept()) out.insert(index.node(i).as_concept());
  }
  return out;
}

int CountConcepts(const Node &node) {
  NetworkIndex index(node);
  int count = 0;
  for (int i = 0; i < index.size(); ++i) {
    if (index.node(i).is_concept()) ++count;
  }
  return count;
}

}  // namespace conspec
