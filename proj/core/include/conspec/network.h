#ifndef CONSPEC_NETWORK_H_
#define CONSPEC_NETWORK_H_

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace conspec {

// An atomic unit of meaning. Stemless concepts (tense, roles, plurality,
// punctuation) are written in braces and never realize as text directly.
struct Concept {
  std::string label;
  bool stemless = false;
  int sense = 1;

  static Concept Stem(std::string label, int sense = 1);
  static Concept Stemless(std::string label, int sense = 1);

  // Tree-line spelling: "trust", "{past}", "bank#2".
  std::string ToString() const;

  friend auto operator<=>(const Concept &, const Concept &) = default;
};

// True when the label is nonempty and free of structural characters.
bool IsValidLabel(std::string_view label);

enum class AnchorDirection { kUp, kDown };

// A reference across encapsulation boundaries, written as a `>>` (up) or
// `<<` (down) prefix on the item it applies to.
struct Anchor {
  AnchorDirection direction = AnchorDirection::kUp;
  int depth = 1;

  friend bool operator==(const Anchor &, const Anchor &) = default;
};

struct Node;

// A subnetwork treated as a single concept.
struct Capsule {
  std::vector<Node> roots;

  friend bool operator==(const Capsule &, const Capsule &) = default;
};

struct Node {
  std::variant<Concept, Capsule> content;
  // Children that further specify (narrow) this node.
  std::vector<Node> specifiers;
  std::optional<Anchor> anchor;
  // Explicit head marker inside a capsule body. Canonical networks only
  // carry it when the head is not the left-most root.
  bool head = false;

  static Node Of(Concept term);
  static Node Wrap(std::vector<Node> body);

  bool is_concept() const { return std::holds_alternative<Concept>(content); }
  bool is_capsule() const { return std::holds_alternative<Capsule>(content); }
  const Concept &as_concept() const { return std::get<Concept>(content); }
  Concept &as_concept() { return std::get<Concept>(content); }
  const Capsule &capsule() const { return std::get<Capsule>(content); }
  Capsule &capsule() { return std::get<Capsule>(content); }

  // Adds a specifier and returns a reference to it.
  Node &Specify(Node child);

  friend bool operator==(const Node &, const Node &) = default;
};

// A reference edge produced by anchor resolution, in pre-order node ids.
struct Reference {
  int from = -1;
  int to = -1;

  friend bool operator==(const Reference &, const Reference &) = default;
};

struct Network {
  std::vector<Node> roots;
  // Filled by ResolveAnchors; ignored by Equal.
  std::vector<Reference> references;

  static Network Of(Node root);
};

// Pre-order view of a network: a node, then its capsule body, then its
// specifiers. Ids index this order and stay valid while the network is not
// mutated.
class NetworkIndex {
 public:
  explicit NetworkIndex(const Network &network);
  explicit NetworkIndex(const Node &root);

  int size() const { return static_cast<int>(entries_.size()); }
  const Node &node(int id) const { return *entries_[id].node; }
  // Specification parent, or -1 for a root of a network or capsule body.
  int parent(int id) const { return entries_[id].parent; }
  // Innermost capsule containing the node, or -1 at top level.
  int container(int id) const { return entries_[id].container; }
  int IdOf(const Node *node) const;

 private:
  struct Entry {
    const Node *node;
    int parent;
    int container;
  };
  void Visit(const Node &node, int parent, int container);

  std::vector<Entry> entries_;
};

// The concept a node exposes to its parent: itself, or a capsule's head.
const Concept &HeadConcept(const Node &node);
// The node inside a capsule body that acts as its head.
const Node &HeadNode(const Capsule &capsule);

// Sorts every unordered list (specifiers, multi-root lists) into canonical
// order. Throws a malformed-network error if an anchor cannot be resolved.
Network Canonicalize(const Network &network);
// Same ordering without anchor validation, for definition bodies, rule
// patterns and detached fragments whose anchors point outside themselves.
Network CanonicalizeUnchecked(const Network &network);
Node CanonicalizeNode(const Node &node);

// True iff both networks have identical canonical forms.
bool Equal(const Network &a, const Network &b);
// Structural identity of already-canonical networks.
bool Identical(const Network &a, const Network &b);

// Compact deterministic key of a canonical node; used for ordering and
// deduplication.
std::string CanonicalKey(const Node &node);
std::string CanonicalKey(const Network &network);

// Returns a copy whose `references` hold one edge per anchored node, from
// the anchored node to its resolved target. Throws on unresolvable anchors.
Network ResolveAnchors(const Network &network);

std::multiset<Concept> ConceptMultiset(const Network &network);
int CountConcepts(const Node &node);

}  // namespace conspec

#endif  // CONSPEC_NETWORK_H_
