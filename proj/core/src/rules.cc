#include "conspec/rules.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "conspec/error.h"

namespace conspec {

namespace {

using Cont = std::function<void()>;

constexpr double kEpsilon = 1e-12;

bool MeetsThreshold(double product, int count, double tau) {
  if (product <= 0.0) return false;
  if (count == 0) return true;
  return std::pow(product, 1.0 / count) + kEpsilon >= tau;
}

// Pre-order subtree sizes of a flattened pattern.
int SubtreeEnd(const std::vector<Rule::PatternNode> &nodes, int id) {
  int end = id + 1;
  for (int b : nodes[id].body) end = std::max(end, SubtreeEnd(nodes, b));
  for (int s : nodes[id].specs) end = std::max(end, SubtreeEnd(nodes, s));
  return end;
}

// Ways of embedding a part pattern at lhs node `id`; each way lists the
// covered lhs node ids, root first.
void Embed(const Node &q, int id, const std::vector<Rule::PatternNode> &nodes,
           const NetworkIndex &index, std::vector<std::vector<int>> *out) {
  const Node &n = index.node(id);
  if (q.anchor != n.anchor) return;
  if (q.is_concept() != n.is_concept()) return;
  std::vector<int> base{id};
  if (q.is_concept()) {
    if (q.as_concept() != n.as_concept()) return;
  } else {
    if (!(q.capsule() == n.capsule())) return;
    int end = id + 1;
    for (int b : nodes[id].body) end = std::max(end, SubtreeEnd(nodes, b));
    for (int d = id + 1; d < end; ++d) base.push_back(d);
  }
  const std::vector<int> &specs = nodes[id].specs;
  std::vector<int> used;
  std::function<void(size_t, std::vector<int>)> assign =
      [&](size_t k, std::vector<int> covered) {
        if (k == q.specifiers.size()) {
          out->push_back(std::move(covered));
          return;
        }
        for (int s : specs) {
          if (std::find(used.begin(), used.end(), s) != used.end()) continue;
          std::vector<std::vector<int>> sub;
          Embed(q.specifiers[k], s, nodes, index, &sub);
          used.push_back(s);
          for (auto &way : sub) {
            std::vector<int> next = covered;
            next.insert(next.end(), way.begin(), way.end());
            assign(k + 1, std::move(next));
          }
          used.pop_back();
        }
      };
  assign(0, base);
}

class RealizeSearch {
 public:
  RealizeSearch(const Matcher &matcher, const Rule &rule)
      : matcher_(matcher),
        rule_(rule),
        nodes_(rule.nodes()),
        bound_(nodes_.size(), nullptr) {}

  std::vector<Match> Run(const Node &target) {
    MatchNode(0, target, [&] {
      Match m;
      m.rule = &rule_;
      m.score = rule_.factor_count() == 0
                    ? 1.0
                    : std::pow(product_, 1.0 / rule_.factor_count());
      m.bound = bound_;
      results_.push_back(std::move(m));
    });
    return std::move(results_);
  }

 private:
  void MatchNode(int i, const Node &t, const Cont &k) {
    const Rule::PatternNode &p = nodes_[i];
    if (p.anchor != t.anchor || p.head != t.head) return;
    if (p.slot) {
      double f;
      if (p.capsule) {
        if (!t.is_capsule() || !t.specifiers.empty()) return;
        f = matcher_.Carried(p.term, HeadConcept(t));
      } else {
        if (!t.is_concept()) return;
        f = matcher_.Carried(p.term, t.as_concept());
      }
      WithFactor(i, t, f, k);
      return;
    }
    if (p.capsule != t.is_capsule()) return;
    if (p.specs.size() != t.specifiers.size()) return;
    if (p.capsule) {
      if (p.body.size() != t.capsule().roots.size()) return;
      bound_[i] = &t;
      MatchList(p.body, t.capsule().roots, 0, 0,
                [&] { MatchList(p.specs, t.specifiers, 0, 0, k); });
      bound_[i] = nullptr;
      return;
    }
    double f = p.part >= 0 ? matcher_.Carried(p.term, t.as_concept())
                           : matcher_.Consumed(p.term, t.as_concept());
    WithFactor(i, t, f, [&] { MatchList(p.specs, t.specifiers, 0, 0, k); });
  }

  void WithFactor(int i, const Node &t, double f, const Cont &k) {
    if (f <= 0.0) return;
    double saved = product_;
    product_ *= f;
    if (MeetsThreshold(product_, rule_.factor_count(), matcher_.tau())) {
      bound_[i] = &t;
      k();
      bound_[i] = nullptr;
    }
    product_ = saved;
  }

  void MatchList(const std::vector<int> &ps, const std::vector<Node> &ts,
                 size_t k, uint64_t used, const Cont &cont) {
    if (k == ps.size()) {
      cont();
      return;
    }
    for (size_t j = 0; j < ts.size() && j < 64; ++j) {
      if (used & (uint64_t{1} << j)) continue;
      MatchNode(ps[k], ts[j], [&] {
        MatchList(ps, ts, k + 1, used | (uint64_t{1} << j), cont);
      });
    }
  }

  const Matcher &matcher_;
  const Rule &rule_;
  const std::vector<Rule::PatternNode> &nodes_;
  std::vector<const Node *> bound_;
  double product_ = 1.0;
  std::vector<Match> results_;
};

class ParseSearch {
 public:
  ParseSearch(const Matcher &matcher, const Rule &rule)
      : matcher_(matcher),
        rule_(rule),
        nodes_(rule.nodes()),
        concept_(nodes_.size()),
        captured_(nodes_.size()) {}

  std::vector<ParseMatch> Run(const std::vector<const Node *> &fragments) {
    std::vector<int> roots;
    for (const Rule::Part &part : rule_.parts()) {
      if (!part.literal) roots.push_back(part.node);
    }
    if (roots.size() != fragments.size()) return {};
    MatchParts(roots, fragments, 0);
    return std::move(results_);
  }

 private:
  void MatchParts(const std::vector<int> &roots,
                  const std::vector<const Node *> &fragments, size_t k) {
    if (k == roots.size()) {
      ParseMatch m;
      m.rule = &rule_;
      m.score = rule_.factor_count() == 0
                    ? 1.0
                    : std::pow(product_, 1.0 / rule_.factor_count());
      m.node = Build(0);
      results_.push_back(std::move(m));
      return;
    }
    int root = roots[k];
    const Node &fragment = *fragments[k];
    Cont next = [&] { MatchParts(roots, fragments, k + 1); };
    if (nodes_[root].unwrap) {
      MatchNode(nodes_[root].body[0], fragment, next);
    } else {
      MatchNode(root, fragment, next);
    }
  }

  void MatchNode(int i, const Node &f, const Cont &k) {
    const Rule::PatternNode &p = nodes_[i];
    if (f.anchor && f.anchor != p.anchor) return;
    if (p.slot) {
      Node captured;
      double factor;
      if (p.capsule) {
        Node inner = f;
        inner.anchor.reset();
        inner.head = false;
        factor = matcher_.Carried(p.term, HeadConcept(inner));
        captured = Node::Wrap({std::move(inner)});
      } else {
        if (!f.is_concept()) return;
        factor = matcher_.Carried(p.term, f.as_concept());
        captured = f;
      }
      captured.anchor = p.anchor;
      captured.head = p.head;
      captured_[i] = std::move(captured);
      WithFactor(factor, k);
      captured_[i].reset();
      return;
    }
    if (p.capsule != f.is_capsule()) return;
    std::vector<int> in_part;
    for (int s : p.specs) {
      if (nodes_[s].part == p.part) in_part.push_back(s);
    }
    if (in_part.size() != f.specifiers.size()) return;
    if (p.capsule) {
      if (p.body.size() != f.capsule().roots.size()) return;
      // `in_part` must outlive the continuation below.
      MatchList(p.body, f.capsule().roots, 0, 0,
                [&] { MatchList(in_part, f.specifiers, 0, 0, k); });
      return;
    }
    concept_[i] = f.as_concept();
    WithFactor(matcher_.Carried(p.term, f.as_concept()),
               [&] { MatchList(in_part, f.specifiers, 0, 0, k); });
    concept_[i].reset();
  }

  void WithFactor(double f, const Cont &k) {
    if (f <= 0.0) return;
    double saved = product_;
    product_ *= f;
    if (MeetsThreshold(product_, rule_.factor_count(), matcher_.tau())) k();
    product_ = saved;
  }

  void MatchList(const std::vector<int> &ps, const std::vector<Node> &fs,
                 size_t k, uint64_t used, const Cont &cont) {
    if (k == ps.size()) {
      cont();
      return;
    }
    for (size_t j = 0; j < fs.size() && j < 64; ++j) {
      if (used & (uint64_t{1} << j)) continue;
      MatchNode(ps[k], fs[j], [&] {
        MatchList(ps, fs, k + 1, used | (uint64_t{1} << j), cont);
      });
    }
  }

  Node Build(int i) const {
    const Rule::PatternNode &p = nodes_[i];
    if (captured_[i]) return *captured_[i];
    Node n;
    if (p.capsule) {
      std::vector<Node> roots;
      for (int b : p.body) roots.push_back(Build(b));
      n = Node::Wrap(std::move(roots));
    } else {
      n = Node::Of(concept_[i] ? *concept_[i] : p.term);
    }
    n.anchor = p.anchor;
    n.head = p.head;
    for (int s : p.specs) n.specifiers.push_back(Build(s));
    return n;
  }

  const Matcher &matcher_;
  const Rule &rule_;
  const std::vector<Rule::PatternNode> &nodes_;
  std::vector<std::optional<Concept>> concept_;
  std::vector<std::optional<Node>> captured_;
  double product_ = 1.0;
  std::vector<ParseMatch> results_;
};

Node Project(const std::vector<Rule::PatternNode> &nodes,
             const std::vector<const Node *> &bound, int i) {
  const Rule::PatternNode &p = nodes[i];
  const Node &t = *bound[i];
  if (p.slot) return t;
  Node n;
  if (p.capsule) {
    std::vector<Node> roots;
    for (int b : p.body) roots.push_back(Project(nodes, bound, b));
    n = Node::Wrap(std::move(roots));
  } else {
    n = Node::Of(t.as_concept());
  }
  n.anchor = t.anchor;
  n.head = t.head;
  for (int s : p.specs) {
    if (nodes[s].part == p.part) n.specifiers.push_back(Project(nodes, bound, s));
  }
  return n;
}

}  // namespace

std::string PrintItems(const std::vector<Item> &items) {
  std::string out = "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    if (const auto *lit = std::get_if<std::string>(&items[i])) {
      out += QuoteLiteral(*lit);
    } else {
      out += PrintNode(std::get<Node>(items[i]));
    }
  }
  return out + "]";
}

int Rule::Flatten(const Node &node) {
  int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  {
    PatternNode &p = nodes_[id];
    p.capsule = node.is_capsule();
    p.term = HeadConcept(node);
    p.anchor = node.anchor;
    p.head = node.head;
  }
  if (node.is_capsule()) {
    for (const Node &r : node.capsule().roots) {
      int child = Flatten(r);
      nodes_[id].body.push_back(child);
    }
  }
  for (const Node &s : node.specifiers) {
    int child = Flatten(s);
    nodes_[id].specs.push_back(child);
  }
  return id;
}

int Rule::pattern_part_count() const {
  int n = 0;
  for (const Part &p : parts_) n += p.literal ? 0 : 1;
  return n;
}

std::string Rule::Name() const {
  std::string out = "rule " + std::to_string(id_);
  if (line_ > 0) out += " (line " + std::to_string(line_) + ")";
  return out;
}

Rule Rule::Compile(const RuleStmt &stmt, int id, int line) {
  Rule r;
  r.id_ = id;
  r.line_ = line;
  r.text_ = stmt.text;
  Location where{"", line, 0};
  auto fail = [&](const std::string &msg) {
    throw Error(ErrorKind::kModelLoad, msg, where);
  };

  r.lhs_ = CanonicalizeUnchecked(stmt.lhs);
  if (r.lhs_.roots.size() != 1) fail("a rule's left side must have one root");
  if (stmt.rhs.empty()) fail("a rule's right side must not be empty");
  r.Flatten(r.lhs_.roots[0]);
  NetworkIndex index(r.lhs_);

  std::vector<int> owner(r.nodes_.size(), -1);
  for (size_t k = 0; k < stmt.rhs.size(); ++k) {
    const RulePart &rp = stmt.rhs[k];
    Part part;
    if (rp.is_literal()) {
      if (rp.literal->empty()) fail("empty surface literal");
      part.literal = rp.literal;
      r.parts_.push_back(std::move(part));
      continue;
    }
    Network pattern = CanonicalizeUnchecked(rp.pattern);
    std::string shown = PrintNetwork(pattern);
    if (pattern.roots.size() != 1) fail("part '" + shown + "' has several roots");
    std::vector<std::vector<int>> ways;
    for (int id2 = 0; id2 < index.size(); ++id2) {
      Embed(pattern.roots[0], id2, r.nodes_, index, &ways);
    }
    if (ways.empty()) fail("part '" + shown + "' does not occur in the left side");
    if (ways.size() > 1) {
      fail("part '" + shown + "' is ambiguous: it occurs " +
           std::to_string(ways.size()) + " ways in the left side");
    }
    for (int covered : ways[0]) {
      if (owner[covered] >= 0) {
        fail("parts " + std::to_string(owner[covered] + 1) + " and " +
             std::to_string(k + 1) + " overlap in the left side");
      }
      owner[covered] = static_cast<int>(k);
      r.nodes_[covered].part = static_cast<int>(k);
    }
    int root = ways[0][0];
    part.node = root;
    PatternNode &p = r.nodes_[root];
    p.slot = pattern.roots[0].specifiers.empty() && p.specs.empty();
    p.unwrap = p.capsule && !p.slot && p.body.size() == 1;
    r.parts_.push_back(std::move(part));
  }

  // Concepts inside a capsule slot are represented by the slot's head.
  std::vector<bool> inert(r.nodes_.size(), false);
  for (size_t i = 0; i < r.nodes_.size(); ++i) {
    const PatternNode &p = r.nodes_[i];
    if (inert[i]) continue;
    if (p.slot && p.capsule) {
      ++r.factor_count_;
      int end = static_cast<int>(i) + 1;
      for (int b : p.body) end = std::max(end, SubtreeEnd(r.nodes_, b));
      for (int d = static_cast<int>(i) + 1; d < end; ++d) inert[d] = true;
    } else if (!p.capsule) {
      ++r.factor_count_;
    }
  }
  return r;
}

double Matcher::Carried(const Concept &pattern, const Concept &target) const {
  if (pattern == target) return 1.0;
  if (lexicon_.IsA(target, pattern)) return 1.0;
  if (pattern.stemless || target.stemless) return 0.0;
  return similarity_.ConceptSim(pattern, target);
}

double Matcher::Consumed(const Concept &pattern, const Concept &target) const {
  if (pattern == target) return 1.0;
  return lexicon_.IsA(target, pattern) ? 1.0 : 0.0;
}

std::vector<Match> Matcher::MatchRealize(const Rule &rule,
                                         const Node &target) const {
  std::vector<Match> all = RealizeSearch(*this, rule).Run(target);
  // Identical sibling subtrees give interchangeable bindings.
  std::vector<Match> out;
  std::set<std::string> seen;
  for (Match &m : all) {
    if (seen.insert(PrintItems(Apply(m))).second) out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(), [](const Match &a, const Match &b) {
    return a.score > b.score;
  });
  return out;
}

std::vector<Item> Matcher::Apply(const Match &match) const {
  const Rule &rule = *match.rule;
  const auto &nodes = rule.nodes();
  std::vector<Item> items;
  for (const Rule::Part &part : rule.parts()) {
    if (part.literal) {
      items.emplace_back(*part.literal);
      continue;
    }
    int root = nodes[part.node].unwrap ? nodes[part.node].body[0] : part.node;
    Node fragment = CanonicalizeNode(Project(nodes, match.bound, root));
    // Anchors and head markers relate the fragment to its old context; the
    // rule's left side restores them when parsing.
    fragment.anchor.reset();
    fragment.head = false;
    items.emplace_back(std::move(fragment));
  }
  return items;
}

std::vector<ParseMatch> Matcher::MatchParse(
    const Rule &rule, const std::vector<const Node *> &fragments) const {
  std::vector<ParseMatch> all = ParseSearch(*this, rule).Run(fragments);
  std::vector<ParseMatch> out;
  std::set<std::string> seen;
  for (ParseMatch &m : all) {
    m.node = CanonicalizeNode(m.node);
    if (seen.insert(CanonicalKey(m.node)).second) out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ParseMatch &a, const ParseMatch &b) {
                     return a.score > b.score;
                   });
  return out;
}

std::vector<Match> MatchRules(const RuleSet &rules, const Matcher &matcher,
                              const Node &target) {
  std::vector<Match> out;
  for (const Rule &rule : rules) {
    for (Match &m : matcher.MatchRealize(rule, target)) out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(), [](const Match &a, const Match &b) {
    return a.score > b.score;
  });
  return out;
}

std::vector<ParseMatch> MatchRules(const RuleSet &rules,
                                   const Matcher &matcher,
                                   const std::vector<Item> &items) {
  std::vector<ParseMatch> out;
  for (const Rule &rule : rules) {
    if (rule.parts().size() != items.size()) continue;
    std::vector<const Node *> fragments;
    bool aligned = true;
    for (size_t k = 0; k < items.size() && aligned; ++k) {
      const Rule::Part &part = rule.parts()[k];
      if (part.literal) {
        const auto *lit = std::get_if<std::string>(&items[k]);
        aligned = lit != nullptr && *lit == *part.literal;
      } else if (const auto *node = std::get_if<Node>(&items[k])) {
        fragments.push_back(node);
      } else {
        aligned = false;
      }
    }
    if (!aligned) continue;
    for (ParseMatch &m : matcher.MatchParse(rule, fragments)) {
      out.push_back(std::move(m));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ParseMatch &a, const ParseMatch &b) {
                     return a.score > b.score;
                   });
  return out;
}

}  // namespace conspec
