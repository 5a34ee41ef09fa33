#include "conspec/similarity.h"

#include <cmath>
#include <map>

#include "conspec/error.h"

namespace conspec {

double DefinitionSimilarity::ConceptSim(const Concept &a,
                                        const Concept &b) const {
  if (a == b) return 1.0;
  std::set<Concept> sa = lexicon_.Ancestors(a);
  std::set<Concept> sb = lexicon_.Ancestors(b);
  for (const Concept *c : {&a, &b}) {
    sa.erase(*c);
    sb.erase(*c);
  }
  size_t inter = 0;
  for (const Concept &c : sa) inter += sb.count(c);
  size_t uni = sa.size() + sb.size() - inter;
  if (uni == 0) return 0.0;
  return alpha_ * static_cast<double>(inter) / static_cast<double>(uni);
}

double ConceptSim(const Lexicon &lexicon, const Concept &a, const Concept &b,
                  double alpha) {
  return DefinitionSimilarity(lexicon, alpha).ConceptSim(a, b);
}

namespace {

// Pre-order layout matching NetworkIndex, with child lists.
struct Flat {
  std::vector<const Node *> nodes;
  std::vector<std::vector<int>> body;
  std::vector<std::vector<int>> specs;
  std::vector<int> roots;
  int concepts = 0;

  explicit Flat(const Network &net) {
    for (const Node &r : net.roots) roots.push_back(Add(r));
  }

  int Add(const Node &node) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back(&node);
    body.emplace_back();
    specs.emplace_back();
    if (node.is_concept()) ++concepts;
    if (node.is_capsule()) {
      for (const Node &r : node.capsule().roots) {
        int child = Add(r);
        body[id].push_back(child);
      }
    }
    for (const Node &s : node.specifiers) {
      int child = Add(s);
      specs[id].push_back(child);
    }
    return id;
  }
};

class Aligner {
 public:
  Aligner(const SimilarityProvider &provider, const Flat &p, const Flat &t)
      : provider_(provider), p_(p), t_(t) {}

  // Best product of concept similarities for aligning the subtree at
  // pattern node `pi` onto target node `ti`; 0 when impossible.
  double Align(int pi, int ti) {
    auto key = std::make_pair(pi, ti);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second.value;
    Entry e = Compute(pi, ti);
    double v = e.value;
    memo_.emplace(key, std::move(e));
    return v;
  }

  // Best assignment of pattern list onto target list (same length).
  double AssignLists(const std::vector<int> &ps, const std::vector<int> &ts,
                     std::vector<int> *choice) {
    size_t m = ps.size();
    if (m != ts.size()) return 0.0;
    if (m == 0) return 1.0;
    if (m > 20) {
      throw Error(ErrorKind::kMalformedNetwork,
                  "too many specifiers on one node to align");
    }
    size_t full = (size_t{1} << m) - 1;
    std::vector<double> best(full + 1, 0.0);
    std::vector<int> pick(full + 1, -1);
    best[0] = 1.0;
    for (size_t mask = 0; mask < full; ++mask) {
      if (best[mask] == 0.0) continue;
      size_t k = static_cast<size_t>(__builtin_popcountll(mask));
      for (size_t j = 0; j < m; ++j) {
        if (mask & (size_t{1} << j)) continue;
        double v = Align(ps[k], ts[j]);
        if (v == 0.0) continue;
        double cand = best[mask] * v;
        size_t next = mask | (size_t{1} << j);
        if (cand > best[next]) {
          best[next] = cand;
          pick[next] = static_cast<int>(j);
        }
      }
    }
    if (best[full] == 0.0) return 0.0;
    if (choice != nullptr) {
      choice->assign(m, -1);
      size_t mask = full;
      for (size_t k = m; k-- > 0;) {
        int j = pick[mask];
        (*choice)[k] = ts[j];
        mask &= ~(size_t{1} << j);
      }
    }
    return best[full];
  }

  void Collect(int pi, int ti, Binding *out) {
    out->emplace_back(pi, ti);
    const Entry &e = memo_.at({pi, ti});
    for (size_t k = 0; k < p_.body[pi].size(); ++k) {
      Collect(p_.body[pi][k], e.body[k], out);
    }
    for (size_t k = 0; k < p_.specs[pi].size(); ++k) {
      Collect(p_.specs[pi][k], e.specs[k], out);
    }
  }

 private:
  struct Entry {
    double value = 0.0;
    std::vector<int> body;
    std::vector<int> specs;
  };

  Entry Compute(int pi, int ti) {
    Entry e;
    const Node &p = *p_.nodes[pi];
    const Node &t = *t_.nodes[ti];
    if (p.anchor != t.anchor || p.head != t.head) return e;
    if (p.is_concept() != t.is_concept()) return e;
    double factor = 1.0;
    if (p.is_concept()) {
      const Concept &a = p.as_concept();
      const Concept &b = t.as_concept();
      if (a == b) {
        factor = 1.0;
      } else if (a.stemless || b.stemless) {
        return e;
      } else {
        factor = provider_.ConceptSim(a, b);
      }
      if (factor <= 0.0) return e;
    }
    double body = AssignLists(p_.body[pi], t_.body[ti], &e.body);
    if (body == 0.0) return e;
    double specs = AssignLists(p_.specs[pi], t_.specs[ti], &e.specs);
    if (specs == 0.0) return e;
    e.value = factor * body * specs;
    return e;
  }

  const SimilarityProvider &provider_;
  const Flat &p_;
  const Flat &t_;
  std::map<std::pair<int, int>, Entry> memo_;
};

}  // namespace

SimilarityResult NetworkSim(const SimilarityProvider &provider,
                            const Network &pattern, const Network &target) {
  Flat p(pattern);
  Flat t(target);
  SimilarityResult result;
  if (p.nodes.size() != t.nodes.size() || p.concepts != t.concepts ||
      p.concepts == 0) {
    return result;
  }
  Aligner aligner(provider, p, t);
  std::vector<int> choice;
  double product = aligner.AssignLists(p.roots, t.roots, &choice);
  if (product <= 0.0) return result;
  result.score = std::pow(product, 1.0 / p.concepts);
  for (size_t k = 0; k < p.roots.size(); ++k) {
    aligner.Collect(p.roots[k], choice[k], &result.binding);
  }
  return result;
}

SimilarityResult NetworkSim(const Lexicon &lexicon, const Network &pattern,
                            const Network &target, double alpha) {
  return NetworkSim(DefinitionSimilarity(lexicon, alpha), pattern, target);
}

}  // namespace conspec
