#include "conspec/transfer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "conspec/error.h"
#include "conspec/parser.h"
#include "conspec/realizer.h"

namespace conspec {

namespace {

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return buf;
}

void CollectStemmed(const Node &node, std::multiset<Concept> *out) {
  if (node.is_concept()) {
    if (!node.as_concept().stemless) out->insert(node.as_concept());
  } else {
    for (const Node &r : node.capsule().roots) CollectStemmed(r, out);
  }
  for (const Node &s : node.specifiers) CollectStemmed(s, out);
}

void CollectStemless(const Node &node, std::set<std::string> *out) {
  if (node.is_concept()) {
    if (node.as_concept().stemless) out->insert(node.as_concept().label);
  } else {
    for (const Node &r : node.capsule().roots) CollectStemless(r, out);
  }
  for (const Node &s : node.specifiers) CollectStemless(s, out);
}

Node SingleRoot(const Network &net, const char *side, int line) {
  if (net.roots.size() != 1) {
    throw Error(ErrorKind::kModelLoad,
                std::string("transfer rule ") + side +
                    " must have exactly one root",
                Location{"", line, 0});
  }
  return CanonicalizeUnchecked(net).roots[0];
}

// A partial receptor node with its score and trace.
struct Alt {
  Node node;
  double score = 1.0;
  std::vector<std::string> trace;
};

struct Binding {
  const Node *target = nullptr;
  bool slot = false;
};

class Transferer {
 public:
  Transferer(const std::vector<TransferRule> &rules, const ConceptMap &map,
             const Model &source, const TransferOptions &options)
      : rules_(rules),
        map_(map),
        matcher_(source.matcher()),
        tau_(options.tau),
        beam_(static_cast<size_t>(std::max(1, options.beam))) {}

  std::vector<Alt> TransferNode(const Node &target) {
    std::vector<Alt> alts;
    for (const TransferRule &rule : rules_) {
      for (auto &[score, binding] : MatchRule(rule, target)) {
        for (Alt &a : Substitute(rule, rule.dst(), binding)) {
          a.score *= score;
          a.node.anchor = target.anchor;
          a.node.head = target.head;
          a.trace.insert(a.trace.begin(), rule.Name() + " " + rule.text() +
                                              " @" + FormatScore(score));
          alts.push_back(std::move(a));
        }
      }
    }
    if (alts.empty()) alts = Fallback(target);
    return Prune(std::move(alts));
  }

 private:
  using Bindings = std::map<Concept, Binding>;

  Concept MapConcept(const Concept &c) const {
    std::optional<Concept> out = map_.Lookup(c);
    if (!out) {
      throw Error(ErrorKind::kUntranslatableConcept,
                  "no transfer rule or map entry for '" + c.ToString() + "'",
                  {}, "transfer");
    }
    return *out;
  }

  std::vector<Alt> Prune(std::vector<Alt> alts) const {
    std::map<std::string, size_t> seen;
    std::vector<Alt> unique;
    for (Alt &a : alts) {
      std::string key = CanonicalKey(CanonicalizeNode(a.node));
      auto [it, inserted] = seen.emplace(key, unique.size());
      if (inserted) {
        unique.push_back(std::move(a));
      } else if (a.score > unique[it->second].score) {
        unique[it->second] = std::move(a);
      }
    }
    std::stable_sort(unique.begin(), unique.end(),
                     [](const Alt &a, const Alt &b) { return a.score > b.score; });
    if (unique.size() > beam_) unique.resize(beam_);
    return unique;
  }

  // Cartesian product of alternatives for each element of a list.
  std::vector<std::pair<std::vector<Node>, Alt>> Product(
      const std::vector<std::vector<Alt>> &choices) const {
    std::vector<std::pair<std::vector<Node>, Alt>> out{{{}, Alt{}}};
    for (const std::vector<Alt> &options : choices) {
      std::vector<std::pair<std::vector<Node>, Alt>> grown;
      for (const auto &[nodes, acc] : out) {
        for (const Alt &o : options) {
          auto next = std::make_pair(nodes, acc);
          next.first.push_back(o.node);
          next.second.score *= o.score;
          next.second.trace.insert(next.second.trace.end(), o.trace.begin(),
                                   o.trace.end());
          grown.push_back(std::move(next));
        }
      }
      std::stable_sort(grown.begin(), grown.end(), [](const auto &a,
                                                      const auto &b) {
        return a.second.score > b.second.score;
      });
      if (grown.size() > beam_) grown.resize(beam_);
      out = std::move(grown);
    }
    return out;
  }

  std::vector<Alt> Fallback(const Node &target) {
    Node shell;
    shell.anchor = target.anchor;
    shell.head = target.head;
    std::vector<std::vector<Alt>> choices;
    if (target.is_concept()) {
      shell.content = MapConcept(target.as_concept());
    } else {
      shell.content = Capsule{};
      for (const Node &r : target.capsule().roots) {
        choices.push_back(TransferNode(r));
      }
    }
    size_t body = choices.size();
    for (const Node &s : target.specifiers) choices.push_back(TransferNode(s));
    std::vector<Alt> out;
    for (auto &[nodes, acc] : Product(choices)) {
      Alt a;
      a.node = shell;
      if (a.node.is_capsule()) {
        a.node.capsule().roots.assign(nodes.begin(), nodes.begin() + body);
      }
      a.node.specifiers.assign(nodes.begin() + body, nodes.end());
      a.score = acc.score;
      a.trace = std::move(acc.trace);
      out.push_back(std::move(a));
    }
    return out;
  }

  // Alignments of the rule's src onto `target`, with their scores.
  std::vector<std::pair<double, Bindings>> MatchRule(const TransferRule &rule,
                                                     const Node &target) {
    std::vector<std::pair<double, Bindings>> out;
    Bindings bindings;
    double product = 1.0;
    int factors = 0;
    std::function<void()> done = [&] {
      double score = factors == 0 ? 1.0 : std::pow(product, 1.0 / factors);
      if (score + 1e-12 >= tau_) out.emplace_back(score, bindings);
    };
    MatchNode(rule, rule.src(), target, &bindings, &product, &factors, done);
    // Different bijections of the same shape can bind identically.
    std::vector<std::pair<double, Bindings>> unique;
    for (auto &m : out) {
      bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto &u) {
        if (u.second.size() != m.second.size()) return false;
        for (const auto &[c, b] : m.second) {
          auto it = u.second.find(c);
          if (it == u.second.end() || it->second.target != b.target) {
            return false;
          }
        }
        return true;
      });
      if (!dup) unique.push_back(std::move(m));
    }
    return unique;
  }

  void MatchNode(const TransferRule &rule, const Node &p, const Node &t,
                 Bindings *bindings, double *product, int *factors,
                 const std::function<void()> &k) {
    if (p.anchor && p.anchor != t.anchor) return;
    if (p.is_concept() && rule.IsVariable(p.as_concept())) {
      bool slot = p.specifiers.empty();
      double f;
      if (slot) {
        f = matcher_.Carried(p.as_concept(), HeadConcept(t));
      } else {
        if (!t.is_concept()) return;
        f = matcher_.Carried(p.as_concept(), t.as_concept());
      }
      if (f <= 0.0) return;
      (*bindings)[p.as_concept()] = Binding{&t, slot};
      double saved = *product;
      *product *= f;
      ++*factors;
      if (slot) {
        k();
      } else {
        MatchList(rule, p.specifiers, t.specifiers, 0, bindings, product,
                  factors, k);
      }
      --*factors;
      *product = saved;
      bindings->erase(p.as_concept());
      return;
    }
    if (p.is_capsule() != t.is_capsule()) return;
    if (p.specifiers.size() != t.specifiers.size()) return;
    if (p.is_capsule()) {
      const auto &pr = p.capsule().roots;
      const auto &tr = t.capsule().roots;
      if (pr.size() != tr.size()) return;
      MatchList(rule, pr, tr, 0, bindings, product, factors, [&] {
        MatchList(rule, p.specifiers, t.specifiers, 0, bindings, product,
                  factors, k);
      });
      return;
    }
    if (!t.is_concept()) return;
    if (matcher_.Consumed(p.as_concept(), t.as_concept()) <= 0.0) return;
    ++*factors;
    MatchList(rule, p.specifiers, t.specifiers, 0, bindings, product, factors,
              k);
    --*factors;
  }

  // Bijection between pattern and target lists, by backtracking.
  void MatchList(const TransferRule &rule, const std::vector<Node> &ps,
                 const std::vector<Node> &ts, uint64_t used, Bindings *bindings,
                 double *product, int *factors,
                 const std::function<void()> &k) {
    if (ps.size() != ts.size()) return;
    int i = __builtin_popcountll(used);
    if (i == static_cast<int>(ps.size())) {
      k();
      return;
    }
    for (size_t j = 0; j < ts.size(); ++j) {
      if (used & (uint64_t{1} << j)) continue;
      MatchNode(rule, ps[i], ts[j], bindings, product, factors, [&] {
        MatchList(rule, ps, ts, used | (uint64_t{1} << j), bindings, product,
                  factors, k);
      });
    }
  }

  std::vector<Alt> Substitute(const TransferRule &rule, const Node &d,
                              const Bindings &bindings) {
    std::vector<std::vector<Alt>> choices;
    std::vector<Alt> heads;
    if (d.is_concept() && rule.IsVariable(d.as_concept())) {
      const Binding &b = bindings.at(d.as_concept());
      if (b.slot) {
        heads = TransferNode(*b.target);
      } else {
        Alt a;
        a.node.content = MapConcept(b.target->as_concept());
        heads.push_back(std::move(a));
      }
    } else {
      Alt a;
      a.node.content = d.content;
      if (a.node.is_capsule()) a.node.capsule().roots.clear();
      heads.push_back(std::move(a));
    }
    size_t body = 0;
    if (d.is_capsule()) {
      for (const Node &r : d.capsule().roots) {
        choices.push_back(Substitute(rule, r, bindings));
      }
      body = choices.size();
    }
    for (const Node &s : d.specifiers) {
      choices.push_back(Substitute(rule, s, bindings));
    }
    std::vector<Alt> out;
    for (const Alt &h : heads) {
      for (auto &[nodes, acc] : Product(choices)) {
        Alt a = h;
        if (d.is_capsule()) {
          a.node.capsule().roots.assign(nodes.begin(), nodes.begin() + body);
        }
        a.node.specifiers.insert(a.node.specifiers.end(),
                                 nodes.begin() + body, nodes.end());
        if (d.anchor) a.node.anchor = d.anchor;
        a.node.head = d.head;
        a.score *= acc.score;
        a.trace.insert(a.trace.end(), acc.trace.begin(), acc.trace.end());
        out.push_back(std::move(a));
      }
    }
    return out;
  }

  const std::vector<TransferRule> &rules_;
  const ConceptMap &map_;
  Matcher matcher_;
  double tau_;
  size_t beam_;
};

}  // namespace

TransferRule TransferRule::Compile(const TransferRuleStmt &stmt, int id,
                                   int line) {
  TransferRule rule;
  rule.id_ = id;
  rule.line_ = line;
  rule.text_ = stmt.text;
  rule.src_ = SingleRoot(stmt.src, "source side", line);
  rule.dst_ = SingleRoot(stmt.dst, "target side", line);
  std::multiset<Concept> src, dst;
  CollectStemmed(rule.src_, &src);
  CollectStemmed(rule.dst_, &dst);
  for (const Concept &c : src) {
    if (dst.count(c) == 0) continue;
    if (src.count(c) > 1) {
      throw Error(ErrorKind::kModelLoad,
                  "transfer variable '" + c.ToString() +
                      "' occurs more than once on the source side",
                  Location{"", line, 0});
    }
    rule.variables_.insert(c);
  }
  if (rule.src_.is_concept() && rule.src_.specifiers.empty() &&
      rule.IsVariable(rule.src_.as_concept())) {
    throw Error(ErrorKind::kModelLoad,
                "transfer rule source is a bare variable",
                Location{"", line, 0});
  }
  return rule;
}

std::string TransferRule::Name() const {
  return "transfer " + std::to_string(id_) + " (line " +
         std::to_string(line_) + ")";
}

std::optional<Concept> ConceptMap::Lookup(const Concept &src) const {
  auto it = entries_.find(src);
  if (it != entries_.end()) return it->second;
  if (identity_) return src;
  return std::nullopt;
}

std::vector<TransferResult> ApplyTransfer(
    const std::vector<TransferRule> &rules, const ConceptMap &map,
    const Model &source, const Network &network,
    const TransferOptions &options) {
  Network canonical;
  try {
    canonical = Canonicalize(network);
  } catch (const Error &e) {
    throw e.WithStage("transfer");
  }
  Transferer transferer(rules, map, source, options);
  std::vector<std::vector<Alt>> per_root;
  for (const Node &r : canonical.roots) {
    per_root.push_back(transferer.TransferNode(r));
  }
  std::vector<TransferResult> results{{}};
  for (const std::vector<Alt> &alts : per_root) {
    std::vector<TransferResult> grown;
    for (const TransferResult &partial : results) {
      for (const Alt &a : alts) {
        TransferResult r = partial;
        r.network.roots.push_back(a.node);
        r.score *= a.score;
        r.trace.insert(r.trace.end(), a.trace.begin(), a.trace.end());
        grown.push_back(std::move(r));
      }
    }
    results = std::move(grown);
  }
  std::vector<TransferResult> out;
  std::set<std::string> seen;
  std::optional<Error> error;
  for (TransferResult &r : results) {
    try {
      r.network = Canonicalize(r.network);
    } catch (const Error &e) {
      if (!error) error = e.WithStage("transfer");
      continue;
    }
    if (seen.insert(CanonicalKey(r.network)).second) out.push_back(std::move(r));
  }
  if (out.empty()) {
    if (error) throw *error;
    throw Error(ErrorKind::kUntranslatableConcept, "no transfer result", {},
                "transfer");
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TransferResult &a, const TransferResult &b) {
                     return a.score > b.score;
                   });
  size_t beam = static_cast<size_t>(std::max(1, options.beam));
  if (out.size() > beam) out.resize(beam);
  return out;
}

LanguagePair LoadPairFromString(std::string_view text, std::string_view path) {
  namespace fs = std::filesystem;
  const std::string file(path);
  TreelineDocument doc;
  try {
    doc = ParseDocument(text, path);
  } catch (const Error &e) {
    throw Error(ErrorKind::kModelLoad, e.message(), e.location(), "load");
  }
  fs::path base = file.empty() ? fs::path(".") : fs::path(file).parent_path();
  LanguagePair pair;
  pair.path = file;
  bool have_source = false, have_receptor = false;
  int next_id = 1;
  for (const Statement &stmt : doc.statements) {
    Location where{file, stmt.line, 0};
    try {
      if (const auto *inc = std::get_if<IncludeStmt>(&stmt.body)) {
        fs::path p = fs::path(inc->path);
        if (p.is_relative()) p = base / p;
        Model m = LoadModel(p.string());
        if (inc->role == "source") {
          pair.source = std::move(m);
          have_source = true;
        } else {
          pair.receptor = std::move(m);
          have_receptor = true;
        }
      } else if (const auto *t = std::get_if<TransferRuleStmt>(&stmt.body)) {
        pair.rules.push_back(TransferRule::Compile(*t, next_id++, stmt.line));
      } else if (const auto *m = std::get_if<MapStmt>(&stmt.body)) {
        if (!m->src && !m->dst) {
          pair.map.set_identity(true);
        } else if (m->src && m->dst) {
          pair.map.Add(*m->src, *m->dst);
        } else if (m->src) {
          pair.map.Add(*m->src, *m->src);
        } else {
          throw Error(ErrorKind::kModelLoad,
                      "map with a wildcard source needs a wildcard target");
        }
      } else {
        throw Error(ErrorKind::kModelLoad,
                    "only source:, receptor:, transfer rules and map lines "
                    "belong in a language pair file");
      }
    } catch (const Error &e) {
      Error located = e.WithLocation(where);
      throw Error(ErrorKind::kModelLoad, located.message(), located.location(),
                  "load");
    }
  }
  if (!have_source || !have_receptor) {
    throw Error(ErrorKind::kModelLoad,
                "language pair needs both source: and receptor: lines",
                Location{file, 0, 0}, "load");
  }
  for (const TransferRule &rule : pair.rules) {
    std::set<std::string> stemless;
    CollectStemless(rule.src(), &stemless);
    CollectStemless(rule.dst(), &stemless);
    for (const std::string &label : stemless) {
      if (!pair.source.lexicon().IsDeclared(label) &&
          !pair.receptor.lexicon().IsDeclared(label)) {
        throw Error(ErrorKind::kModelLoad,
                    "stemless concept {" + label +
                        "} is declared in neither model",
                    Location{file, rule.line(), 0}, "load");
      }
    }
  }
  return pair;
}

LanguagePair LoadPair(const std::string &path) {
  return LoadPairFromString(ReadFile(path), path);
}

std::vector<TranslateResult> Translate(const LanguagePair &pair,
                                       const std::string &text) {
  std::vector<ParseResult> parses;
  try {
    parses = ParseText(pair.source, text);
  } catch (const Error &e) {
    throw e.WithStage("parse");
  }
  TransferOptions topts;
  topts.tau = pair.source.options().tau;
  topts.beam = pair.source.options().beam;

  std::vector<TranslateResult> results;
  std::optional<Error> error;
  for (const ParseResult &parse : parses) {
    std::vector<TransferResult> transfers;
    try {
      transfers = ApplyTransfer(pair.rules, pair.map, pair.source,
                                parse.network, topts);
    } catch (const Error &e) {
      if (!error) error = e.WithStage("transfer");
      continue;
    }
    for (const TransferResult &tr : transfers) {
      std::vector<RealizeResult> realized;
      try {
        realized = Realize(pair.receptor, tr.network);
      } catch (const Error &e) {
        if (!error) error = e.WithStage("realize");
        continue;
      }
      for (const RealizeResult &rr : realized) {
        TranslateResult r;
        r.text = rr.text;
        r.score = parse.score * tr.score * rr.score;
        r.trace.push_back("parse: " + PrintNetwork(parse.network) + " @" +
                          FormatScore(parse.score));
        r.trace.insert(r.trace.end(), parse.trace.begin(), parse.trace.end());
        r.trace.push_back("transfer: " + PrintNetwork(tr.network) + " @" +
                          FormatScore(tr.score));
        r.trace.insert(r.trace.end(), tr.trace.begin(), tr.trace.end());
        r.trace.push_back("realize: " + rr.text + " @" +
                          FormatScore(rr.score));
        r.trace.insert(r.trace.end(), rr.trace.begin(), rr.trace.end());
        results.push_back(std::move(r));
      }
    }
  }
  if (results.empty()) {
    if (error) throw *error;
    throw Error(ErrorKind::kUnrealizableFragment, "no translation", {},
                "realize");
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const TranslateResult &a, const TranslateResult &b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.text.size() != b.text.size()) {
                       return a.text.size() < b.text.size();
                     }
                     return a.text < b.text;
                   });
  std::vector<TranslateResult> unique;
  std::set<std::string> seen;
  for (TranslateResult &r : results) {
    if (seen.insert(r.text).second) unique.push_back(std::move(r));
  }
  return unique;
}

}  // namespace conspec
