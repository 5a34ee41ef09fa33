#include "conspec/realizer.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "conspec/error.h"
#include "conspec/treeline.h"

namespace conspec {

namespace {

constexpr int kMaxSteps = 64;

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return buf;
}

struct Option {
  std::vector<Item> items;
  double score = 1.0;
  std::string note;
};

struct Hypothesis {
  std::vector<Item> items;
  double score = 1.0;
  std::vector<std::string> states;
  std::vector<std::string> trace;
};

bool AllLiterals(const std::vector<Item> &items) {
  return std::all_of(items.begin(), items.end(), [](const Item &i) {
    return std::holds_alternative<std::string>(i);
  });
}

std::vector<Option> OptionsFor(const Model &model, const Matcher &matcher,
                               const Node &node) {
  std::vector<Option> out;
  bool bare = node.specifiers.empty();
  bool bare_stemmed = bare && node.is_concept() && !node.as_concept().stemless;
  if (bare_stemmed) {
    for (const std::string &form : model.lexicon().SurfaceForms(node.as_concept())) {
      out.push_back({{form}, 1.0, "surface " + QuoteLiteral(form)});
    }
  }
  for (const Match &m : MatchRules(model.rules(), matcher, node)) {
    // Analogy never replaces a bare concept's own label.
    if (bare_stemmed && !m.exact()) continue;
    std::vector<Item> items = matcher.Apply(m);
    if (items.size() == 1 && std::holds_alternative<Node>(items[0]) &&
        std::get<Node>(items[0]) == node) {
      continue;
    }
    out.push_back({std::move(items), m.score,
                   m.rule->Name() + " " + m.rule->text() + " @" +
                       FormatScore(m.score)});
  }
  if (bare && node.is_capsule()) {
    std::vector<Item> items;
    for (const Node &r : node.capsule().roots) {
      Node root = r;
      root.anchor.reset();
      root.head = false;
      items.emplace_back(std::move(root));
    }
    out.push_back({std::move(items), 1.0, "unwrap capsule"});
  }
  return out;
}

void SortAndPrune(std::vector<Hypothesis> *hyps, size_t beam,
                  std::vector<std::string> *pruned_note) {
  std::stable_sort(hyps->begin(), hyps->end(),
                   [](const Hypothesis &a, const Hypothesis &b) {
                     return a.score > b.score;
                   });
  if (hyps->size() > beam) {
    size_t dropped = hyps->size() - beam;
    hyps->resize(beam);
    if (pruned_note != nullptr) {
      pruned_note->push_back("beam: pruned " + std::to_string(dropped) +
                             " hypotheses");
    }
  }
}

}  // namespace

std::string JoinAffixes(const std::vector<std::string> &tokens) {
  std::vector<std::string> words;
  std::string prefix;
  for (const std::string &tok : tokens) {
    if (tok.empty()) {
      throw Error(ErrorKind::kUnrealizableFragment, "empty surface token");
    }
    bool affix = tok.size() > 1;
    if (affix && tok.front() == '+') {
      if (words.empty()) {
        throw Error(ErrorKind::kUnrealizableFragment,
                    "suffix '" + tok + "' has no previous token");
      }
      words.back() += tok.substr(1);
    } else if (affix && tok.front() == '-') {
      if (words.empty()) {
        throw Error(ErrorKind::kUnrealizableFragment,
                    "strip '" + tok + "' has no previous token");
      }
      std::string suffix = tok.substr(1);
      std::string &prev = words.back();
      if (prev.size() < suffix.size() ||
          prev.compare(prev.size() - suffix.size(), suffix.size(), suffix) !=
              0) {
        throw Error(ErrorKind::kUnrealizableFragment,
                    "cannot strip '" + suffix + "' from '" + prev + "'");
      }
      prev.resize(prev.size() - suffix.size());
    } else if (affix && tok.back() == '+') {
      prefix += tok.substr(0, tok.size() - 1);
    } else {
      words.push_back(prefix + tok);
      prefix.clear();
    }
  }
  if (!prefix.empty()) {
    throw Error(ErrorKind::kUnrealizableFragment,
                "prefix '" + prefix + "+' has no following token");
  }
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

std::string ApplyOrthography(const std::string &text) {
  std::string out = text;
  if (out.empty()) return out;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  char last = out.back();
  if (last != '.' && last != '?' && last != '!') out += '.';
  return out;
}

std::vector<RealizeResult> Realize(const Model &model, const Network &network) {
  Network canonical;
  try {
    canonical = Canonicalize(network);
  } catch (const Error &e) {
    throw e.WithStage("realize");
  }
  if (canonical.roots.empty()) {
    throw Error(ErrorKind::kUnrealizableFragment, "empty network", {},
                "realize");
  }
  Matcher matcher = model.matcher();
  const size_t beam = static_cast<size_t>(std::max(1, model.options().beam));

  Hypothesis start;
  for (const Node &r : canonical.roots) start.items.emplace_back(r);
  start.states.push_back(PrintNetwork(canonical));
  std::vector<Hypothesis> live{std::move(start)};
  std::vector<Hypothesis> done;
  std::vector<std::string> errors;
  std::map<std::string, std::vector<Option>> cache;

  for (int step = 0; step < kMaxSteps && !live.empty(); ++step) {
    std::vector<Hypothesis> next;
    for (Hypothesis &hyp : live) {
      if (AllLiterals(hyp.items)) {
        done.push_back(std::move(hyp));
        continue;
      }
      struct Partial {
        std::vector<Item> items;
        double score;
        std::vector<std::string> notes;
      };
      std::vector<Partial> partials{{{}, hyp.score, {}}};
      bool stuck = false;
      for (const Item &item : hyp.items) {
        if (const auto *lit = std::get_if<std::string>(&item)) {
          for (Partial &p : partials) p.items.emplace_back(*lit);
          continue;
        }
        const Node &node = std::get<Node>(item);
        std::string key = CanonicalKey(node);
        auto it = cache.find(key);
        if (it == cache.end()) {
          it = cache.emplace(key, OptionsFor(model, matcher, node)).first;
        }
        const std::vector<Option> &options = it->second;
        if (options.empty()) {
          errors.push_back("no rule realizes fragment '" + PrintNode(node) +
                           "'");
          stuck = true;
          break;
        }
        std::vector<Partial> grown;
        for (const Partial &p : partials) {
          for (const Option &o : options) {
            Partial q = p;
            q.items.insert(q.items.end(), o.items.begin(), o.items.end());
            q.score *= o.score;
            q.notes.push_back(o.note);
            grown.push_back(std::move(q));
          }
        }
        std::stable_sort(grown.begin(), grown.end(),
                         [](const Partial &a, const Partial &b) {
                           return a.score > b.score;
                         });
        if (grown.size() > beam) {
          size_t dropped = grown.size() - beam;
          grown.resize(beam);
          for (Partial &q : grown) {
            q.notes.push_back("beam: pruned " + std::to_string(dropped) +
                              " alternatives");
          }
        }
        partials = std::move(grown);
      }
      if (stuck) continue;
      for (Partial &p : partials) {
        Hypothesis h;
        h.score = p.score;
        h.states = hyp.states;
        h.states.push_back(PrintItems(p.items));
        h.trace = hyp.trace;
        h.trace.insert(h.trace.end(), p.notes.begin(), p.notes.end());
        h.items = std::move(p.items);
        next.push_back(std::move(h));
      }
    }
    // Merge hypotheses that reached the same state.
    std::map<std::string, size_t> seen;
    std::vector<Hypothesis> merged;
    for (Hypothesis &h : next) {
      std::string key = h.states.back();
      auto [it, inserted] = seen.emplace(key, merged.size());
      if (inserted) {
        merged.push_back(std::move(h));
      } else if (h.score > merged[it->second].score) {
        merged[it->second] = std::move(h);
      }
    }
    std::vector<std::string> pruned;
    SortAndPrune(&merged, beam, &pruned);
    for (Hypothesis &h : merged) {
      h.trace.insert(h.trace.end(), pruned.begin(), pruned.end());
    }
    live = std::move(merged);
  }
  for (Hypothesis &h : live) {
    if (AllLiterals(h.items)) {
      done.push_back(std::move(h));
    } else {
      errors.push_back("rewriting did not finish within " +
                       std::to_string(kMaxSteps) + " steps");
    }
  }

  std::vector<RealizeResult> results;
  for (Hypothesis &h : done) {
    std::vector<std::string> tokens;
    for (const Item &i : h.items) tokens.push_back(std::get<std::string>(i));
    RealizeResult r;
    try {
      r.text = JoinAffixes(tokens);
    } catch (const Error &e) {
      errors.push_back(e.message());
      continue;
    }
    r.score = h.score;
    r.states = std::move(h.states);
    std::string joined = PrintItems({Item(r.text)});
    if (r.states.back() != joined) r.states.push_back(joined);
    if (model.options().orthography) r.text = ApplyOrthography(r.text);
    r.trace = std::move(h.trace);
    results.push_back(std::move(r));
  }
  if (results.empty()) {
    std::string message = errors.empty() ? "no realization" : errors.front();
    throw Error(ErrorKind::kUnrealizableFragment, message, {}, "realize");
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const RealizeResult &a, const RealizeResult &b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.text.size() != b.text.size()) {
                       return a.text.size() < b.text.size();
                     }
                     return a.text < b.text;
                   });
  std::vector<RealizeResult> unique;
  for (RealizeResult &r : results) {
    bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto &u) {
      return u.text == r.text;
    });
    if (!dup) unique.push_back(std::move(r));
  }
  return unique;
}

}  // namespace conspec
