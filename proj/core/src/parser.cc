#include "conspec/parser.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "conspec/error.h"
#include "conspec/realizer.h"
#include "conspec/treeline.h"

namespace conspec {

namespace {

constexpr int kMaxAffixes = 4;
constexpr size_t kMaxSegmentations = 64;
constexpr int kClosureRounds = 8;

std::vector<std::string> SplitWords(const std::string &text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::string JoinWords(const std::vector<std::string> &words, size_t from,
                      size_t to) {
  std::string out;
  for (size_t i = from; i < to; ++i) {
    if (i > from) out += ' ';
    out += words[i];
  }
  return out;
}

bool IsAffix(const std::string &tok) {
  return tok.size() > 1 &&
         (tok.front() == '+' || tok.front() == '-' || tok.back() == '+');
}

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return buf;
}

// Surface vocabulary of a model.
struct Vocabulary {
  std::set<std::string> stems;
  std::vector<std::string> prefixes;  // without the trailing '+'
  std::vector<std::string> strips;    // without the leading '-'
  std::vector<std::string> appends;   // without the leading '+'
  std::multimap<std::string, Concept> forms;
  size_t longest_form = 1;

  explicit Vocabulary(const Model &model) {
    for (const Concept &c : model.KnownConcepts()) {
      for (const std::string &f : model.lexicon().SurfaceForms(c)) {
        forms.emplace(f, c);
        std::vector<std::string> pieces = SplitWords(f);
        longest_form = std::max(longest_form, pieces.size());
        stems.insert(pieces.begin(), pieces.end());
      }
    }
    std::set<std::string> p, s, a;
    for (const Rule &rule : model.rules()) {
      for (const Rule::Part &part : rule.parts()) {
        if (!part.literal) continue;
        const std::string &lit = *part.literal;
        if (lit.size() > 1 && lit.front() == '+') {
          a.insert(lit.substr(1));
        } else if (lit.size() > 1 && lit.front() == '-') {
          s.insert(lit.substr(1));
        } else if (lit.size() > 1 && lit.back() == '+') {
          p.insert(lit.substr(0, lit.size() - 1));
        } else {
          for (const std::string &w : SplitWords(lit)) stems.insert(w);
        }
      }
    }
    prefixes.assign(p.begin(), p.end());
    strips.assign(s.begin(), s.end());
    appends.assign(a.begin(), a.end());
  }

  // Ways to write `text` as a concatenation of literals from `set`, at
  // most `budget` pieces.
  static void Pieces(const std::string &text, const std::vector<std::string> &set,
                     int budget, std::vector<std::string> *cur,
                     std::vector<std::vector<std::string>> *out) {
    if (text.empty()) {
      out->push_back(*cur);
      return;
    }
    if (budget == 0) return;
    for (const std::string &piece : set) {
      if (piece.empty() || text.compare(0, piece.size(), piece) != 0) continue;
      cur->push_back(piece);
      Pieces(text.substr(piece.size()), set, budget - 1, cur, out);
      cur->pop_back();
    }
  }

  std::vector<std::vector<std::string>> DecomposeWord(const std::string &w,
                                                      int budget) const {
    std::vector<std::vector<std::string>> out;
    for (const std::string &p : prefixes) {
      if (budget == 0 || p.empty() || p.size() >= w.size()) continue;
      if (w.compare(0, p.size(), p) != 0) continue;
      for (auto &rest : DecomposeWord(w.substr(p.size()), budget - 1)) {
        rest.insert(rest.begin(), p + "+");
        out.push_back(std::move(rest));
      }
    }
    for (const std::string &s : stems) {
      size_t common = 0;
      while (common < s.size() && common < w.size() && s[common] == w[common]) {
        ++common;
      }
      for (size_t k = 1; k <= common; ++k) {
        std::string strip_tail = s.substr(k);
        std::string append_tail = w.substr(k);
        std::vector<std::vector<std::string>> strip_ways;
        std::vector<std::string> cur;
        if (strip_tail.empty()) {
          strip_ways.push_back({});
        } else {
          // Strips apply right to left: the first "-x" removes the end.
          std::vector<std::vector<std::string>> forward;
          Pieces(strip_tail, strips, budget, &cur, &forward);
          for (auto &way : forward) {
            std::reverse(way.begin(), way.end());
            strip_ways.push_back(std::move(way));
          }
        }
        for (const auto &sw : strip_ways) {
          int left = budget - static_cast<int>(sw.size());
          if (left < 0) continue;
          std::vector<std::vector<std::string>> append_ways;
          cur.clear();
          Pieces(append_tail, appends, left, &cur, &append_ways);
          for (const auto &aw : append_ways) {
            std::vector<std::string> tokens{s};
            for (const std::string &x : sw) tokens.push_back("-" + x);
            for (const std::string &y : aw) tokens.push_back("+" + y);
            out.push_back(std::move(tokens));
          }
        }
      }
    }
    // Keep only decompositions that really rebuild the word.
    std::vector<std::vector<std::string>> valid;
    std::set<std::vector<std::string>> seen;
    for (auto &tokens : out) {
      std::string joined;
      try {
        joined = JoinAffixes(tokens);
      } catch (const Error &) {
        continue;
      }
      if (joined == w && seen.insert(tokens).second) {
        valid.push_back(std::move(tokens));
      }
    }
    std::stable_sort(valid.begin(), valid.end(),
                     [](const auto &a, const auto &b) {
                       return a.size() < b.size();
                     });
    return valid;
  }
};

// On failure, `*matched` is the number of words segmented before the
// failing one.
std::vector<Segmentation> SegmentWith(const Vocabulary &vocab,
                                      const std::string &text,
                                      size_t *matched = nullptr) {
  std::vector<std::string> words = SplitWords(text);
  if (words.empty()) {
    throw Error(ErrorKind::kUnparseableText, "empty input", {}, "parse");
  }
  std::vector<Segmentation> segs{{}};
  for (size_t i = 0; i < words.size(); ++i) {
    auto ways = vocab.DecomposeWord(words[i], kMaxAffixes);
    if (ways.empty()) {
      std::string prefix = JoinWords(words, 0, i);
      if (matched != nullptr) *matched = i;
      throw Error(ErrorKind::kUnparseableText,
                  "cannot segment '" + words[i] +
                      "'; longest matched prefix: '" + prefix + "'",
                  {}, "parse");
    }
    std::vector<Segmentation> grown;
    for (const Segmentation &s : segs) {
      for (const auto &way : ways) {
        if (grown.size() >= kMaxSegmentations) break;
        Segmentation g = s;
        g.tokens.insert(g.tokens.end(), way.begin(), way.end());
        grown.push_back(std::move(g));
      }
    }
    segs = std::move(grown);
  }
  return segs;
}

struct Entry {
  Node node;
  double score = 1.0;
  std::vector<std::string> trace;
  std::string key;
};

class Chart {
 public:
  Chart(const Model &model, const Vocabulary &vocab,
        const std::vector<std::string> &tokens)
      : model_(model),
        vocab_(vocab),
        matcher_(model.matcher()),
        tokens_(tokens),
        n_(tokens.size()),
        cells_(n_ * (n_ + 1)) {}

  void Run() {
    for (size_t len = 1; len <= n_; ++len) {
      for (size_t i = 0; i + len <= n_; ++i) Fill(i, i + len);
    }
  }

  const std::vector<Entry> &Cell(size_t i, size_t j) const {
    return cells_[i * (n_ + 1) + j];
  }

  // Spans with entries that no larger such span contains, longest first.
  std::vector<std::pair<size_t, size_t>> MaximalSpans() const {
    std::vector<std::pair<size_t, size_t>> spans;
    for (size_t len = n_; len >= 1; --len) {
      for (size_t i = 0; i + len <= n_; ++i) {
        if (Cell(i, i + len).empty()) continue;
        bool inside = std::any_of(spans.begin(), spans.end(), [&](auto s) {
          return s.first <= i && i + len <= s.second;
        });
        if (!inside) spans.emplace_back(i, i + len);
      }
    }
    return spans;
  }

 private:
  std::vector<Entry> &MutableCell(size_t i, size_t j) {
    return cells_[i * (n_ + 1) + j];
  }

  void Fill(size_t i, size_t j) {
    std::vector<Entry> found;
    Lexical(i, j, &found);
    for (const Rule &rule : model_.rules()) {
      if (IsUnary(rule)) continue;
      std::vector<const Entry *> used;
      Parts(rule, 0, i, j, &used, &found);
    }
    Closure(&found);
    Store(i, j, std::move(found));
  }

  static bool IsUnary(const Rule &rule) {
    return rule.parts().size() == 1 && !rule.parts()[0].literal;
  }

  void Lexical(size_t i, size_t j, std::vector<Entry> *out) const {
    if (j - i > vocab_.longest_form) return;
    for (size_t k = i; k < j; ++k) {
      if (IsAffix(tokens_[k])) return;
    }
    std::string phrase = JoinWords(tokens_, i, j);
    auto range = vocab_.forms.equal_range(phrase);
    for (auto it = range.first; it != range.second; ++it) {
      Entry e;
      e.node = Node::Of(it->second);
      e.trace.push_back("word " + QuoteLiteral(phrase) + " -> " +
                        it->second.ToString());
      out->push_back(std::move(e));
    }
  }

  void Parts(const Rule &rule, size_t k, size_t pos, size_t end,
             std::vector<const Entry *> *used, std::vector<Entry> *out) {
    const auto &parts = rule.parts();
    if (k == parts.size()) {
      if (pos == end) Complete(rule, *used, out);
      return;
    }
    if (end - pos < parts.size() - k) return;
    const Rule::Part &part = parts[k];
    if (part.literal) {
      std::vector<std::string> pieces = SplitWords(*part.literal);
      if (pieces.empty() || pos + pieces.size() > end) return;
      for (size_t m = 0; m < pieces.size(); ++m) {
        if (tokens_[pos + m] != pieces[m]) return;
      }
      Parts(rule, k + 1, pos + pieces.size(), end, used, out);
      return;
    }
    size_t total = end - pos;
    for (size_t e = pos + 1; e <= end; ++e) {
      // A lone sub-pattern spanning the whole range is handled by closure.
      if (k == 0 && parts.size() == 1 && e - pos == total) continue;
      for (const Entry &entry : Cell(pos, e)) {
        used->push_back(&entry);
        Parts(rule, k + 1, e, end, used, out);
        used->pop_back();
      }
    }
  }

  void Complete(const Rule &rule, const std::vector<const Entry *> &used,
                std::vector<Entry> *out) {
    std::vector<const Node *> fragments;
    double score = 1.0;
    for (const Entry *e : used) {
      fragments.push_back(&e->node);
      score *= e->score;
    }
    for (ParseMatch &m : matcher_.MatchParse(rule, fragments)) {
      Entry e;
      e.node = std::move(m.node);
      e.score = score * m.score;
      for (const Entry *u : used) {
        e.trace.insert(e.trace.end(), u->trace.begin(), u->trace.end());
      }
      e.trace.push_back(rule.Name() + " " + rule.text() + " @" +
                        FormatScore(m.score));
      out->push_back(std::move(e));
    }
  }

  void Closure(std::vector<Entry> *found) {
    std::set<std::string> keys;
    for (Entry &e : *found) {
      e.key = CanonicalKey(e.node);
      keys.insert(e.key);
    }
    size_t frontier = 0;
    for (int round = 0; round < kClosureRounds && frontier < found->size();
         ++round) {
      size_t stop = found->size();
      std::vector<Entry> added;
      for (size_t idx = frontier; idx < stop; ++idx) {
        for (const Rule &rule : model_.rules()) {
          if (!IsUnary(rule)) continue;
          std::vector<const Entry *> used{&(*found)[idx]};
          std::vector<Entry> produced;
          Complete(rule, used, &produced);
          for (Entry &e : produced) {
            e.key = CanonicalKey(e.node);
            if (keys.insert(e.key).second) added.push_back(std::move(e));
          }
        }
      }
      frontier = stop;
      for (Entry &e : added) found->push_back(std::move(e));
    }
  }

  void Store(size_t i, size_t j, std::vector<Entry> found) {
    std::map<std::string, size_t> best;
    std::vector<Entry> unique;
    for (Entry &e : found) {
      if (e.key.empty()) e.key = CanonicalKey(e.node);
      auto [it, inserted] = best.emplace(e.key, unique.size());
      if (inserted) {
        unique.push_back(std::move(e));
      } else if (e.score > unique[it->second].score) {
        unique[it->second] = std::move(e);
      }
    }
    std::stable_sort(unique.begin(), unique.end(),
                     [](const Entry &a, const Entry &b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.key < b.key;
                     });
    size_t beam = static_cast<size_t>(std::max(1, model_.options().beam));
    if (unique.size() > beam) unique.resize(beam);
    MutableCell(i, j) = std::move(unique);
  }

  const Model &model_;
  const Vocabulary &vocab_;
  Matcher matcher_;
  const std::vector<std::string> &tokens_;
  size_t n_;
  std::vector<std::vector<Entry>> cells_;
};

std::vector<std::string> OrthographyVariants(const Model &model,
                                             const std::string &text) {
  std::string t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) {
    t.pop_back();
  }
  size_t start = 0;
  while (start < t.size() && std::isspace(static_cast<unsigned char>(t[start]))) {
    ++start;
  }
  t = t.substr(start);
  if (!model.options().orthography) return {t};
  if (!t.empty() && t.back() == '.') t.pop_back();
  std::vector<std::string> out;
  if (!t.empty()) {
    std::string lower = t;
    lower[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(lower[0])));
    out.push_back(lower);
    if (lower != t) out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<Segmentation> Segment(const Model &model, const std::string &text) {
  Vocabulary vocab(model);
  return SegmentWith(vocab, text);
}

std::vector<ParseResult> ParseText(const Model &model, const std::string &text) {
  Vocabulary vocab(model);
  std::vector<std::string> variants = OrthographyVariants(model, text);
  if (variants.empty() || SplitWords(variants[0]).empty()) {
    throw Error(ErrorKind::kUnparseableText, "empty input", {}, "parse");
  }

  std::map<std::string, ParseResult> complete;
  // The variant that segmented furthest gives the most useful report.
  std::optional<Error> segment_error;
  size_t segment_reach = 0;
  std::string partial_report;
  for (const std::string &variant : variants) {
    std::vector<Segmentation> segs;
    size_t reach = 0;
    try {
      segs = SegmentWith(vocab, variant, &reach);
    } catch (const Error &e) {
      if (!segment_error || reach > segment_reach) {
        segment_error = e;
        segment_reach = reach;
      }
      continue;
    }
    for (const Segmentation &seg : segs) {
      Chart chart(model, vocab, seg.tokens);
      chart.Run();
      size_t n = seg.tokens.size();
      for (const Entry &e : chart.Cell(0, n)) {
        Network net;
        try {
          net = Canonicalize(Network::Of(e.node));
        } catch (const Error &) {
          continue;
        }
        std::string key = CanonicalKey(net);
        auto it = complete.find(key);
        if (it == complete.end() || e.score > it->second.score) {
          ParseResult r;
          r.network = std::move(net);
          r.score = e.score;
          r.trace = e.trace;
          complete[key] = std::move(r);
        }
      }
      if (complete.empty() && partial_report.empty()) {
        for (auto [i, j] : chart.MaximalSpans()) {
          if (!partial_report.empty()) partial_report += "; ";
          partial_report += "'" + JoinAffixes(std::vector<std::string>(
                                      seg.tokens.begin() + i,
                                      seg.tokens.begin() + j)) +
                            "' => " + PrintNode(chart.Cell(i, j)[0].node);
        }
      }
    }
  }

  if (complete.empty()) {
    if (segment_error && partial_report.empty()) throw *segment_error;
    throw Error(ErrorKind::kUnparseableText,
                "no complete parse of '" + text + "'; best partial spans: " +
                    (partial_report.empty() ? "none" : partial_report),
                {}, "parse");
  }
  std::vector<ParseResult> results;
  for (auto &[key, r] : complete) results.push_back(std::move(r));
  std::vector<std::string> printed;
  for (const ParseResult &r : results) printed.push_back(PrintNetwork(r.network));
  std::vector<size_t> order(results.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (results[a].score != results[b].score) {
      return results[a].score > results[b].score;
    }
    return printed[a] < printed[b];
  });
  std::vector<ParseResult> ranked;
  for (size_t i : order) ranked.push_back(std::move(results[i]));
  return ranked;
}

}  // namespace conspec
