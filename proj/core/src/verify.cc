#include "conspec/verify.h"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "conspec/parser.h"
#include "conspec/realizer.h"

namespace conspec {

namespace {

void CollectStemless(const Node &node, std::set<std::string> *out) {
  if (node.is_concept()) {
    if (node.as_concept().stemless) out->insert(node.as_concept().label);
  } else {
    for (const Node &r : node.capsule().roots) CollectStemless(r, out);
  }
  for (const Node &s : node.specifiers) CollectStemless(s, out);
}

void CollectStemless(const Network &net, std::set<std::string> *out) {
  for (const Node &r : net.roots) CollectStemless(r, out);
}

bool ContainsNetwork(const std::vector<ParseResult> &parses,
                     const Network &want, int top) {
  int n = std::min<int>(top, static_cast<int>(parses.size()));
  for (int i = 0; i < n; ++i) {
    if (Identical(parses[i].network, want)) return true;
  }
  return false;
}

bool ContainsText(const std::vector<RealizeResult> &results,
                  const std::string &want, int top) {
  int n = std::min<int>(top, static_cast<int>(results.size()));
  for (int i = 0; i < n; ++i) {
    if (results[i].text == want) return true;
  }
  return false;
}

}  // namespace

bool CheckReport::ok() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow &r) { return r.ok(); });
}

std::string CheckReport::Table() const {
  std::ostringstream out;
  auto mark = [](bool b) { return b ? "ok  " : "FAIL"; };
  out << "line  parse realize p(r)  r(p)  surface\n";
  int passed = 0;
  for (const CheckRow &r : rows) {
    out << std::left << std::setw(6) << r.line << mark(r.parse) << "  "
        << mark(r.realize) << "    " << mark(r.parse_realize) << "  "
        << mark(r.realize_parse) << "  " << r.surface << "\n";
    if (!r.detail.empty()) out << "      " << r.detail << "\n";
    if (r.ok()) ++passed;
  }
  out << passed << "/" << rows.size() << " lines passed\n";
  return out.str();
}

CheckReport CheckCorpus(const Model &model,
                        const std::vector<CorpusEntry> &corpus, int top) {
  CheckReport report;
  for (const CorpusEntry &entry : corpus) {
    CheckRow row;
    row.line = entry.line;
    row.surface = entry.surface;
    row.treeline = entry.treeline;
    auto note = [&](const std::string &what, const Error &e) {
      if (row.detail.empty()) row.detail = what + ": " + e.what();
    };
    Network want;
    try {
      want = Canonicalize(ParseNetwork(entry.treeline));
    } catch (const Error &e) {
      note("tree-line", e);
      report.rows.push_back(std::move(row));
      continue;
    }
    std::vector<ParseResult> parses;
    try {
      parses = ParseText(model, entry.surface);
      row.parse = ContainsNetwork(parses, want, top);
      if (!row.parse && row.detail.empty()) {
        row.detail = "parse: top is " + PrintNetwork(parses[0].network);
      }
    } catch (const Error &e) {
      note("parse", e);
    }
    std::vector<RealizeResult> realized;
    try {
      realized = Realize(model, want);
      row.realize = ContainsText(realized, entry.surface, top);
      if (!row.realize && row.detail.empty()) {
        row.detail = "realize: top is '" + realized[0].text + "'";
      }
    } catch (const Error &e) {
      note("realize", e);
    }
    if (!realized.empty()) {
      try {
        row.parse_realize =
            ContainsNetwork(ParseText(model, realized[0].text), want, top);
      } catch (const Error &e) {
        note("parse(realize)", e);
      }
    }
    if (!parses.empty()) {
      try {
        row.realize_parse = ContainsText(Realize(model, parses[0].network),
                                         entry.surface, top);
      } catch (const Error &e) {
        note("realize(parse)", e);
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

CheckReport CheckNotation(const std::vector<CorpusEntry> &corpus) {
  CheckReport report;
  for (const CorpusEntry &entry : corpus) {
    CheckRow row;
    row.line = entry.line;
    row.surface = entry.surface;
    row.treeline = entry.treeline;
    row.realize = row.parse_realize = row.realize_parse = true;
    try {
      Network parsed = ParseNetwork(entry.treeline);
      Network canon = Canonicalize(parsed);
      std::string printed = PrintNetwork(canon);
      Network reparsed = Canonicalize(ParseNetwork(printed));
      bool fixed = Identical(Canonicalize(canon), canon);
      row.parse = fixed && Identical(reparsed, canon) && Equal(parsed, reparsed);
      if (!row.parse) row.detail = "round trip differs: " + printed;
    } catch (const Error &e) {
      row.detail = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string LintMessage::ToString() const {
  std::string where = location.ToString();
  return (where.empty() ? "" : where + ": ") +
         (severity == Severity::kNote ? "note: " : "warning: ") + message;
}

std::vector<LintMessage> LintModel(const std::string &text,
                                   const std::string &path,
                                   const std::vector<CorpusEntry> *corpus) {
  using Severity = LintMessage::Severity;
  TreelineDocument doc;
  try {
    doc = ParseDocument(text, path, /*allow_duplicates=*/true);
  } catch (const Error &e) {
    throw Error(ErrorKind::kModelLoad, e.message(), e.location(), "load");
  }
  std::vector<LintMessage> out;
  for (const std::string &n : doc.notes) {
    out.push_back({Severity::kNote, Location{path, 0, 0}, n});
  }

  std::set<std::string> declared;
  const Lexicon defaults = Lexicon::WithDefaults();
  for (const auto &[label, description] : defaults.registry()) {
    declared.insert(label);
  }
  for (const Statement &stmt : doc.statements) {
    if (const auto *d = std::get_if<DeclareStmt>(&stmt.body)) {
      declared.insert(d->label.label);
    }
  }

  std::map<Concept, int> defined;
  for (const Statement &stmt : doc.statements) {
    Location where{path, stmt.line, 0};
    std::set<std::string> used;
    if (const auto *d = std::get_if<DefinitionStmt>(&stmt.body)) {
      if (d->name.stemless) used.insert(d->name.label);
      CollectStemless(d->body, &used);
      auto [it, inserted] = defined.emplace(d->name, stmt.line);
      if (!inserted) {
        out.push_back({Severity::kWarning, where,
                       "duplicate definition of '" + d->name.ToString() +
                           "' at lines " + std::to_string(it->second) +
                           " and " + std::to_string(stmt.line)});
      }
      if (d->body.roots.size() > 1) {
        out.push_back({Severity::kWarning, where,
                       "definition of '" + d->name.ToString() +
                           "' has a multi-root body"});
      }
    } else if (const auto *r = std::get_if<RuleStmt>(&stmt.body)) {
      CollectStemless(r->lhs, &used);
      for (const RulePart &p : r->rhs) {
        if (!p.is_literal()) CollectStemless(p.pattern, &used);
      }
      if (r->lhs.roots.size() > 1) {
        out.push_back({Severity::kWarning, where, "rule has a multi-root side"});
      }
    } else if (const auto *n = std::get_if<NetworkStmt>(&stmt.body)) {
      CollectStemless(n->network, &used);
      out.push_back({Severity::kWarning, where,
                     n->network.roots.size() > 1
                         ? "multi-root network (not loadable in a model)"
                         : "bare network (not loadable in a model)"});
    } else if (const auto *s = std::get_if<SurfaceStmt>(&stmt.body)) {
      if (s->term.stemless) used.insert(s->term.label);
    }
    for (const std::string &label : used) {
      if (declared.count(label) == 0) {
        out.push_back({Severity::kWarning, where,
                       "undeclared stemless concept {" + label + "}"});
      }
    }
  }

  bool duplicates = std::any_of(out.begin(), out.end(), [](const auto &m) {
    return m.message.rfind("duplicate definition", 0) == 0;
  });
  if (duplicates || corpus == nullptr) return out;

  Model model = LoadModelFromString(text, path);
  std::vector<std::string> traces;
  for (const CorpusEntry &entry : *corpus) {
    Network want;
    try {
      want = ParseNetwork(entry.treeline);
    } catch (const Error &e) {
      out.push_back({Severity::kWarning, Location{"corpus", entry.line, 0},
                     e.message()});
      continue;
    }
    if (want.roots.size() > 1) {
      out.push_back({Severity::kWarning, Location{"corpus", entry.line, 0},
                     "multi-root network"});
    }
    try {
      for (const RealizeResult &r : Realize(model, want)) {
        traces.insert(traces.end(), r.trace.begin(), r.trace.end());
      }
    } catch (const Error &) {
    }
    try {
      for (const ParseResult &r : ParseText(model, entry.surface)) {
        traces.insert(traces.end(), r.trace.begin(), r.trace.end());
      }
    } catch (const Error &) {
    }
  }
  for (const Rule &rule : model.rules()) {
    std::string prefix = rule.Name() + " ";
    bool used = std::any_of(traces.begin(), traces.end(), [&](const auto &t) {
      return t.rfind(prefix, 0) == 0;
    });
    if (!used) {
      out.push_back({Severity::kWarning, Location{path, rule.line(), 0},
                     rule.Name() + " is not used by any corpus line"});
    }
  }
  return out;
}

}  // namespace conspec
