#include "conspec/model.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "conspec/error.h"
#include "conspec/treeline.h"

namespace conspec {

namespace {

void CollectStemmed(const Node &node, std::set<Concept> *out) {
  if (node.is_concept()) {
    if (!node.as_concept().stemless) out->insert(node.as_concept());
  } else {
    for (const Node &r : node.capsule().roots) CollectStemmed(r, out);
  }
  for (const Node &s : node.specifiers) CollectStemmed(s, out);
}

Error AsLoadError(const Error &e, std::string_view file, int line) {
  Location loc = e.location();
  if (loc.file.empty()) loc.file = std::string(file);
  if (loc.line == 0) loc.line = line;
  std::string message = e.message();
  if (e.kind() != ErrorKind::kModelLoad) {
    message = std::string(ErrorKindName(e.kind())) + ": " + message;
  }
  return Error(ErrorKind::kModelLoad, message, loc, "load");
}

}  // namespace

Model::Model() : lexicon_(Lexicon::WithDefaults()) { Finish(); }

Model::Model(const Model &other)
    : lexicon_(other.lexicon_),
      rules_(other.rules_),
      options_(other.options_),
      path_(other.path_),
      hash_(other.hash_),
      notes_(other.notes_) {
  Finish();
}

Model &Model::operator=(const Model &other) {
  if (this != &other) {
    lexicon_ = other.lexicon_;
    rules_ = other.rules_;
    options_ = other.options_;
    path_ = other.path_;
    hash_ = other.hash_;
    notes_ = other.notes_;
    Finish();
  }
  return *this;
}

void Model::Finish() {
  similarity_ = std::make_unique<DefinitionSimilarity>(lexicon_, options_.alpha);
}

std::vector<Concept> Model::KnownConcepts() const {
  std::set<Concept> known;
  for (const auto &[name, def] : lexicon_.definitions()) {
    if (!name.stemless) known.insert(name);
    for (const Node &r : def.body.roots) CollectStemmed(r, &known);
  }
  for (const Rule &rule : rules_) {
    for (const Node &r : rule.lhs().roots) CollectStemmed(r, &known);
  }
  for (const auto &[term, forms] : lexicon_.surface_forms()) {
    if (!term.stemless) known.insert(term);
  }
  return {known.begin(), known.end()};
}

void ApplyPragma(const std::string &key, const std::string &value,
                 EngineOptions *options) {
  auto number = [&](double lo, double hi) {
    try {
      size_t used = 0;
      double v = std::stod(value, &used);
      if (used == value.size() && v >= lo && v <= hi) return v;
    } catch (const std::exception &) {
    }
    throw Error(ErrorKind::kModelLoad, "bad value '" + value + "' for '" + key +
                                           "' (expected a number in [" +
                                           std::to_string(lo) + ", " +
                                           std::to_string(hi) + "])");
  };
  if (key == "alpha") {
    options->alpha = number(0.0, 1.0);
  } else if (key == "tau") {
    options->tau = number(0.0, 1.0);
  } else if (key == "beam") {
    double v = number(1, 1 << 20);
    if (v != static_cast<int>(v)) {
      throw Error(ErrorKind::kModelLoad, "beam must be an integer");
    }
    options->beam = static_cast<int>(v);
  } else if (key == "orthography") {
    if (value == "sentence" || value == "on") {
      options->orthography = true;
    } else if (value == "none" || value == "off") {
      options->orthography = false;
    } else {
      throw Error(ErrorKind::kModelLoad,
                  "orthography must be 'sentence' or 'none', got '" + value +
                      "'");
    }
  } else {
    throw Error(ErrorKind::kModelLoad, "unknown setting '" + key + "'");
  }
}

Model LoadModelFromString(std::string_view text, std::string_view path) {
  Model m;
  m.path_ = std::string(path);
  m.hash_ = ContentHash(text);
  TreelineDocument doc;
  try {
    doc = ParseDocument(text, path);
  } catch (const Error &e) {
    throw AsLoadError(e, path, 0);
  }
  m.notes_ = doc.notes;
  for (const Statement &stmt : doc.statements) {
    try {
      std::visit(
          [&](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DefinitionStmt>) {
              m.lexicon_.Define(s.name, s.body, stmt.line);
            } else if constexpr (std::is_same_v<T, DeclareStmt>) {
              m.lexicon_.Declare(s.label.label, s.description);
            } else if constexpr (std::is_same_v<T, PragmaStmt>) {
              ApplyPragma(s.key, s.value, &m.options_);
            } else if constexpr (std::is_same_v<T, SurfaceStmt>) {
              m.lexicon_.AddSurfaceForms(s.term, s.forms);
            } else if constexpr (std::is_same_v<T, RuleStmt>) {
              int id = static_cast<int>(m.rules_.size()) + 1;
              m.rules_.push_back(Rule::Compile(s, id, stmt.line));
            } else if constexpr (std::is_same_v<T, NetworkStmt>) {
              throw Error(ErrorKind::kModelLoad,
                          "bare network statement in a model file");
            } else {
              throw Error(ErrorKind::kModelLoad,
                          "transfer rules, maps and includes belong in a "
                          "language-pair file");
            }
          },
          stmt.body);
    } catch (const Error &e) {
      throw AsLoadError(e, path, stmt.line);
    }
  }
  try {
    m.lexicon_.CheckAcyclic();
  } catch (const Error &e) {
    throw AsLoadError(e, path, 0);
  }
  m.Finish();
  return m;
}

Model LoadModel(const std::string &path) {
  return LoadModelFromString(ReadFile(path), path);
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kModelLoad, "cannot open file", Location{path, 0, 0},
                "load");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string ContentHash(std::string_view text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace conspec
