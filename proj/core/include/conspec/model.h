#ifndef CONSPEC_MODEL_H_
#define CONSPEC_MODEL_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "conspec/lexicon.h"
#include "conspec/rules.h"
#include "conspec/similarity.h"

namespace conspec {

// A loaded language model: lexicon, realization rules and engine settings.
// Immutable once loaded; share it freely between threads.
class Model {
 public:
  Model();
  Model(const Model &other);
  Model &operator=(const Model &other);

  const Lexicon &lexicon() const { return lexicon_; }
  const RuleSet &rules() const { return rules_; }
  const EngineOptions &options() const { return options_; }
  const SimilarityProvider &similarity() const { return *similarity_; }
  Matcher matcher() const {
    return Matcher(lexicon_, *similarity_, options_.tau);
  }

  const std::string &path() const { return path_; }
  // FNV-1a of the model text, as 16 hex digits.
  const std::string &content_hash() const { return hash_; }
  // Normalization notes from the tree-line reader.
  const std::vector<std::string> &notes() const { return notes_; }

  // Overrides for command-line flags.
  void set_beam(int beam) { options_.beam = beam; }
  void set_tau(double tau) { options_.tau = tau; }

  // Every stemmed concept the model mentions; used for parsing words.
  std::vector<Concept> KnownConcepts() const;

  friend Model LoadModelFromString(std::string_view text,
                                   std::string_view path);

 private:
  void Finish();

  Lexicon lexicon_;
  RuleSet rules_;
  EngineOptions options_;
  std::unique_ptr<SimilarityProvider> similarity_;
  std::string path_;
  std::string hash_;
  std::vector<std::string> notes_;
};

// Loads a model file. Throws a model-load error with file:line on failure.
Model LoadModel(const std::string &path);
Model LoadModelFromString(std::string_view text, std::string_view path = {});

std::string ReadFile(const std::string &path);
std::string ContentHash(std::string_view text);

// Applies a `set key value` line to engine options. Throws on unknown keys
// or malformed values.
void ApplyPragma(const std::string &key, const std::string &value,
                 EngineOptions *options);

}  // namespace conspec

#endif  // CONSPEC_MODEL_H_
