#ifndef CONSPEC_SIMILARITY_H_
#define CONSPEC_SIMILARITY_H_

#include <utility>
#include <vector>

#include "conspec/lexicon.h"
#include "conspec/network.h"

namespace conspec {

// Discount that keeps analogical matches strictly below exact ones.
inline constexpr double kDefaultAlpha = 0.9;

// Concept-to-concept similarity in [0, 1]; 1 only for identical concepts.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double ConceptSim(const Concept &a, const Concept &b) const = 0;
};

// Jaccard overlap of definition ancestors, scaled by alpha.
class DefinitionSimilarity : public SimilarityProvider {
 public:
  explicit DefinitionSimilarity(const Lexicon &lexicon,
                                double alpha = kDefaultAlpha)
      : lexicon_(lexicon), alpha_(alpha) {}

  double ConceptSim(const Concept &a, const Concept &b) const override;

 private:
  const Lexicon &lexicon_;
  double alpha_;
};

double ConceptSim(const Lexicon &lexicon, const Concept &a, const Concept &b,
                  double alpha = kDefaultAlpha);

// Pattern node id -> target node id, both in NetworkIndex pre-order.
using Binding = std::vector<std::pair<int, int>>;

struct SimilarityResult {
  double score = 0.0;
  Binding binding;
};

// Best bijective alignment of pattern onto target that preserves
// specification edges, encapsulation boundaries, anchors and head markers.
// The score is the geometric mean of the aligned concept similarities;
// differing stemless concepts make an alignment invalid. No valid
// alignment gives score 0 and an empty binding.
SimilarityResult NetworkSim(const SimilarityProvider &provider,
                            const Network &pattern, const Network &target);
SimilarityResult NetworkSim(const Lexicon &lexicon, const Network &pattern,
                            const Network &target,
                            double alpha = kDefaultAlpha);

}  // namespace conspec

#endif  // CONSPEC_SIMILARITY_H_
