#ifndef CONSPEC_EXPORT_H_
#define CONSPEC_EXPORT_H_

#include <string>

#include "conspec/network.h"

namespace conspec {

// Nested JSON graph export of the canonical network:
//   {"roots": [node...], "references": [{"from": id, "to": id}...]}
// A concept node is {"label", "stemless", "sense", "specifiers"}, a capsule
// node is {"capsule": {"roots": [...]}, "specifiers"}; either may carry
// "anchor": {"dir": "up"|"down", "depth": n} and "head": true. Ids are
// pre-order positions (node, capsule body, specifiers). See docs/formats.md.
std::string ToJson(const Network &network, int indent = 2);

// Graphviz DOT export: one DOT node per network node, solid edges for
// specification, dashed edges from a capsule to its body roots, dotted
// edges for resolved anchors.
std::string ToDot(const Network &network);

}  // namespace conspec

#endif  // CONSPEC_EXPORT_H_
