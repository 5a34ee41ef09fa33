#include "conspec/export.h"

#include <sstream>

#include <nlohmann/json.hpp>

namespace conspec {

namespace {

using nlohmann::ordered_json;

ordered_json NodeJson(const Node &node) {
  ordered_json j;
  if (node.is_concept()) {
    const Concept &c = node.as_concept();
    j["label"] = c.label;
    j["stemless"] = c.stemless;
    j["sense"] = c.sense;
  } else {
    ordered_json roots = ordered_json::array();
    for (const Node &r : node.capsule().roots) roots.push_back(NodeJson(r));
    j["capsule"] = {{"roots", roots}};
  }
  ordered_json specs = ordered_json::array();
  for (const Node &s : node.specifiers) specs.push_back(NodeJson(s));
  j["specifiers"] = specs;
  if (node.anchor) {
    j["anchor"] = {
        {"dir", node.anchor->direction == AnchorDirection::kUp ? "up" : "down"},
        {"depth", node.anchor->depth}};
  }
  if (node.head) j["head"] = true;
  return j;
}

std::string DotEscape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string ToJson(const Network &network, int indent) {
  Network resolved = ResolveAnchors(Canonicalize(network));
  ordered_json j;
  ordered_json roots = ordered_json::array();
  for (const Node &r : resolved.roots) roots.push_back(NodeJson(r));
  j["roots"] = roots;
  ordered_json refs = ordered_json::array();
  for (const Reference &r : resolved.references) {
    refs.push_back({{"from", r.from}, {"to", r.to}});
  }
  j["references"] = refs;
  return j.dump(indent);
}

std::string ToDot(const Network &network) {
  Network resolved = ResolveAnchors(Canonicalize(network));
  NetworkIndex index(resolved);
  std::ostringstream out;
  out << "digraph network {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (int id = 0; id < index.size(); ++id) {
    const Node &n = index.node(id);
    std::string label;
    if (n.anchor) {
      for (int i = 0; i < n.anchor->depth; ++i) {
        label += n.anchor->direction == AnchorDirection::kUp ? ">>" : "<<";
      }
    }
    if (n.head) label += "^";
    out << "  n" << id << " [";
    if (n.is_concept()) {
      label += n.as_concept().ToString();
      out << "label=\"" << DotEscape(label) << "\", shape=ellipse";
    } else {
      label += "( )";
      out << "label=\"" << DotEscape(label) << "\", shape=box";
    }
    out << "];\n";
  }
  for (int id = 0; id < index.size(); ++id) {
    const Node &n = index.node(id);
    if (n.is_capsule()) {
      for (const Node &r : n.capsule().roots) {
        out << "  n" << id << " -> n" << index.IdOf(&r)
            << " [style=dashed];\n";
      }
    }
    for (const Node &s : n.specifiers) {
      out << "  n" << id << " -> n" << index.IdOf(&s) << ";\n";
    }
  }
  for (const Reference &r : resolved.references) {
    out << "  n" << r.from << " -> n" << r.to
        << " [style=dotted, constraint=false];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace conspec
