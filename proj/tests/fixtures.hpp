#pragma once

#include <sstream>
#include <string>

#include "stoc/graph.hpp"

namespace stoc::test {

// Small attributed graph with 8 nodes and 11 edges; sex is categorical, x and
// y are coordinates already on a unit scale.
inline constexpr const char* kToyEdges =
    "# v0..v7\n"
    "v0 v1\nv0 v2\nv0 v7\nv1 v2\nv1 v3\nv3 v4\nv4 v5\nv4 v6\nv5 v6\nv5 v7\nv6 v7\n";
inline constexpr const char* kToyAttrs =
    "id\tsex\tx\ty\n"
    "v0\t1\t0\t0.1\n"
    "v1\t1\t0\t0\n"
    "v2\t1\t0.1\t0.1\n"
    "v3\t0\t0.2\t0\n"
    "v4\t0\t0.4\t0\n"
    "v5\t0\t0.55\t0.1\n"
    "v6\t0\t0.6\t0\n"
    "v7\t1\t0.7\t0.09\n";
inline constexpr const char* kToySchema = "sex categorical\nx quantitative\ny quantitative\n";

inline AttributedGraph toy(bool normalize = false) {
  std::istringstream edges(kToyEdges);
  std::istringstream attrs(kToyAttrs);
  std::istringstream schema(kToySchema);
  LoadOptions options;
  options.build.normalize_quantitative = normalize;
  return load_graph(edges, attrs, schema, options);
}

inline NodeId node(const AttributedGraph& g, const std::string& label) {
  return g.find(label).value();
}

}  // namespace stoc::test
