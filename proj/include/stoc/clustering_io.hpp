#pragma once

#include <iosfwd>
#include <string>

#include "stoc/clustering.hpp"
#include "stoc/graph.hpp"

namespace stoc {

// One row per node: "<external-id>\t<cluster-id>", nodes in index order.
void write_clustering(const AttributedGraph& g, const Clustering& clustering, std::ostream& out);

// Reads the format above. Every node must appear exactly once and cluster ids
// must be dense; seeds are not recoverable (see Clustering::from_assignment).
Clustering read_clustering(const AttributedGraph& g, std::istream& in,
                           const std::string& source = "clustering");

}  // namespace stoc
