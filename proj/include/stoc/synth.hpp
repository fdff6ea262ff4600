#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stoc/clustering.hpp"
#include "stoc/graph.hpp"

namespace stoc {

// Stochastic block model with community-aligned attributes.
struct PlantedSpec {
  std::vector<std::size_t> sizes;
  double p_in = 0.1;
  double p_out = 0.01;
  // centers[c][j]: center of quantitative attribute j in community c.
  std::vector<std::vector<double>> centers;
  double spread = 0.1;
  // One categorical label per community; empty disables the attribute.
  std::vector<std::string> labels;
  double noise = 0.0;
  std::uint64_t seed = 0;

  // `communities` blocks of `size` nodes, one quantitative attribute with
  // evenly spaced centers in [0, 1] and a categorical label per community.
  static PlantedSpec uniform(std::size_t communities, std::size_t size, double p_in, double p_out,
                             double noise, std::uint64_t seed);

  std::size_t node_count() const;
  // Throws std::invalid_argument when the spec is infeasible.
  void validate() const;
};

struct SyntheticGraph {
  GraphParts parts;
  AttributedGraph graph;
  std::vector<ClusterId> truth;  // node -> community
};

SyntheticGraph generate(const PlantedSpec& spec);

// Writes <prefix>.edges, <prefix>.attrs.tsv, <prefix>.schema and <prefix>.truth.
void write_synthetic(const SyntheticGraph& synthetic, const std::string& prefix);

}  // namespace stoc
