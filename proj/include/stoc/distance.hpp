#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "stoc/graph.hpp"
#include "stoc/sketch.hpp"

namespace stoc {

enum class DistanceMode { combined, semantic_only, topological_only };
enum class TopologicalBackend { exact, sketch };

std::string_view to_string(DistanceMode mode);
std::string_view to_string(TopologicalBackend backend);

// Graphs up to this size default to the exact backend.
inline constexpr std::size_t kExactBackendLimit = 10'000;

TopologicalBackend default_backend(std::size_t node_count);

struct DistanceConfig {
  int radius = 1;  // l of the l-neighborhood; ignored in semantic_only mode
  DistanceMode mode = DistanceMode::combined;
  bool discretize_quantitative = false;
  TopologicalBackend backend = TopologicalBackend::exact;

  bool uses_topology() const { return mode != DistanceMode::semantic_only; }
  bool uses_semantics() const { return mode != DistanceMode::topological_only; }
};

// Jaccard distance of two sorted, duplicate-free ranges; J(∅, ∅) = 0.
double jaccard_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

// Euclidean part over the Q quantitative attributes scaled by sqrt(Q), plus one
// Jaccard term per categorical attribute, all divided by A.
double semantic_distance(const SemanticVector& a, const SemanticVector& b,
                         const AttributeSchema& schema);

// Same, with every quantitative value compared as a singleton category.
double discretized_semantic_distance(const SemanticVector& a, const SemanticVector& b,
                                     const AttributeSchema& schema);

double topological_distance_exact(const AttributedGraph& g, NodeId v1, NodeId v2, int radius);

inline double combined_distance(double semantic, double topological) {
  return semantic > topological ? semantic : topological;
}

// The configured node-to-node distance. Thread-safe for concurrent queries.
class NodeDistance {
 public:
  // `table` is required for the sketch backend when topology is used and
  // must outlive this object.
  NodeDistance(const AttributedGraph& g, const DistanceConfig& config,
               const SketchTable* table = nullptr);

  const AttributedGraph& graph() const { return *graph_; }
  const DistanceConfig& config() const { return config_; }

  double semantic(NodeId a, NodeId b) const;
  double topological(NodeId a, NodeId b) const;
  double operator()(NodeId a, NodeId b) const;

  // Distance from a fixed anchor node, caching the anchor's neighborhood
  // for the exact backend. Safe to query from several threads.
  class Anchored {
   public:
    Anchored(const NodeDistance& parent, NodeId anchor);
    NodeId anchor() const { return anchor_; }
    double operator()(NodeId x) const;
    // operator()(x) <= tau, skipping the topological term when the semantic
    // term already exceeds tau.
    bool within(NodeId x, double tau) const;

   private:
    double topological(NodeId x) const;

    const NodeDistance* parent_;
    NodeId anchor_;
    std::vector<NodeId> anchor_ball_;  // sorted
  };

  Anchored anchored(NodeId anchor) const { return Anchored(*this, anchor); }

 private:
  const AttributedGraph* graph_;
  DistanceConfig config_;
  const SketchTable* table_;
};

}  // namespace stoc
