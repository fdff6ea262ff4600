#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "stoc/distance.hpp"
#include "stoc/graph.hpp"
#include "stoc/tuning.hpp"

namespace stoc {

using ClusterId = std::uint32_t;

struct Cluster {
  ClusterId id = 0;
  NodeId seed = 0;
  std::vector<NodeId> members;  // admission order, seed first
};

struct ClusteringParams {
  double tau = 0.0;
  int radius = 1;
  DistanceMode mode = DistanceMode::combined;
  TopologicalBackend backend = TopologicalBackend::exact;
  bool discretize = false;
  double epsilon = 0.0;
  std::uint64_t rng_seed = 0;
};

// Partition of the nodes into clusters listed in extraction order.
struct Clustering {
  std::vector<ClusterId> assignment;  // node -> cluster id
  std::vector<Cluster> clusters;
  ClusteringParams params;
  std::uint64_t enqueue_count = 0;  // BFS enqueues across the whole run

  std::size_t cluster_count() const { return clusters.size(); }

  // Rebuilds clusters from a node -> id map (ids must be dense). Seeds are
  // unknown and set to each cluster's smallest member.
  static Clustering from_assignment(std::vector<ClusterId> assignment);
};

struct QueryStats {
  std::size_t enqueued = 0;
  std::size_t evaluations = 0;
};

// Connected tau-close cluster around `seed` in the active view: a BFS over
// active nodes that admits x when d(seed, x) <= tau. Distances are always
// taken to the seed.
std::vector<NodeId> sto_query(const ActiveView& view, NodeId seed, double tau,
                              const NodeDistance& dist, QueryStats* stats = nullptr);

struct StocOptions {
  std::uint64_t rng_seed = 0;
  // Overrides the first random seed choice.
  std::optional<NodeId> first_seed;
  double epsilon = 0.0;  // recorded in the params only
};

// Repeatedly extracts clusters from uniformly random active seeds until every
// node is assigned. The topological distance always refers to the full graph.
Clustering stoc(const AttributedGraph& g, double tau, const NodeDistance& dist,
                const StocOptions& options = {});

}  // namespace stoc
