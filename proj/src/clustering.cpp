#include "stoc/clustering.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace stoc {

Clustering Clustering::from_assignment(std::vector<ClusterId> assignment) {
  Clustering c;
  ClusterId max_id = 0;
  for (ClusterId id : assignment) max_id = std::max(max_id, id);
  const std::size_t count = assignment.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
  c.clusters.resize(count);
  for (ClusterId id = 0; id < count; ++id) c.clusters[id].id = id;
  for (NodeId v = 0; v < assignment.size(); ++v) c.clusters[assignment[v]].members.push_back(v);
  for (auto& cluster : c.clusters) {
    if (cluster.members.empty()) throw std::invalid_argument("cluster ids are not dense");
    cluster.seed = cluster.members.front();
  }
  c.assignment = std::move(assignment);
  return c;
}

namespace {

// Frontier candidates are evaluated together; small batches stay serial.
constexpr std::size_t kParallelBatch = 64;

}  // namespace

namespace {

// `state` must be all zeros on entry and is all zeros again on return.
// 1 = admitted, 2 = rejected, 3 = pending. Rejections are final since the
// test only depends on the seed.
std::vector<NodeId> query(const ActiveView& view, NodeId seed, double tau, const NodeDistance& dist,
                          std::vector<std::uint8_t>& state, QueryStats* stats) {
  const auto anchored = dist.anchored(seed);
  std::vector<NodeId> cluster{seed};
  std::vector<NodeId> rejected;
  state[seed] = 1;
  std::size_t enqueued = 1;
  std::size_t evaluations = 0;

  std::vector<NodeId> candidates;
  std::vector<std::uint8_t> admit;
  std::size_t level_begin = 0;
  while (level_begin < cluster.size()) {
    const std::size_t level_end = cluster.size();
    candidates.clear();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      view.for_each_neighbor(cluster[i], [&](NodeId x) {
        if (state[x] != 0) return;
        state[x] = 3;
        candidates.push_back(x);
      });
    }
    admit.assign(candidates.size(), 0);
    const auto count = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 8) if (candidates.size() >= kParallelBatch)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      admit[idx] = anchored.within(candidates[idx], tau) ? 1 : 0;
    }
    evaluations += candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (admit[i] != 0) {
        state[candidates[i]] = 1;
        cluster.push_back(candidates[i]);
        ++enqueued;
      } else {
        state[candidates[i]] = 2;
        rejected.push_back(candidates[i]);
      }
    }
    level_begin = level_end;
  }
  for (NodeId v : cluster) state[v] = 0;
  for (NodeId v : rejected) state[v] = 0;
  if (stats != nullptr) {
    stats->enqueued += enqueued;
    stats->evaluations += evaluations;
  }
  return cluster;
}

}  // namespace

std::vector<NodeId> sto_query(const ActiveView& view, NodeId seed, double tau,
                              const NodeDistance& dist, QueryStats* stats) {
  const auto& g = view.graph();
  if (seed >= g.node_count()) throw std::out_of_range("node index out of range");
  if (!view.active(seed)) throw std::invalid_argument("seed is not active");
  std::vector<std::uint8_t> state(g.node_count(), 0);
  return query(view, seed, tau, dist, state, stats);
}

Clustering stoc(const AttributedGraph& g, double tau, const NodeDistance& dist,
                const StocOptions& options) {
  const auto& cfg = dist.config();
  Clustering result;
  result.params = ClusteringParams{tau,
                                   cfg.uses_topology() ? cfg.radius : 0,
                                   cfg.mode,
                                   cfg.backend,
                                   cfg.discretize_quantitative,
                                   options.epsilon,
                                   options.rng_seed};
  const std::size_t n = g.node_count();
  constexpr ClusterId kUnassigned = static_cast<ClusterId>(-1);
  result.assignment.assign(n, kUnassigned);

  ActiveView view(g);
  Rng rng(options.rng_seed);
  QueryStats stats;
  std::vector<std::uint8_t> state(n, 0);
  if (options.first_seed && *options.first_seed >= n) {
    throw std::out_of_range("first seed out of range");
  }
  bool forced = options.first_seed.has_value();

  while (view.active_count() > 0) {
    NodeId seed;
    if (forced) {
      seed = options.first_seed.value();
      forced = false;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, view.active_count() - 1);
      seed = view.active_at(pick(rng));
    }
    Cluster cluster;
    cluster.id = static_cast<ClusterId>(result.clusters.size());
    cluster.seed = seed;
    cluster.members = query(view, seed, tau, dist, state, &stats);
    for (NodeId v : cluster.members) {
      result.assignment[v] = cluster.id;
      view.deactivate(v);
    }
    result.clusters.push_back(std::move(cluster));
  }
  result.enqueue_count = stats.enqueued;
  return result;
}

}  // namespace stoc
