#include "stoc/metrics.hpp"

#include <omp.h>

#include <map>
#include <stdexcept>

namespace stoc {

SemanticEmbedding build_embedding(const AttributedGraph& g) {
  const auto& schema = g.schema();
  const std::size_t q = schema.quantitative_count();
  std::vector<std::size_t> base(schema.categorical_count());
  std::size_t dimension = q;
  for (std::size_t i = 0; i < schema.categorical_count(); ++i) {
    base[i] = dimension;
    dimension += schema.categorical(i).values.size();
  }
  SemanticEmbedding e(g.node_count(), dimension);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& t = g.attributes(v);
    auto row = e.row(v);
    for (std::size_t i = 0; i < q; ++i) row[i] = t.quantitative[i];
    for (std::size_t i = 0; i < t.categorical.size(); ++i) {
      for (auto value : t.categorical[i]) row[base[i] + value] = 1.0;
    }
  }
  return e;
}

namespace {

double cluster_wcss(const Cluster& cluster, const SemanticEmbedding& embedding,
                    std::vector<double>& mean) {
  if (cluster.members.empty()) throw std::invalid_argument("empty cluster");
  const std::size_t d = embedding.dimension();
  mean.assign(d, 0.0);
  for (NodeId v : cluster.members) {
    const auto row = embedding.row(v);
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  const double inv = 1.0 / static_cast<double>(cluster.members.size());
  for (auto& x : mean) x *= inv;
  double sum = 0.0;
  for (NodeId v : cluster.members) {
    const auto row = embedding.row(v);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - mean[j];
      sum += diff * diff;
    }
  }
  return sum;
}

void check_coverage(const Clustering& clustering, const SemanticEmbedding& embedding) {
  if (clustering.assignment.size() != embedding.node_count()) {
    throw std::invalid_argument("embedding does not cover the clustered nodes");
  }
}

}  // namespace

double wcss(const Clustering& clustering, const SemanticEmbedding& embedding) {
  check_coverage(clustering, embedding);
  const auto count = static_cast<std::int64_t>(clustering.clusters.size());
  double total = 0.0;
  bool empty = false;
#pragma omp parallel reduction(+ : total) reduction(|| : empty)
  {
    std::vector<double> mean;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto& cluster = clustering.clusters[static_cast<std::size_t>(i)];
      if (cluster.members.empty()) {
        empty = true;
        continue;
      }
      total += cluster_wcss(cluster, embedding, mean);
    }
  }
  if (empty) throw std::invalid_argument("empty cluster");
  return total;
}

double modularity(const AttributedGraph& g, const Clustering& clustering) {
  if (g.edge_count() == 0) throw std::invalid_argument("modularity is undefined for m = 0");
  if (clustering.assignment.size() != g.node_count()) {
    throw std::invalid_argument("clustering does not cover the graph");
  }
  const std::size_t k = clustering.clusters.size();
  std::vector<double> internal(k, 0.0);
  std::vector<double> degree(k, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const ClusterId c = clustering.assignment[v];
    if (c >= k) throw std::invalid_argument("cluster id out of range");
    const auto adj = g.neighbors(v);
    degree[c] += static_cast<double>(adj.size());
    for (NodeId u : adj) {
      if (clustering.assignment[u] == c) internal[c] += 1.0;
    }
  }
  // Each internal edge was seen from both endpoints.
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double share = degree[c] / (2.0 * m);
    q += internal[c] / (2.0 * m) - share * share;
  }
  return q;
}

std::vector<std::pair<std::size_t, std::size_t>> size_distribution(const Clustering& clustering) {
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& c : clustering.clusters) ++histogram[c.members.size()];
  return {histogram.begin(), histogram.end()};
}

namespace serial {

double wcss(const Clustering& clustering, const SemanticEmbedding& embedding) {
  check_coverage(clustering, embedding);
  std::vector<double> mean;
  double total = 0.0;
  for (const auto& cluster : clustering.clusters) total += cluster_wcss(cluster, embedding, mean);
  return total;
}

}  // namespace serial

}  // namespace stoc
