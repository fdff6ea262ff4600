#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stoc/clustering.hpp"
#include "stoc/graph.hpp"

namespace stoc {

// Dense per-node vectors: the Q normalized quantitative values followed by one
// 0/1 indicator per categorical value observed in the schema's dictionaries.
class SemanticEmbedding {
 public:
  SemanticEmbedding(std::size_t node_count, std::size_t dimension)
      : node_count_(node_count), dimension_(dimension), data_(node_count * dimension, 0.0) {}

  std::size_t node_count() const { return node_count_; }
  std::size_t dimension() const { return dimension_; }
  std::span<const double> row(NodeId v) const {
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(v) * dimension_,
                                                  dimension_);
  }
  std::span<double> row(NodeId v) {
    return std::span<double>(data_).subspan(static_cast<std::size_t>(v) * dimension_, dimension_);
  }

 private:
  std::size_t node_count_;
  std::size_t dimension_;
  std::vector<double> data_;
};

SemanticEmbedding build_embedding(const AttributedGraph& g);

// Sum over clusters of squared distances to the cluster mean.
double wcss(const Clustering& clustering, const SemanticEmbedding& embedding);

// Newman modularity, per cluster: e_c/m - (d_c/2m)^2. Requires m >= 1.
double modularity(const AttributedGraph& g, const Clustering& clustering);

// (size, count) rows sorted by size.
std::vector<std::pair<std::size_t, std::size_t>> size_distribution(const Clustering& clustering);

namespace serial {

double wcss(const Clustering& clustering, const SemanticEmbedding& embedding);

}  // namespace serial

}  // namespace stoc
