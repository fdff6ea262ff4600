#include "stoc/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoc {

std::string_view to_string(DistanceMode mode) {
  switch (mode) {
    case DistanceMode::combined:
      return "combined";
    case DistanceMode::semantic_only:
      return "semantic-only";
    case DistanceMode::topological_only:
      return "topological-only";
  }
  return "unknown";
}

std::string_view to_string(TopologicalBackend backend) {
  return backend == TopologicalBackend::exact ? "exact" : "sketch";
}

TopologicalBackend default_backend(std::size_t node_count) {
  return node_count <= kExactBackendLimit ? TopologicalBackend::exact : TopologicalBackend::sketch;
}

double jaccard_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t shared = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  const std::size_t united = a.size() + b.size() - shared;
  return 1.0 - static_cast<double>(shared) / static_cast<double>(united);
}

namespace {

void check_conformance(const SemanticVector& a, const SemanticVector& b,
                       const AttributeSchema& schema) {
  if (a.quantitative.size() != schema.quantitative_count() ||
      b.quantitative.size() != schema.quantitative_count() ||
      a.categorical.size() != schema.categorical_count() ||
      b.categorical.size() != schema.categorical_count()) {
    throw std::invalid_argument("semantic vector does not conform to schema");
  }
}

double categorical_sum(const SemanticVector& a, const SemanticVector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.categorical.size(); ++i) {
    sum += jaccard_distance(a.categorical[i], b.categorical[i]);
  }
  return sum;
}

}  // namespace

double semantic_distance(const SemanticVector& a, const SemanticVector& b,
                         const AttributeSchema& schema) {
  check_conformance(a, b, schema);
  const std::size_t total = schema.size();
  if (total == 0) return 0.0;
  double squares = 0.0;
  for (std::size_t i = 0; i < a.quantitative.size(); ++i) {
    const double d = a.quantitative[i] - b.quantitative[i];
    squares += d * d;
  }
  const double quantitative =
      std::sqrt(squares) * std::sqrt(static_cast<double>(schema.quantitative_count()));
  return (quantitative + categorical_sum(a, b)) / static_cast<double>(total);
}

double discretized_semantic_distance(const SemanticVector& a, const SemanticVector& b,
                                     const AttributeSchema& schema) {
  check_conformance(a, b, schema);
  const std::size_t total = schema.size();
  if (total == 0) return 0.0;
  double mismatches = 0.0;
  for (std::size_t i = 0; i < a.quantitative.size(); ++i) {
    if (a.quantitative[i] != b.quantitative[i]) mismatches += 1.0;
  }
  return (mismatches + categorical_sum(a, b)) / static_cast<double>(total);
}

namespace {

BallScratch& thread_scratch() {
  thread_local BallScratch scratch;
  return scratch;
}

}  // namespace

double topological_distance_exact(const AttributedGraph& g, NodeId v1, NodeId v2, int radius) {
  if (radius < 1) throw std::invalid_argument("topological radius must be at least 1");
  if (v1 >= g.node_count() || v2 >= g.node_count()) throw std::out_of_range("node index out of range");
  if (v1 == v2) return 0.0;
  const auto a = exact_l_neighborhood(g, v1, radius);
  const auto b = exact_l_neighborhood(g, v2, radius);
  return jaccard_distance(a, b);
}

NodeDistance::NodeDistance(const AttributedGraph& g, const DistanceConfig& config,
                           const SketchTable* table)
    : graph_(&g), config_(config), table_(table) {
  if (config_.uses_topology()) {
    if (config_.radius < 1) throw std::invalid_argument("topological radius must be at least 1");
    if (config_.backend == TopologicalBackend::sketch) {
      if (table_ == nullptr) throw std::invalid_argument("sketch backend needs a sketch table");
      if (table_->radius() != config_.radius) {
        throw std::invalid_argument("sketch table radius does not match distance radius");
      }
      if (table_->node_count() != g.node_count()) {
        throw std::invalid_argument("sketch table does not match graph");
      }
    }
  }
}

double NodeDistance::semantic(NodeId a, NodeId b) const {
  const auto& g = *graph_;
  return config_.discretize_quantitative
             ? discretized_semantic_distance(g.attributes(a), g.attributes(b), g.schema())
             : semantic_distance(g.attributes(a), g.attributes(b), g.schema());
}

double NodeDistance::topological(NodeId a, NodeId b) const {
  if (config_.backend == TopologicalBackend::sketch) {
    return topological_distance_sketch(*table_, a, b, config_.radius);
  }
  return topological_distance_exact(*graph_, a, b, config_.radius);
}

double NodeDistance::operator()(NodeId a, NodeId b) const {
  switch (config_.mode) {
    case DistanceMode::semantic_only:
      return semantic(a, b);
    case DistanceMode::topological_only:
      return topological(a, b);
    case DistanceMode::combined:
      break;
  }
  return combined_distance(semantic(a, b), topological(a, b));
}

NodeDistance::Anchored::Anchored(const NodeDistance& parent, NodeId anchor)
    : parent_(&parent), anchor_(anchor) {
  const auto& g = parent.graph();
  if (anchor >= g.node_count()) throw std::out_of_range("node index out of range");
  if (parent.config_.uses_topology() && parent.config_.backend == TopologicalBackend::exact) {
    thread_scratch().visit(g, anchor, parent.config_.radius,
                           [this](NodeId u) { anchor_ball_.push_back(u); });
    std::sort(anchor_ball_.begin(), anchor_ball_.end());
  }
}

double NodeDistance::Anchored::topological(NodeId x) const {
  const auto& cfg = parent_->config_;
  if (cfg.backend == TopologicalBackend::sketch) {
    return topological_distance_sketch(*parent_->table_, anchor_, x, cfg.radius);
  }
  if (x == anchor_) return 0.0;
  std::size_t shared = 0;
  const std::size_t size = thread_scratch().visit(parent_->graph(), x, cfg.radius, [&](NodeId u) {
    shared += std::binary_search(anchor_ball_.begin(), anchor_ball_.end(), u) ? 1 : 0;
  });
  const std::size_t united = anchor_ball_.size() + size - shared;
  return 1.0 - static_cast<double>(shared) / static_cast<double>(united);
}

double NodeDistance::Anchored::operator()(NodeId x) const {
  switch (parent_->config_.mode) {
    case DistanceMode::semantic_only:
      return parent_->semantic(anchor_, x);
    case DistanceMode::topological_only:
      return topological(x);
    case DistanceMode::combined:
      break;
  }
  const double ds = parent_->semantic(anchor_, x);
  return combined_distance(ds, topological(x));
}

bool NodeDistance::Anchored::within(NodeId x, double tau) const {
  if (parent_->config_.mode == DistanceMode::combined && parent_->semantic(anchor_, x) > tau) {
    return false;
  }
  return (*this)(x) <= tau;
}

}  // namespace stoc
