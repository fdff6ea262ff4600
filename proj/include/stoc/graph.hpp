#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace stoc {

using NodeId = std::uint32_t;

enum class AttributeKind { quantitative, categorical, categorical_set };

std::string_view to_string(AttributeKind kind);

struct AttributeDescriptor {
  std::string name;
  AttributeKind kind = AttributeKind::quantitative;
  // Separator between values inside one cell, categorical_set only.
  char set_delimiter = '\0';
  // Observed raw range of a quantitative column (before normalization).
  double min = 0.0;
  double max = 0.0;
  // Categorical dictionary: value id -> label.
  std::vector<std::string> values;
};

// Canonical attribute ordering: quantitative descriptors first, categorical
// ones after, each group in input order.
class AttributeSchema {
 public:
  AttributeSchema() = default;
  explicit AttributeSchema(std::vector<AttributeDescriptor> descriptors);

  std::span<const AttributeDescriptor> attributes() const { return descriptors_; }
  const AttributeDescriptor& operator[](std::size_t i) const { return descriptors_[i]; }
  std::size_t size() const { return descriptors_.size(); }
  std::size_t quantitative_count() const { return quantitative_; }
  std::size_t categorical_count() const { return descriptors_.size() - quantitative_; }
  // Descriptor of the i-th categorical attribute (i in 0..A-Q).
  const AttributeDescriptor& categorical(std::size_t i) const {
    return descriptors_[quantitative_ + i];
  }

 private:
  std::vector<AttributeDescriptor> descriptors_;
  std::size_t quantitative_ = 0;
};

// A node's attribute tuple. Quantitative entries are min-max normalized;
// categorical entries are sorted, deduplicated value ids into the schema's
// per-attribute dictionary (a single-valued categorical is a singleton set).
struct SemanticVector {
  std::vector<double> quantitative;
  std::vector<std::vector<std::uint32_t>> categorical;

  friend bool operator==(const SemanticVector&, const SemanticVector&) = default;
};

// Raw, typed graph contents before normalization and adjacency building.
// Parsing produces it; the synthetic generator produces it; writers
// serialize it back to the text formats.
struct ColumnData {
  std::string name;
  AttributeKind kind = AttributeKind::quantitative;
  char set_delimiter = '\0';
  std::vector<double> numbers;                    // quantitative: one per node
  std::vector<std::vector<std::string>> values;   // categorical: one set per node
};

struct GraphParts {
  std::vector<std::string> node_ids;
  std::vector<ColumnData> columns;  // schema-file order
  std::vector<std::pair<NodeId, NodeId>> edges;
  bool directed = false;
};

struct BuildOptions {
  // Disabled only for fixtures whose raw values are already on a [0,1] scale.
  bool normalize_quantitative = true;
};

class AttributedGraph {
 public:
  AttributedGraph() = default;

  static AttributedGraph build(const GraphParts& parts, const BuildOptions& options = {});

  std::size_t node_count() const { return labels_.size(); }
  // Undirected: number of distinct edges. Directed: number of arcs.
  std::size_t edge_count() const { return edge_count_; }
  bool directed() const { return directed_; }

  std::span<const NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }

  const SemanticVector& attributes(NodeId v) const;
  const AttributeSchema& schema() const { return schema_; }

  const std::string& label(NodeId v) const { return labels_.at(v); }
  std::optional<NodeId> find(std::string_view label) const;

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const NodeId> targets() const { return targets_; }

  // Order-sensitive digest of topology (used to key sketch caches).
  std::uint64_t topology_digest() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::size_t edge_count_ = 0;
  bool directed_ = false;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<SemanticVector> attributes_;
  AttributeSchema schema_;
};

// Membership mask over a graph's nodes. Nodes can only be removed.
class ActiveView {
 public:
  explicit ActiveView(const AttributedGraph& graph);

  const AttributedGraph& graph() const { return *graph_; }
  bool active(NodeId v) const { return position_[v] != kInactive; }
  std::size_t active_count() const { return active_.size(); }
  // i-th active node in an unspecified but deterministic order.
  NodeId active_at(std::size_t i) const { return active_[i]; }
  void deactivate(NodeId v);

  template <class Fn>
  void for_each_neighbor(NodeId v, Fn&& fn) const {
    for (NodeId u : graph_->neighbors(v)) {
      if (active(u)) fn(u);
    }
  }

 private:
  static constexpr std::size_t kInactive = static_cast<std::size_t>(-1);

  const AttributedGraph* graph_;
  std::vector<NodeId> active_;
  std::vector<std::size_t> position_;
};

struct LoadOptions {
  bool directed = false;
  BuildOptions build;
  // Names used in error messages.
  std::string edge_source = "edges";
  std::string attr_source = "attributes";
  std::string schema_source = "schema";
};

GraphParts parse_graph(std::istream& edges, std::istream& attrs, std::istream& schema,
                       const LoadOptions& options = {});
AttributedGraph load_graph(std::istream& edges, std::istream& attrs, std::istream& schema,
                           const LoadOptions& options = {});
AttributedGraph load_graph_files(const std::string& edge_path, const std::string& attr_path,
                                 const std::string& schema_path, const LoadOptions& options = {});

// Writes the three text formats; `attrs` is tab-separated.
void write_graph(const GraphParts& parts, std::ostream& edges, std::ostream& attrs,
                 std::ostream& schema);

// Neighbors of v, restricted to the view when one is given. Never includes v.
std::vector<NodeId> neighbors(const AttributedGraph& g, NodeId v,
                              const ActiveView* view = nullptr);

// All nodes within `radius` hops of v, v included, sorted ascending.
std::vector<NodeId> exact_l_neighborhood(const AttributedGraph& g, NodeId v, int radius);

// Reusable BFS buffers for repeated ball computations over one graph.
class BallScratch {
 public:
  explicit BallScratch(std::size_t node_count = 0);

  // Visits every node of the radius-ball around v (v first). Returns the
  // ball size. Visit order is BFS order.
  template <class Fn>
  std::size_t visit(const AttributedGraph& g, NodeId v, int radius, Fn&& fn);

  std::size_t node_count() const { return stamp_.size(); }

 private:
  void next_epoch();

  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> queue_;
};

template <class Fn>
std::size_t BallScratch::visit(const AttributedGraph& g, NodeId v, int radius, Fn&& fn) {
  if (stamp_.size() != g.node_count()) {
    stamp_.assign(g.node_count(), 0);
    epoch_ = 0;
  }
  next_epoch();
  queue_.clear();
  queue_.push_back(v);
  stamp_[v] = epoch_;
  fn(v);
  std::size_t level_begin = 0;
  for (int depth = 0; depth < radius; ++depth) {
    const std::size_t level_end = queue_.size();
    if (level_begin == level_end) break;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (NodeId u : g.neighbors(queue_[i])) {
        if (stamp_[u] == epoch_) continue;
        stamp_[u] = epoch_;
        queue_.push_back(u);
        fn(u);
      }
    }
    level_begin = level_end;
  }
  return queue_.size();
}

}  // namespace stoc
