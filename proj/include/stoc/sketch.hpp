#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "stoc/graph.hpp"

namespace stoc {

using Rank = std::uint64_t;

// Position of node v in the seeded random permutation. The mapping is a
// bijection on 64-bit integers, so distinct nodes never share a rank.
Rank node_rank(NodeId v, std::uint64_t hash_seed);

// k = max(8, ceil(ln(n) / epsilon^2)).
std::size_t choose_k(std::size_t node_count, double epsilon);
// Same, from ln(n) directly.
std::size_t choose_k_from_log(double log_n, double epsilon);

inline constexpr std::size_t kMinSketchSize = 8;

// Read-only view of one bottom-k sketch. `complete` means the ranks are the
// whole represented set (its cardinality is at most k).
struct SketchView {
  std::span<const Rank> ranks;
  bool complete = false;
  std::size_t k = 0;
  std::uint64_t hash_seed = 0;
};

struct BottomKSketch {
  std::vector<Rank> ranks;  // strictly increasing, at most k
  std::size_t k = 0;
  std::uint64_t hash_seed = 0;
  // |set| when the set fits in the sketch.
  std::optional<std::size_t> cardinality;

  SketchView view() const { return {ranks, cardinality.has_value(), k, hash_seed}; }
};

// Bottom-k sketch of an explicit node set.
BottomKSketch make_sketch(std::span<const NodeId> nodes, std::size_t k, std::uint64_t hash_seed);

// bottom-k(a ∪ b) from two sorted rank arrays.
std::vector<Rank> merge_bottom_k(std::span<const Rank> a, std::span<const Rank> b, std::size_t k);

// 1 - (shared ranks among the k smallest of the union) / (size of that prefix).
// Exact when both sketches are complete.
double estimate_jaccard_distance(const SketchView& a, const SketchView& b);

// Bottom-k sketches of every node's radius-l neighborhood.
class SketchTable {
 public:
  SketchTable() = default;
  SketchTable(std::size_t node_count, int radius, std::size_t k, std::uint64_t hash_seed);

  std::size_t node_count() const { return sizes_.size(); }
  int radius() const { return radius_; }
  std::size_t k() const { return k_; }
  std::uint64_t hash_seed() const { return hash_seed_; }

  SketchView sketch(NodeId v) const {
    return {std::span<const Rank>(ranks_).subspan(static_cast<std::size_t>(v) * k_, sizes_[v]),
            complete_[v] != 0, k_, hash_seed_};
  }

  // Mutable storage, used by the builders and the cache reader.
  std::span<Rank> slot(NodeId v) {
    return std::span<Rank>(ranks_).subspan(static_cast<std::size_t>(v) * k_, k_);
  }
  void set(NodeId v, std::uint32_t size, bool complete) {
    sizes_[v] = size;
    complete_[v] = complete ? 1 : 0;
  }

  friend bool operator==(const SketchTable&, const SketchTable&) = default;

 private:
  int radius_ = 0;
  std::size_t k_ = 0;
  std::uint64_t hash_seed_ = 0;
  std::vector<Rank> ranks_;
  std::vector<std::uint32_t> sizes_;
  std::vector<std::uint8_t> complete_;
};

// Round-synchronous propagation: after round i each sketch summarizes the
// radius-i ball. Per-node merges within a round run in parallel.
SketchTable build_sketch_table(const AttributedGraph& g, int radius, std::size_t k,
                               std::uint64_t hash_seed);

// One more propagation round: the table for radius + 1.
SketchTable extend_sketch_table(const AttributedGraph& g, const SketchTable& table);

double topological_distance_sketch(const SketchTable& table, NodeId v1, NodeId v2, int radius);

// Binary cache. The header records the graph digest, radius, k and hash seed.
void save_sketch_table(const SketchTable& table, std::uint64_t graph_digest, std::ostream& out);
// Throws DataError on a malformed stream or when `expected_digest` is given
// and does not match.
SketchTable load_sketch_table(std::istream& in,
                              std::optional<std::uint64_t> expected_digest = std::nullopt);

namespace serial {

// Single-threaded reference: gathers, sorts and truncates instead of
// streaming pairwise merges. Produces a table identical to the parallel build.
SketchTable build_sketch_table(const AttributedGraph& g, int radius, std::size_t k,
                               std::uint64_t hash_seed);

}  // namespace serial

}  // namespace stoc
