#include "stoc/sketch.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "stoc/error.hpp"

namespace stoc {

namespace {

std::uint64_t fmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Merges two sorted rank runs into `out`, keeping at most k distinct values.
// Returns true when values had to be dropped.
bool merge_into(std::span<const Rank> a, std::span<const Rank> b, std::size_t k,
                std::vector<Rank>& out) {
  out.clear();
  std::size_t i = 0;
  std::size_t j = 0;
  while (out.size() < k && (i < a.size() || j < b.size())) {
    Rank next;
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      next = a[i++];
    } else if (i == a.size() || b[j] < a[i]) {
      next = b[j++];
    } else {
      next = a[i++];
      ++j;
    }
    out.push_back(next);
  }
  return i < a.size() || j < b.size();
}

}  // namespace

Rank node_rank(NodeId v, std::uint64_t hash_seed) {
  return fmix64(fmix64(hash_seed + 0x9e3779b97f4a7c15ULL) ^ static_cast<std::uint64_t>(v));
}

std::size_t choose_k_from_log(double log_n, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (!(log_n >= 0.0)) throw std::invalid_argument("node count must be positive");
  const double raw = std::ceil(log_n / (epsilon * epsilon));
  return std::max(kMinSketchSize, static_cast<std::size_t>(raw));
}

std::size_t choose_k(std::size_t node_count, double epsilon) {
  if (node_count < 1) throw std::invalid_argument("node count must be positive");
  return choose_k_from_log(std::log(static_cast<double>(node_count)), epsilon);
}

BottomKSketch make_sketch(std::span<const NodeId> nodes, std::size_t k, std::uint64_t hash_seed) {
  BottomKSketch s;
  s.k = k;
  s.hash_seed = hash_seed;
  s.ranks.reserve(nodes.size());
  for (NodeId v : nodes) s.ranks.push_back(node_rank(v, hash_seed));
  std::sort(s.ranks.begin(), s.ranks.end());
  s.ranks.erase(std::unique(s.ranks.begin(), s.ranks.end()), s.ranks.end());
  if (s.ranks.size() <= k) {
    s.cardinality = s.ranks.size();
  } else {
    s.ranks.resize(k);
  }
  return s;
}

std::vector<Rank> merge_bottom_k(std::span<const Rank> a, std::span<const Rank> b, std::size_t k) {
  std::vector<Rank> out;
  out.reserve(std::min(k, a.size() + b.size()));
  merge_into(a, b, k, out);
  return out;
}

double estimate_jaccard_distance(const SketchView& a, const SketchView& b) {
  if (a.k != b.k || a.hash_seed != b.hash_seed) {
    throw std::invalid_argument("sketches use different k or hash seed");
  }
  if (a.ranks.empty() && b.ranks.empty()) return 0.0;

  const bool exact = a.complete && b.complete;
  const std::size_t limit = exact ? a.ranks.size() + b.ranks.size() : a.k;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t taken = 0;
  std::size_t shared = 0;
  while (taken < limit && (i < a.ranks.size() || j < b.ranks.size())) {
    if (j == b.ranks.size() || (i < a.ranks.size() && a.ranks[i] < b.ranks[j])) {
      ++i;
    } else if (i == a.ranks.size() || b.ranks[j] < a.ranks[i]) {
      ++j;
    } else {
      ++i;
      ++j;
      ++shared;
    }
    ++taken;
  }
  return 1.0 - static_cast<double>(shared) / static_cast<double>(taken);
}

SketchTable::SketchTable(std::size_t node_count, int radius, std::size_t k,
                         std::uint64_t hash_seed)
    : radius_(radius),
      k_(k),
      hash_seed_(hash_seed),
      ranks_(node_count * k, 0),
      sizes_(node_count, 0),
      complete_(node_count, 0) {}

SketchTable extend_sketch_table(const AttributedGraph& g, const SketchTable& table) {
  const std::size_t n = g.node_count();
  if (table.node_count() != n) throw std::invalid_argument("sketch table does not match the graph");
  const std::size_t k = table.k();
  SketchTable next(n, table.radius() + 1, k, table.hash_seed());
#pragma omp parallel
  {
    std::vector<Rank> acc;
    std::vector<Rank> tmp;
    acc.reserve(k);
    tmp.reserve(k);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t iv = 0; iv < static_cast<std::int64_t>(n); ++iv) {
      const auto v = static_cast<NodeId>(iv);
      const SketchView own = table.sketch(v);
      acc.assign(own.ranks.begin(), own.ranks.end());
      bool complete = own.complete;
      for (NodeId u : g.neighbors(v)) {
        const SketchView other = table.sketch(u);
        const bool dropped = merge_into(acc, other.ranks, k, tmp);
        complete = complete && other.complete && !dropped;
        acc.swap(tmp);
      }
      std::copy(acc.begin(), acc.end(), next.slot(v).begin());
      next.set(v, static_cast<std::uint32_t>(acc.size()), complete);
    }
  }
  return next;
}

SketchTable build_sketch_table(const AttributedGraph& g, int radius, std::size_t k,
                               std::uint64_t hash_seed) {
  if (radius < 1) throw std::invalid_argument("sketch radius must be at least 1");
  if (k < 1) throw std::invalid_argument("sketch size must be at least 1");
  const std::size_t n = g.node_count();
  SketchTable table(n, 0, k, hash_seed);
  for (NodeId v = 0; v < n; ++v) {
    table.slot(v)[0] = node_rank(v, hash_seed);
    table.set(v, 1, true);
  }
  for (int round = 1; round <= radius; ++round) table = extend_sketch_table(g, table);
  return table;
}

double topological_distance_sketch(const SketchTable& table, NodeId v1, NodeId v2, int radius) {
  if (radius != table.radius()) {
    throw std::invalid_argument("sketch table was built for radius " +
                                std::to_string(table.radius()) + ", requested " +
                                std::to_string(radius));
  }
  if (v1 >= table.node_count() || v2 >= table.node_count()) {
    throw std::out_of_range("node index out of range");
  }
  if (v1 == v2) return 0.0;
  return estimate_jaccard_distance(table.sketch(v1), table.sketch(v2));
}

// ---------------------------------------------------------------------------
// Cache

namespace {

constexpr char kMagic[8] = {'S', 'T', 'O', 'C', 'S', 'K', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw DataError("sketch cache", 0, "truncated stream");
  }
  return value;
}

}  // namespace

void save_sketch_table(const SketchTable& table, std::uint64_t graph_digest, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, graph_digest);
  put<std::int32_t>(out, table.radius());
  put<std::uint64_t>(out, table.k());
  put<std::uint64_t>(out, table.hash_seed());
  put<std::uint64_t>(out, table.node_count());
  for (NodeId v = 0; v < table.node_count(); ++v) {
    const SketchView s = table.sketch(v);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.ranks.size()));
    put<std::uint8_t>(out, s.complete ? 1 : 0);
    out.write(reinterpret_cast<const char*>(s.ranks.data()),
              static_cast<std::streamsize>(s.ranks.size() * sizeof(Rank)));
  }
}

SketchTable load_sketch_table(std::istream& in, std::optional<std::uint64_t> expected_digest) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("sketch cache", 0, "bad magic");
  }
  if (get<std::uint32_t>(in) != kVersion) throw DataError("sketch cache", 0, "unsupported version");
  const auto digest = get<std::uint64_t>(in);
  if (expected_digest && *expected_digest != digest) {
    throw DataError("sketch cache", 0, "graph digest mismatch");
  }
  const auto radius = get<std::int32_t>(in);
  const auto k = get<std::uint64_t>(in);
  const auto seed = get<std::uint64_t>(in);
  const auto n = get<std::uint64_t>(in);
  if (k == 0 || radius < 1) throw DataError("sketch cache", 0, "invalid parameters");
  SketchTable table(n, radius, k, seed);
  for (NodeId v = 0; v < n; ++v) {
    const auto size = get<std::uint32_t>(in);
    const auto complete = get<std::uint8_t>(in);
    if (size > k) throw DataError("sketch cache", 0, "sketch larger than k");
    auto slot = table.slot(v);
    if (!in.read(reinterpret_cast<char*>(slot.data()),
                 static_cast<std::streamsize>(size * sizeof(Rank)))) {
      throw DataError("sketch cache", 0, "truncated stream");
    }
    table.set(v, size, complete != 0);
  }
  return table;
}

// ---------------------------------------------------------------------------

namespace serial {

SketchTable build_sketch_table(const AttributedGraph& g, int radius, std::size_t k,
                               std::uint64_t hash_seed) {
  if (radius < 1) throw std::invalid_argument("sketch radius must be at least 1");
  if (k < 1) throw std::invalid_argument("sketch size must be at least 1");
  const std::size_t n = g.node_count();
  std::vector<std::vector<Rank>> sketches(n);
  std::vector<bool> complete(n, true);
  for (NodeId v = 0; v < n; ++v) sketches[v] = {node_rank(v, hash_seed)};

  for (int round = 1; round <= radius; ++round) {
    std::vector<std::vector<Rank>> next(n);
    std::vector<bool> next_complete(n);
    for (NodeId v = 0; v < n; ++v) {
      std::vector<Rank> pool = sketches[v];
      bool all_complete = complete[v];
      for (NodeId u : g.neighbors(v)) {
        pool.insert(pool.end(), sketches[u].begin(), sketches[u].end());
        all_complete = all_complete && complete[u];
      }
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
      next_complete[v] = all_complete && pool.size() <= k;
      if (pool.size() > k) pool.resize(k);
      next[v] = std::move(pool);
    }
    sketches = std::move(next);
    complete = std::move(next_complete);
  }

  SketchTable out(n, radius, k, hash_seed);
  for (NodeId v = 0; v < n; ++v) {
    std::copy(sketches[v].begin(), sketches[v].end(), out.slot(v).begin());
    out.set(v, static_cast<std::uint32_t>(sketches[v].size()), complete[v]);
  }
  return out;
}

}  // namespace serial

}  // namespace stoc
