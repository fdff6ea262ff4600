#include "stoc/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "stoc/error.hpp"

namespace stoc {

PlantedSpec PlantedSpec::uniform(std::size_t communities, std::size_t size, double p_in,
                                 double p_out, double noise, std::uint64_t seed) {
  PlantedSpec spec;
  spec.sizes.assign(communities, size);
  spec.p_in = p_in;
  spec.p_out = p_out;
  spec.noise = noise;
  spec.seed = seed;
  const double step = communities > 0 ? 1.0 / static_cast<double>(communities) : 1.0;
  spec.spread = 0.4 * step;
  for (std::size_t c = 0; c < communities; ++c) {
    spec.centers.push_back({(static_cast<double>(c) + 0.5) * step});
    spec.labels.push_back("topic" + std::to_string(c));
  }
  return spec;
}

std::size_t PlantedSpec::node_count() const {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  return n;
}

void PlantedSpec::validate() const {
  if (sizes.empty()) throw std::invalid_argument("spec has no communities");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw std::invalid_argument("need 0 <= p_out < p_in <= 1");
  }
  if (!centers.empty() && centers.size() != sizes.size()) {
    throw std::invalid_argument("one center row per community expected");
  }
  for (const auto& row : centers) {
    if (row.size() != centers.front().size()) {
      throw std::invalid_argument("center rows differ in dimension");
    }
  }
  if (!labels.empty() && labels.size() != sizes.size()) {
    throw std::invalid_argument("one label per community expected");
  }
  if (!(noise >= 0.0 && noise <= 1.0)) throw std::invalid_argument("noise must be in [0, 1]");
  if (!(spread >= 0.0)) throw std::invalid_argument("spread must be non-negative");
}

namespace {

// Geometric gap to the next success of a Bernoulli(p) sequence.
std::uint64_t skip(double p, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = unit(rng);
  return static_cast<std::uint64_t>(std::floor(std::log1p(-r) / std::log1p(-p)));
}

void block_within(NodeId base, std::size_t size, double p, Rng& rng,
                  std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (p <= 0.0 || size < 2) return;
  if (p >= 1.0) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) {
        edges.emplace_back(base + static_cast<NodeId>(i), base + static_cast<NodeId>(j));
      }
    }
    return;
  }
  // Batagelj-Brandes enumeration of the lower triangle.
  std::uint64_t v = 1;
  std::int64_t w = -1;
  while (v < size) {
    w += 1 + static_cast<std::int64_t>(skip(p, rng));
    while (w >= static_cast<std::int64_t>(v) && v < size) {
      w -= static_cast<std::int64_t>(v);
      ++v;
    }
    if (v < size) {
      edges.emplace_back(base + static_cast<NodeId>(w), base + static_cast<NodeId>(v));
    }
  }
}

void block_between(NodeId base_a, std::size_t size_a, NodeId base_b, std::size_t size_b, double p,
                   Rng& rng, std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (p <= 0.0) return;
  const std::uint64_t total = static_cast<std::uint64_t>(size_a) * size_b;
  std::uint64_t idx = p >= 1.0 ? 0 : skip(p, rng);
  while (idx < total) {
    edges.emplace_back(base_a + static_cast<NodeId>(idx / size_b),
                       base_b + static_cast<NodeId>(idx % size_b));
    idx += 1 + (p >= 1.0 ? 0 : skip(p, rng));
  }
}

}  // namespace

SyntheticGraph generate(const PlantedSpec& spec) {
  spec.validate();
  SyntheticGraph out;
  Rng rng(spec.seed);
  const std::size_t n = spec.node_count();
  const std::size_t communities = spec.sizes.size();

  std::vector<NodeId> base(communities, 0);
  for (std::size_t c = 1; c < communities; ++c) {
    base[c] = base[c - 1] + static_cast<NodeId>(spec.sizes[c - 1]);
  }
  out.truth.resize(n);
  auto& parts = out.parts;
  parts.node_ids.resize(n);
  for (std::size_t c = 0; c < communities; ++c) {
    for (std::size_t i = 0; i < spec.sizes[c]; ++i) {
      const NodeId v = base[c] + static_cast<NodeId>(i);
      out.truth[v] = static_cast<ClusterId>(c);
      parts.node_ids[v] = "n" + std::to_string(v);
    }
  }

  for (std::size_t a = 0; a < communities; ++a) {
    block_within(base[a], spec.sizes[a], spec.p_in, rng, parts.edges);
    for (std::size_t b = a + 1; b < communities; ++b) {
      block_between(base[a], spec.sizes[a], base[b], spec.sizes[b], spec.p_out, rng, parts.edges);
    }
  }

  const std::size_t dims = spec.centers.empty() ? 0 : spec.centers.front().size();
  for (std::size_t j = 0; j < dims; ++j) {
    ColumnData column;
    column.name = dims == 1 ? "score" : "score" + std::to_string(j);
    column.kind = AttributeKind::quantitative;
    column.numbers.resize(n);
    parts.columns.push_back(std::move(column));
  }
  if (!spec.labels.empty()) {
    ColumnData column;
    column.name = "topic";
    column.kind = AttributeKind::categorical;
    column.values.resize(n);
    parts.columns.push_back(std::move(column));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t c = out.truth[v];
    for (std::size_t j = 0; j < dims; ++j) {
      const double center = spec.centers[c][j];
      parts.columns[j].numbers[v] = center - spec.spread + 2.0 * spec.spread * unit(rng);
    }
    if (!spec.labels.empty()) {
      std::size_t label = c;
      if (communities > 1 && unit(rng) < spec.noise) {
        std::uniform_int_distribution<std::size_t> other(0, communities - 2);
        label = other(rng);
        if (label >= c) ++label;
      }
      parts.columns[dims].values[v] = {spec.labels[label]};
    }
  }

  out.graph = AttributedGraph::build(parts);
  return out;
}

void write_synthetic(const SyntheticGraph& synthetic, const std::string& prefix) {
  std::ofstream edges(prefix + ".edges");
  std::ofstream attrs(prefix + ".attrs.tsv");
  std::ofstream schema(prefix + ".schema");
  std::ofstream truth(prefix + ".truth");
  if (!edges || !attrs || !schema || !truth) {
    throw DataError(prefix, 0, "cannot write synthetic graph files");
  }
  write_graph(synthetic.parts, edges, attrs, schema);
  for (std::size_t v = 0; v < synthetic.truth.size(); ++v) {
    truth << synthetic.parts.node_ids[v] << '\t' << synthetic.truth[v] << '\n';
  }
}

}  // namespace stoc
