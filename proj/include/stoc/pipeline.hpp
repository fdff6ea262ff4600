#pragma once

#include <cstdint>
#include <optional>

#include "stoc/clustering.hpp"
#include "stoc/graph.hpp"
#include "stoc/sketch.hpp"
#include "stoc/tuning.hpp"

namespace stoc {

struct VariantOptions {
  Variant variant = Variant::stoc;
  double alpha_s = 0.4;
  double alpha_t = 0.4;
  double epsilon = 0.9;
  int l_max = 10;
  bool discretize = false;
  std::optional<TopologicalBackend> backend;  // unset: by graph size
  std::uint64_t rng_seed = 0;
  // Explicit operational parameters bypass the matching tuning step.
  std::optional<double> tau;
  std::optional<int> radius;
  std::optional<NodeId> first_seed;
  // Prebuilt table, used when its radius, k and hash seed match the run.
  const SketchTable* table = nullptr;
};

struct VariantResult {
  Clustering clustering;
  TuningReport tuning;
  std::optional<SketchTable> table;  // sketch built or reused for clustering
  TopologicalBackend backend = TopologicalBackend::exact;
  std::uint64_t hash_seed = 0;
  double tune_seconds = 0.0;
  double sketch_seconds = 0.0;
  double cluster_seconds = 0.0;
};

// Hash seed used for sketches of a run with the given rng seed.
std::uint64_t derive_hash_seed(std::uint64_t rng_seed);

// Tuning per the variant's rules, then SToC with the variant's distance.
VariantResult run_variant(const AttributedGraph& g, const VariantOptions& options);

}  // namespace stoc
