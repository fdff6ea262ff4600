#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stoc/metrics.hpp"
#include "stoc/pipeline.hpp"

namespace stoc {

struct Summary {
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation, 0 for a single value
};

Summary summarize(std::span<const double> values);

struct RunMetrics {
  std::uint64_t rng_seed = 0;
  std::size_t clusters = 0;
  std::optional<double> modularity;  // unset for edgeless graphs
  double wcss = 0.0;
  double tau = 0.0;
  int radius = 0;
  std::size_t sketch_k = 0;  // 0 for the exact backend
  double seconds = 0.0;      // tuning + sketches + clustering
};

RunMetrics measure(const AttributedGraph& g, const SemanticEmbedding& embedding,
                   const VariantResult& result, std::uint64_t rng_seed);

struct RunSummary {
  Summary clusters;
  Summary modularity;
  Summary wcss;
  Summary tau;
  Summary radius;
  Summary seconds;
};

RunSummary summarize(std::span<const RunMetrics> runs);

struct BenchOptions {
  std::vector<Variant> variants{Variant::stoc, Variant::sc, Variant::toc};
  std::vector<double> alphas{0.1, 0.2, 0.4, 0.6, 0.8, 0.9};
  // Adds a discretized SToC row per alpha.
  bool discretized_stoc = false;
  std::size_t runs = 10;
  // Everything but variant, alphas and discretize; run i uses rng_seed + i.
  VariantOptions base;
};

struct BenchRow {
  Variant variant = Variant::stoc;
  bool discretize = false;
  double alpha = 0.0;
  std::vector<RunMetrics> runs;
  RunSummary summary;
};

std::vector<BenchRow> run_bench(const AttributedGraph& g, const BenchOptions& options);

}  // namespace stoc
