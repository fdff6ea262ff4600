#include "stoc/experiment.hpp"

#include <cmath>
#include <stdexcept>

namespace stoc {

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

RunMetrics measure(const AttributedGraph& g, const SemanticEmbedding& embedding,
                   const VariantResult& result, std::uint64_t rng_seed) {
  RunMetrics m;
  m.rng_seed = rng_seed;
  m.clusters = result.clustering.cluster_count();
  if (g.edge_count() > 0) m.modularity = modularity(g, result.clustering);
  m.wcss = wcss(result.clustering, embedding);
  m.tau = result.clustering.params.tau;
  m.radius = result.clustering.params.radius;
  m.sketch_k = result.table ? result.table->k() : 0;
  m.seconds = result.tune_seconds + result.sketch_seconds + result.cluster_seconds;
  return m;
}

RunSummary summarize(std::span<const RunMetrics> runs) {
  std::vector<double> k, q, w, tau, l, t;
  for (const auto& r : runs) {
    k.push_back(static_cast<double>(r.clusters));
    if (r.modularity) q.push_back(*r.modularity);
    w.push_back(r.wcss);
    tau.push_back(r.tau);
    l.push_back(r.radius);
    t.push_back(r.seconds);
  }
  return {summarize(k), summarize(q), summarize(w), summarize(tau), summarize(l), summarize(t)};
}

std::vector<BenchRow> run_bench(const AttributedGraph& g, const BenchOptions& options) {
  if (options.runs == 0) throw std::invalid_argument("runs must be at least 1");
  const auto embedding = build_embedding(g);

  struct Config {
    Variant variant;
    bool discretize;
  };
  std::vector<Config> configs;
  for (Variant v : options.variants) configs.push_back({v, options.base.discretize});
  if (options.discretized_stoc) configs.push_back({Variant::stoc, true});

  std::vector<BenchRow> rows;
  for (const auto& config : configs) {
    for (double alpha : options.alphas) {
      BenchRow row;
      row.variant = config.variant;
      row.discretize = config.discretize;
      row.alpha = alpha;
      for (std::size_t i = 0; i < options.runs; ++i) {
        VariantOptions run = options.base;
        run.variant = config.variant;
        run.discretize = config.discretize;
        run.alpha_s = run.alpha_t = alpha;
        run.rng_seed = options.base.rng_seed + i;
        const auto result = run_variant(g, run);
        row.runs.push_back(measure(g, embedding, result, run.rng_seed));
      }
      row.summary = summarize(row.runs);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace stoc
