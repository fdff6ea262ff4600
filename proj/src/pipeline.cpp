#include "stoc/pipeline.hpp"

#include <chrono>
#include <stdexcept>

namespace stoc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::uint64_t derive_hash_seed(std::uint64_t rng_seed) {
  std::uint64_t z = rng_seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

VariantResult run_variant(const AttributedGraph& g, const VariantOptions& options) {
  if (options.tau && !(*options.tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
  if (options.radius && *options.radius < 1) throw std::invalid_argument("l must be at least 1");

  VariantResult result;
  result.backend = options.backend.value_or(default_backend(g.node_count()));
  result.hash_seed = derive_hash_seed(options.rng_seed);

  TuningOptions tuning;
  tuning.variant = options.variant;
  tuning.alpha_s = options.alpha_s;
  tuning.alpha_t = options.alpha_t;
  tuning.epsilon = options.epsilon;
  tuning.l_max = options.l_max;
  tuning.discretize = options.discretize;
  tuning.sampling = {result.backend, result.hash_seed};

  const bool topology = options.variant != Variant::sc;
  Rng rng(options.rng_seed);
  auto start = std::chrono::steady_clock::now();
  if (!options.tau && (!options.radius || !topology)) {
    result.tuning = tune(g, tuning, rng);
  } else if (!options.tau) {
    result.tuning = tune_tau(g, tuning, rng);
  } else {
    result.tuning.tau_hat = *options.tau;
    if (topology && !options.radius && g.node_count() >= 2) {
      auto search = compute_l(g, *options.tau, options.alpha_t, options.epsilon, options.l_max,
                              rng, tuning.sampling);
      result.tuning.chosen_l = search.chosen_l;
      result.tuning.alpha_trace = std::move(search.trace);
      result.tuning.topological_cdfs = std::move(search.cdfs);
      result.tuning.table = std::move(search.table);
    }
  }
  if (topology) {
    if (options.radius) result.tuning.chosen_l = *options.radius;
    if (result.tuning.chosen_l < 1) result.tuning.chosen_l = 1;
  }
  result.tune_seconds = seconds_since(start);

  DistanceConfig config;
  config.mode = distance_mode(options.variant);
  config.radius = topology ? result.tuning.chosen_l : 1;
  config.discretize_quantitative = options.discretize;
  config.backend = result.backend;

  start = std::chrono::steady_clock::now();
  if (topology && result.backend == TopologicalBackend::sketch) {
    const std::size_t k = choose_k(std::max<std::size_t>(g.node_count(), 1), options.epsilon);
    if (options.table != nullptr && options.table->radius() == config.radius &&
        options.table->node_count() == g.node_count() && options.table->k() == k &&
        options.table->hash_seed() == result.hash_seed) {
      result.table = *options.table;
    } else if (result.tuning.table && result.tuning.table->radius() == config.radius) {
      result.table = std::move(result.tuning.table);
    } else {
      result.table = build_sketch_table(g, config.radius, k, result.hash_seed);
    }
    result.tuning.table.reset();
  }
  result.sketch_seconds = seconds_since(start);

  start = std::chrono::steady_clock::now();
  const NodeDistance dist(g, config, result.table ? &*result.table : nullptr);
  StocOptions stoc_options;
  // Clustering draws seeds from its own stream so explicit parameters and
  // tuned ones pick the same seeds for a given rng seed.
  stoc_options.rng_seed = options.rng_seed;
  stoc_options.first_seed = options.first_seed;
  stoc_options.epsilon = options.epsilon;
  result.clustering = stoc(g, result.tuning.tau_hat, dist, stoc_options);
  result.cluster_seconds = seconds_since(start);
  return result;
}

}  // namespace stoc
