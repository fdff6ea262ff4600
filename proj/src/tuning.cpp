#include "stoc/tuning.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoc {

EmpiricalCDF::EmpiricalCDF(std::vector<double> sample) : sorted_(std::move(sample)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::quantile(double q) const {
  if (sorted_.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  const auto s = static_cast<double>(sorted_.size());
  const double index = std::ceil(q * s) - 1.0;
  const auto clamped = static_cast<std::size_t>(std::clamp(index, 0.0, s - 1.0));
  return sorted_[clamped];
}

double EmpiricalCDF::fraction_at_most(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::size_t cdf_sample_size(std::size_t node_count, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (node_count < 1) throw std::invalid_argument("node count must be positive");
  const double raw =
      std::ceil(2.0 * std::log(static_cast<double>(node_count)) / (epsilon * epsilon));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

std::vector<NodePair> sample_pairs(std::size_t node_count, std::size_t count, Rng& rng) {
  if (node_count < 2) throw std::invalid_argument("pair sampling needs at least two nodes");
  std::uniform_int_distribution<NodeId> first(0, static_cast<NodeId>(node_count - 1));
  std::uniform_int_distribution<NodeId> other(0, static_cast<NodeId>(node_count - 2));
  std::vector<NodePair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId a = first(rng);
    NodeId b = other(rng);
    if (b >= a) ++b;
    pairs.emplace_back(a, b);
  }
  return pairs;
}

std::vector<double> evaluate_pairs(std::span<const NodePair> pairs, const PairDistance& dist) {
  std::vector<double> out(pairs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(pairs.size()); ++i) {
    const auto& [a, b] = pairs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = dist(a, b);
  }
  return out;
}

EmpiricalCDF sample_distance_cdf(std::size_t node_count, const PairDistance& dist, double epsilon,
                                 Rng& rng) {
  const auto pairs = sample_pairs(node_count, cdf_sample_size(node_count, epsilon), rng);
  return EmpiricalCDF(evaluate_pairs(pairs, dist));
}

double compute_tau(const EmpiricalCDF& cdf, double alpha_s) {
  if (!(alpha_s >= 0.0 && alpha_s <= 1.0)) throw std::invalid_argument("alpha_s must be in [0, 1]");
  return cdf.quantile(alpha_s);
}

namespace {

EmpiricalCDF sample_topology(const AttributedGraph& g, int radius, double epsilon, Rng& rng,
                             TopologicalBackend backend, const SketchTable* table) {
  DistanceConfig config;
  config.radius = radius;
  config.mode = DistanceMode::topological_only;
  config.backend = backend;
  const NodeDistance dist(g, config, table);
  return sample_distance_cdf(
      g.node_count(), [&dist](NodeId a, NodeId b) { return dist.topological(a, b); }, epsilon,
      rng);
}

}  // namespace

RadiusSearch compute_l(const AttributedGraph& g, double tau_hat, double alpha_t, double epsilon,
                       int l_max, Rng& rng, const TopologySampling& sampling) {
  if (!(alpha_t >= 0.0 && alpha_t <= 1.0)) throw std::invalid_argument("alpha_t must be in [0, 1]");
  if (l_max < 1) throw std::invalid_argument("l_max must be at least 1");
  RadiusSearch result;
  const bool sketch = sampling.backend == TopologicalBackend::sketch;
  std::optional<SketchTable> table;
  double best_gap = 0.0;
  double previous_gap = 0.0;
  for (int l = 1; l <= l_max; ++l) {
    if (sketch) {
      table = l == 1 ? build_sketch_table(g, 1, choose_k(g.node_count(), epsilon), sampling.hash_seed)
                     : extend_sketch_table(g, *table);
    }
    auto cdf = sample_topology(g, l, epsilon, rng, sampling.backend, table ? &*table : nullptr);
    const double alpha_l = cdf.fraction_at_most(tau_hat);
    const double gap = std::abs(alpha_l - alpha_t);
    result.trace.emplace_back(l, alpha_l);
    result.cdfs.push_back(std::move(cdf));
    if (l > 1 && gap > previous_gap) break;
    if (l == 1 || gap <= best_gap) {
      best_gap = gap;
      result.chosen_l = l;
      result.table = table;
    }
    if (gap == 0.0) break;
    previous_gap = gap;
  }
  return result;
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::stoc:
      return "stoc";
    case Variant::sc:
      return "sc";
    case Variant::toc:
      return "toc";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "stoc") return Variant::stoc;
  if (text == "sc") return Variant::sc;
  if (text == "toc") return Variant::toc;
  return std::nullopt;
}

DistanceMode distance_mode(Variant variant) {
  switch (variant) {
    case Variant::stoc:
      return DistanceMode::combined;
    case Variant::sc:
      return DistanceMode::semantic_only;
    case Variant::toc:
      return DistanceMode::topological_only;
  }
  return DistanceMode::combined;
}

namespace {

void check_options(const TuningOptions& options) {
  if (!(options.epsilon > 0.0 && options.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1]");
  }
  if (!(options.alpha_s >= 0.0 && options.alpha_s <= 1.0) ||
      !(options.alpha_t >= 0.0 && options.alpha_t <= 1.0)) {
    throw std::invalid_argument("attraction ratios must be in [0, 1]");
  }
}

}  // namespace

TuningReport tune_tau(const AttributedGraph& g, const TuningOptions& options, Rng& rng) {
  check_options(options);
  TuningReport report;
  if (g.node_count() < 2) return report;
  if (options.variant == Variant::toc) {
    std::optional<SketchTable> table;
    if (options.sampling.backend == TopologicalBackend::sketch) {
      table = build_sketch_table(g, 1, choose_k(g.node_count(), options.epsilon),
                                 options.sampling.hash_seed);
    }
    auto first = sample_topology(g, 1, options.epsilon, rng, options.sampling.backend,
                                 table ? &*table : nullptr);
    report.tau_hat = compute_tau(first, options.alpha_t);
    report.topological_cdfs.push_back(std::move(first));
    return report;
  }
  DistanceConfig config;
  config.mode = DistanceMode::semantic_only;
  config.discretize_quantitative = options.discretize;
  const NodeDistance dist(g, config);
  report.semantic_cdf = sample_distance_cdf(
      g.node_count(), [&dist](NodeId a, NodeId b) { return dist.semantic(a, b); }, options.epsilon,
      rng);
  report.tau_hat = compute_tau(report.semantic_cdf, options.alpha_s);
  return report;
}

TuningReport tune(const AttributedGraph& g, const TuningOptions& options, Rng& rng) {
  TuningReport report = tune_tau(g, options, rng);
  if (options.variant == Variant::sc) return report;
  if (g.node_count() < 2) {
    report.chosen_l = 1;
    report.alpha_trace.emplace_back(1, 1.0);
    return report;
  }
  auto search = compute_l(g, report.tau_hat, options.alpha_t, options.epsilon, options.l_max, rng,
                          options.sampling);
  report.chosen_l = search.chosen_l;
  report.alpha_trace = std::move(search.trace);
  report.topological_cdfs = std::move(search.cdfs);
  report.table = std::move(search.table);
  return report;
}

namespace serial {

std::vector<double> evaluate_pairs(std::span<const NodePair> pairs, const PairDistance& dist) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) out.push_back(dist(a, b));
  return out;
}

}  // namespace serial

}  // namespace stoc
