#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stoc/distance.hpp"
#include "stoc/graph.hpp"
#include "stoc/sketch.hpp"

namespace stoc {

using Rng = std::mt19937_64;
using NodePair = std::pair<NodeId, NodeId>;
using PairDistance = std::function<double(NodeId, NodeId)>;

// Sorted sample of distances with a lower empirical quantile.
class EmpiricalCDF {
 public:
  EmpiricalCDF() = default;
  explicit EmpiricalCDF(std::vector<double> sample);

  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }
  std::span<const double> values() const { return sorted_; }

  // Element at index ceil(q*s)-1, clamped to [0, s-1].
  double quantile(double q) const;
  // Fraction of the sample that is <= x.
  double fraction_at_most(double x) const;

 private:
  std::vector<double> sorted_;
};

// ceil(2 ln(n) / epsilon^2), at least 1.
std::size_t cdf_sample_size(std::size_t node_count, double epsilon);

// Uniform ordered pairs of distinct nodes, with replacement.
std::vector<NodePair> sample_pairs(std::size_t node_count, std::size_t count, Rng& rng);

// Evaluates `dist` on every pair; evaluations run in parallel, so `dist`
// must be safe to call concurrently.
std::vector<double> evaluate_pairs(std::span<const NodePair> pairs, const PairDistance& dist);

EmpiricalCDF sample_distance_cdf(std::size_t node_count, const PairDistance& dist, double epsilon,
                                 Rng& rng);

double compute_tau(const EmpiricalCDF& cdf, double alpha_s);

struct TopologySampling {
  TopologicalBackend backend = TopologicalBackend::exact;
  std::uint64_t hash_seed = 0;
};

struct RadiusSearch {
  int chosen_l = 1;
  std::vector<std::pair<int, double>> trace;  // (l, alpha_l)
  std::vector<EmpiricalCDF> cdfs;             // topological sample per l
  // Sketch table for chosen_l, kept so clustering does not rebuild it.
  std::optional<SketchTable> table;
};

// Scans l = 1, 2, ... and picks the l whose alpha_l = P(d_T <= tau_hat) is
// closest to alpha_t, stopping once the gap grows or at l_max. Equal gaps
// favor the larger l.
RadiusSearch compute_l(const AttributedGraph& g, double tau_hat, double alpha_t, double epsilon,
                       int l_max, Rng& rng, const TopologySampling& sampling = {});

enum class Variant { stoc, sc, toc };

std::string_view to_string(Variant variant);
std::optional<Variant> parse_variant(std::string_view text);
DistanceMode distance_mode(Variant variant);

struct TuningOptions {
  Variant variant = Variant::stoc;
  double alpha_s = 0.4;
  double alpha_t = 0.4;
  double epsilon = 0.9;
  int l_max = 10;
  bool discretize = false;
  TopologySampling sampling;
};

struct TuningReport {
  double tau_hat = 0.0;
  int chosen_l = 0;  // 0 when the variant ignores topology
  std::vector<std::pair<int, double>> alpha_trace;
  EmpiricalCDF semantic_cdf;
  std::vector<EmpiricalCDF> topological_cdfs;
  std::optional<SketchTable> table;
};

// tau_hat only: the alpha_s-quantile of the sampled semantic CDF, or for
// ToC the alpha_t-quantile of the topological CDF at l = 1.
TuningReport tune_tau(const AttributedGraph& g, const TuningOptions& options, Rng& rng);

// tau_hat followed by the l search (skipped for SC).
TuningReport tune(const AttributedGraph& g, const TuningOptions& options, Rng& rng);

namespace serial {

std::vector<double> evaluate_pairs(std::span<const NodePair> pairs, const PairDistance& dist);

}  // namespace serial

}  // namespace stoc
