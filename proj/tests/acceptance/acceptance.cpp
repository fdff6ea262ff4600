// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../fixtures.hpp"
#include "../oracle/oracle.hpp"
#include "stoc/experiment.hpp"
#include "stoc/metrics.hpp"
#include "stoc/pipeline.hpp"
#include "stoc/sketch.hpp"
#include "stoc/synth.hpp"

using namespace stoc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

AttributedGraph gnp(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GraphParts parts;
  ColumnData q{"q", AttributeKind::quantitative, '\0', {}, {}};
  for (std::size_t v = 0; v < n; ++v) {
    parts.node_ids.push_back("n" + std::to_string(v));
    q.numbers.push_back(unit(rng));
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) parts.edges.emplace_back(u, v);
    }
  }
  parts.columns.push_back(q);
  return AttributedGraph::build(parts);
}

// The planted graph shared by criteria 7, 8, 9 and 11: four communities of
// 500 with tight, community-aligned attributes.
PlantedSpec planted_spec() {
  auto spec = PlantedSpec::uniform(4, 500, 0.05, 0.002, 0.1, 1);
  spec.spread = 0.02;
  return spec;
}
constexpr double kPlantedEpsilon = 0.3;
constexpr double kPlantedAlpha = 0.4;
constexpr std::size_t kPlantedRuns = 10;

Outcome toy_golden() {
  const auto start = Clock::now();
  const auto g = test::toy();
  DistanceConfig config;
  config.radius = 1;
  config.mode = DistanceMode::topological_only;
  const NodeDistance dist(g, config);
  const NodeId v0 = test::node(g, "v0");
  const double d1 = dist.topological(v0, test::node(g, "v1"));
  const double d2 = dist.topological(v0, test::node(g, "v2"));
  const double elapsed = seconds_since(start);
  const bool ok = std::abs(d1 - 0.4) <= 1e-9 && std::abs(d2 - 0.25) <= 1e-9 && elapsed < 1.0;
  return {ok, fmt("d_T(v0,v1)=%.12g d_T(v0,v2)=%.12g in %.3fs", d1, d2, elapsed)};
}

Outcome modularity_oracle() {
  GraphParts parts;
  ColumnData q{"q", AttributeKind::quantitative, '\0', {}, {}};
  for (int v = 0; v < 6; ++v) {
    parts.node_ids.push_back("n" + std::to_string(v));
    q.numbers.push_back(0.0);
  }
  parts.columns.push_back(q);
  parts.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  const auto g = AttributedGraph::build(parts);
  const double triangles = modularity(g, Clustering::from_assignment({0, 0, 0, 1, 1, 1}));
  const double whole = modularity(g, Clustering::from_assignment({0, 0, 0, 0, 0, 0}));

  double worst = 0.0;
  std::mt19937_64 rng(17);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t n = 20 + 9 * i;  // up to 191
    const auto r = gnp(n, 4.0 / static_cast<double>(n), 100 + i);
    if (r.edge_count() == 0) continue;
    std::uniform_int_distribution<ClusterId> pick(0, static_cast<ClusterId>(2 + i % 7));
    std::vector<ClusterId> raw(n);
    for (auto& c : raw) c = pick(rng);
    // Densify ids for from_assignment.
    std::vector<ClusterId> remap(16, static_cast<ClusterId>(-1));
    ClusterId next = 0;
    for (auto& c : raw) {
      if (remap[c] == static_cast<ClusterId>(-1)) remap[c] = next++;
      c = remap[c];
    }
    const double fast = modularity(r, Clustering::from_assignment(raw));
    const double slow = oracle::modularity_double_sum(r, raw);
    worst = std::max(worst, std::abs(fast - slow));
  }
  const bool ok = std::abs(triangles - 5.0 / 14.0) <= 1e-9 && std::abs(whole) <= 1e-12 &&
                  worst <= 1e-9;
  return {ok, fmt("Q(triangles)=%.12f (5/14=%.12f), Q(one cluster)=%.3g, max |fast-oracle|=%.3g "
                  "over 20 graphs",
                  triangles, 5.0 / 14.0, whole, worst)};
}

Outcome sketch_accuracy() {
  const auto start = Clock::now();
  const std::size_t n = 1000;
  const auto g = gnp(n, 10.0 / static_cast<double>(n - 1), 3);
  const double eps = 0.3;
  const std::size_t k = choose_k(n, eps);
  const auto adj = oracle::adjacency(g);
  std::size_t worst_hits = 200;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  for (std::uint64_t hash_seed = 1; hash_seed <= 5; ++hash_seed) {
    const auto table = build_sketch_table(g, 2, k, hash_seed);
    std::size_t hits = 0;
    for (int i = 0; i < 200; ++i) {
      NodeId a = pick(rng);
      NodeId b = pick(rng);
      while (b == a) b = pick(rng);
      const double est = topological_distance_sketch(table, a, b, 2);
      const double exact = oracle::topological_distance(adj, a, b, 2);
      if (std::abs(est - exact) <= eps) ++hits;
    }
    worst_hits = std::min(worst_hits, hits);
  }
  const double elapsed = seconds_since(start);
  const bool ok = worst_hits >= 180 && elapsed < 30.0;
  return {ok, fmt("k=%zu, worst hash seed %zu/200 pairs within 0.3, %.2fs", k, worst_hits, elapsed)};
}

Outcome sketch_exactness() {
  const std::size_t n = 50;
  const auto g = gnp(n, 0.08, 11);
  const auto adj = oracle::adjacency(g);
  double worst = 0.0;
  for (int l = 1; l <= 3; ++l) {
    const auto table = build_sketch_table(g, l, n, 99);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        worst = std::max(worst, std::abs(topological_distance_sketch(table, a, b, l) -
                                         oracle::topological_distance(adj, a, b, l)));
      }
    }
  }
  return {worst <= 1e-12, fmt("k=n=50, l=1..3, all 1225 pairs, max error %.3g", worst)};
}

Outcome clustering_validity() {
  const Variant variants[] = {Variant::stoc, Variant::sc, Variant::toc};
  const double alphas[] = {0.1, 0.2, 0.4, 0.6, 0.8, 0.9};
  std::size_t passed = 0;
  std::string first_failure;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t communities = 2 + i % 4;
    auto spec = PlantedSpec::uniform(communities, 40 + 7 * i, 0.15, 0.01, 0.1 * (i % 3), 1000 + i);
    const auto g = generate(spec).graph;
    VariantOptions options;
    options.variant = variants[i % 3];
    options.alpha_s = options.alpha_t = alphas[i % 6];
    options.epsilon = 0.5;
    options.backend = i % 2 == 0 ? TopologicalBackend::exact : TopologicalBackend::sketch;
    options.discretize = i % 10 == 9;
    options.rng_seed = i;
    const auto result = run_variant(g, options);

    DistanceConfig config;
    config.mode = distance_mode(options.variant);
    config.radius = result.clustering.params.radius;
    config.discretize_quantitative = options.discretize;
    config.backend = result.backend;
    const NodeDistance dist(g, config, result.table ? &*result.table : nullptr);
    const auto report = oracle::validate_clustering(g, result.clustering, result.tuning.tau_hat,
                                                    [&dist](NodeId a, NodeId b) { return dist(a, b); });
    const bool enqueue_once = result.clustering.enqueue_count == g.node_count();
    if (report.ok() && enqueue_once) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = fmt(" first failure: config %llu (%s)", static_cast<unsigned long long>(i),
                          enqueue_once ? report.message.c_str() : "enqueue count");
    }
  }
  return {passed == 50, fmt("%zu/50 configurations valid%s", passed, first_failure.c_str())};
}

Outcome tuning_fidelity() {
  const double eps = 0.3;
  const double alphas[] = {0.2, 0.5, 0.8};

  // n >= 500: realized fraction on a large fresh sample.
  const auto large = generate(PlantedSpec::uniform(5, 120, 0.05, 0.005, 0.2, 21)).graph;
  // n <= 300: realized fraction over all pairs.
  const auto small = generate(PlantedSpec::uniform(3, 90, 0.08, 0.01, 0.2, 22)).graph;

  auto semantic = [](const AttributedGraph& g) {
    return [&g](NodeId a, NodeId b) {
      return semantic_distance(g.attributes(a), g.attributes(b), g.schema());
    };
  };
  const auto exact_small = oracle::exact_pairwise_cdf(small.node_count(), semantic(small));
  Rng fresh_rng(777);
  const auto fresh_pairs = sample_pairs(large.node_count(), 20000, fresh_rng);
  const auto fresh = EmpiricalCDF(serial::evaluate_pairs(fresh_pairs, semantic(large)));

  std::string detail;
  bool ok = true;
  for (double alpha : alphas) {
    std::size_t good_large = 0;
    std::size_t good_small = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      TuningOptions options;
      options.variant = Variant::sc;
      options.alpha_s = alpha;
      options.epsilon = eps;
      Rng rng(seed);
      const double tau_large = tune_tau(large, options, rng).tau_hat;
      if (std::abs(fresh.fraction_at_most(tau_large) - alpha) <= 2 * eps) ++good_large;
      Rng rng2(seed);
      const double tau_small = tune_tau(small, options, rng2).tau_hat;
      if (std::abs(exact_small.fraction_at_most(tau_small) - alpha) <= 2 * eps) ++good_small;
    }
    ok = ok && good_large >= 45 && good_small >= 45;
    detail += fmt("alpha=%.1f: %zu/50 (n=%zu fresh), %zu/50 (n=%zu exact); ", alpha, good_large,
                  large.node_count(), good_small, small.node_count());
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

struct PlantedBench {
  SyntheticGraph graph;
  std::vector<BenchRow> rows;

  const BenchRow& row(Variant v, bool discretize) const {
    for (const auto& r : rows) {
      if (r.variant == v && r.discretize == discretize) return r;
    }
    throw std::logic_error("missing bench row");
  }
};

PlantedBench run_planted() {
  PlantedBench out{generate(planted_spec()), {}};
  BenchOptions options;
  options.alphas = {kPlantedAlpha};
  options.discretized_stoc = true;
  options.runs = kPlantedRuns;
  options.base.epsilon = kPlantedEpsilon;
  out.rows = run_bench(out.graph.graph, options);
  return out;
}

Outcome planted_quality(const PlantedBench& bench) {
  const auto& row = bench.row(Variant::stoc, false);
  double min_q = 1.0;
  for (const auto& r : row.runs) min_q = std::min(min_q, r.modularity.value_or(-1.0));
  const bool ok = min_q > 0.0 && row.summary.modularity.mean > 0.2;
  return {ok, fmt("SToC alpha=0.4, eps=0.3, 10 runs: min Q=%.4f, mean Q=%.4f (k mean %.1f)", min_q,
                  row.summary.modularity.mean, row.summary.clusters.mean)};
}

Outcome variant_trend(const PlantedBench& bench) {
  const auto& st = bench.row(Variant::stoc, false).summary;
  const auto& sc = bench.row(Variant::sc, false).summary;
  const auto& to = bench.row(Variant::toc, false).summary;
  const bool ok = st.wcss.mean <= to.wcss.mean && st.modularity.mean >= sc.modularity.mean;
  return {ok, fmt("WCSS SToC %.2f <= ToC %.2f; Q SToC %.4f >= SC %.4f", st.wcss.mean, to.wcss.mean,
                  st.modularity.mean, sc.modularity.mean)};
}

Outcome discretization_trend(const PlantedBench& bench) {
  const auto& plain = bench.row(Variant::stoc, false).summary;
  const auto& disc = bench.row(Variant::stoc, true).summary;
  return {disc.wcss.mean >= plain.wcss.mean,
          fmt("WCSS discretized %.2f >= plain %.2f (k %.1f vs %.1f)", disc.wcss.mean,
              plain.wcss.mean, disc.clusters.mean, plain.clusters.mean)};
}

Outcome scaling() {
  const auto start = Clock::now();
  std::vector<double> normalized;
  std::string detail;
  for (std::size_t communities : {20, 40, 80}) {
    const std::size_t n = communities * 1000;
    auto spec = PlantedSpec::uniform(communities, 1000, 0.008, 2.0 / static_cast<double>(n - 1000),
                                     0.1, 31);
    const auto g = generate(spec).graph;
    std::vector<double> times;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      VariantOptions options;
      options.rng_seed = seed;
      const auto t0 = Clock::now();
      const auto result = run_variant(g, options);
      times.push_back(seconds_since(t0));
    }
    std::sort(times.begin(), times.end());
    const double per = times[2] / (static_cast<double>(g.edge_count()) *
                                   std::log(static_cast<double>(n)));
    normalized.push_back(per);
    detail += fmt("m=%zu median %.3fs (%.3g); ", g.edge_count(), times[2], per);
  }
  const double ratio = *std::max_element(normalized.begin(), normalized.end()) /
                       *std::min_element(normalized.begin(), normalized.end());
  const double elapsed = seconds_since(start);
  detail += fmt("max/min %.2f, %.1fs total", ratio, elapsed);
  return {ratio <= 2.0 && elapsed < 600.0, detail};
}

Outcome stability(const PlantedBench& bench) {
  const auto& s = bench.row(Variant::stoc, false).summary;
  const double cv = s.modularity.stdev / s.modularity.mean;
  const bool reported = bench.row(Variant::stoc, false).runs.size() == kPlantedRuns;
  return {reported && s.modularity.mean > 0.0 && cv < 0.5,
          fmt("k %.1f (%.1f), Q %.4f (%.4f), WCSS %.2f (%.2f); stdev(Q)/mean(Q)=%.3f",
              s.clusters.mean, s.clusters.stdev, s.modularity.mean, s.modularity.stdev,
              s.wcss.mean, s.wcss.stdev, cv)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&failures](int id, const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] AC%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "toy topological distances", toy_golden);
  report(2, "modularity oracle", modularity_oracle);
  report(3, "sketch accuracy", sketch_accuracy);
  report(4, "sketch exactness with k >= n", sketch_exactness);
  report(5, "clustering validity", clustering_validity);
  report(6, "tuning fidelity", tuning_fidelity);

  PlantedBench bench;
  std::string bench_error;
  try {
    bench = run_planted();
  } catch (const std::exception& e) {
    bench_error = e.what();
  }
  auto with_bench = [&](Outcome (*fn)(const PlantedBench&)) {
    return [&, fn]() -> Outcome {
      if (!bench_error.empty()) return {false, "planted bench failed: " + bench_error};
      return fn(bench);
    };
  };
  report(7, "planted partition quality", with_bench(planted_quality));
  report(8, "variant trend", with_bench(variant_trend));
  report(9, "discretization trend", with_bench(discretization_trend));
  report(10, "scaling", scaling);
  report(11, "stability over runs", with_bench(stability));

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
