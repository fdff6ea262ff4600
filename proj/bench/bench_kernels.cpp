#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "stoc/metrics.hpp"
#include "stoc/sketch.hpp"
#include "stoc/synth.hpp"
#include "stoc/tuning.hpp"

namespace {

using namespace stoc;

const SyntheticGraph& planted(std::size_t communities) {
  static std::map<std::size_t, SyntheticGraph> cache;
  auto it = cache.find(communities);
  if (it == cache.end()) {
    const std::size_t n = communities * 1000;
    auto spec = PlantedSpec::uniform(communities, 1000, 0.008, 2.0 / static_cast<double>(n - 1000),
                                     0.1, 7);
    it = cache.emplace(communities, generate(spec)).first;
  }
  return it->second;
}

template <SketchTable (*Build)(const AttributedGraph&, int, std::size_t, std::uint64_t)>
void BM_SketchBuild(benchmark::State& state) {
  const auto& g = planted(static_cast<std::size_t>(state.range(0))).graph;
  const int radius = static_cast<int>(state.range(1));
  const std::size_t k = choose_k(g.node_count(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(Build(g, radius, k, 1));
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_SketchBuild<build_sketch_table>)->Args({10, 2})->Args({40, 2})->Args({40, 4})
    ->Unit(benchmark::kMillisecond)->Name("sketch_build/parallel");
BENCHMARK(BM_SketchBuild<serial::build_sketch_table>)->Args({10, 2})->Args({40, 2})->Args({40, 4})
    ->Unit(benchmark::kMillisecond)->Name("sketch_build/serial");

template <std::vector<double> (*Eval)(std::span<const NodePair>, const PairDistance&)>
void BM_PairEvaluation(benchmark::State& state) {
  const auto& g = planted(10).graph;
  DistanceConfig config;
  config.radius = 2;
  const NodeDistance dist(g, config);
  Rng rng(3);
  const auto pairs = sample_pairs(g.node_count(), static_cast<std::size_t>(state.range(0)), rng);
  const PairDistance fn = [&dist](NodeId a, NodeId b) { return dist(a, b); };
  for (auto _ : state) benchmark::DoNotOptimize(Eval(pairs, fn));
}
BENCHMARK(BM_PairEvaluation<evaluate_pairs>)->Arg(256)->Arg(2048)
    ->Unit(benchmark::kMillisecond)->Name("pair_evaluation/parallel");
BENCHMARK(BM_PairEvaluation<serial::evaluate_pairs>)->Arg(256)->Arg(2048)
    ->Unit(benchmark::kMillisecond)->Name("pair_evaluation/serial");

template <double (*Wcss)(const Clustering&, const SemanticEmbedding&)>
void BM_Wcss(benchmark::State& state) {
  const auto& s = planted(static_cast<std::size_t>(state.range(0)));
  const auto embedding = build_embedding(s.graph);
  const auto clustering = Clustering::from_assignment(s.truth);
  for (auto _ : state) benchmark::DoNotOptimize(Wcss(clustering, embedding));
}
BENCHMARK(BM_Wcss<wcss>)->Arg(10)->Arg(80)->Unit(benchmark::kMicrosecond)->Name("wcss/parallel");
BENCHMARK(BM_Wcss<serial::wcss>)->Arg(10)->Arg(80)->Unit(benchmark::kMicrosecond)->Name("wcss/serial");

}  // namespace

BENCHMARK_MAIN();
