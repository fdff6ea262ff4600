#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stoc/clustering_io.hpp"
#include "stoc/error.hpp"
#include "stoc/experiment.hpp"
#include "stoc/metrics.hpp"
#include "stoc/pipeline.hpp"
#include "stoc/sketch.hpp"
#include "stoc/synth.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace stoc;

// Thrown for bad flag values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphInput {
  std::string edges;
  std::string attrs;
  std::string schema;
  bool directed = false;
  bool raw_quantitative = false;

  void add_to(CLI::App& app) {
    app.add_option("--edges", edges, "Edge list file")->required();
    app.add_option("--attrs", attrs, "Attribute table with a header row")->required();
    app.add_option("--schema", schema, "Schema file")->required();
    app.add_flag("--directed", directed, "Keep arcs one-way");
    app.add_flag("--raw-quantitative", raw_quantitative,
                 "Use quantitative values as given instead of min-max normalizing them");
  }

  AttributedGraph load() const {
    LoadOptions options;
    options.directed = directed;
    options.build.normalize_quantitative = !raw_quantitative;
    return load_graph_files(edges, attrs, schema, options);
  }

  json to_json() const {
    return {{"edges", edges},
            {"attrs", attrs},
            {"schema", schema},
            {"directed", directed},
            {"raw_quantitative", raw_quantitative}};
  }
};

struct RunFlags {
  std::string variant = "stoc";
  double alpha_s = 0.4;
  double alpha_t = 0.4;
  double epsilon = 0.9;
  int l_max = 10;
  bool discretize = false;
  std::string backend;
  std::uint64_t rng_seed = 0;

  void add_to(CLI::App& app, bool with_alphas = true) {
    app.add_option("--variant", variant, "stoc, sc or toc")
        ->check(CLI::IsMember({"stoc", "sc", "toc"}))
        ->capture_default_str();
    if (with_alphas) {
      app.add_option("--alpha-s", alpha_s, "Semantic attraction ratio")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
      app.add_option("--alpha-t", alpha_t, "Topological attraction ratio")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
    }
    app.add_option("--epsilon", epsilon, "Sampling and sketch error bound in (0, 1]")
        ->capture_default_str();
    app.add_option("--l-max", l_max, "Largest neighborhood radius tried by tuning")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--discretize", discretize, "Compare quantitative values as categories");
    app.add_option("--backend", backend, "exact or sketch (default: exact up to 10000 nodes)")
        ->check(CLI::IsMember({"exact", "sketch"}));
    app.add_option("--rng-seed", rng_seed, "Seed for sampling, sketches and seed selection")
        ->capture_default_str();
  }

  VariantOptions options() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw UsageError("--epsilon must be in (0, 1]");
    VariantOptions o;
    o.variant = *parse_variant(variant);
    o.alpha_s = alpha_s;
    o.alpha_t = alpha_t;
    o.epsilon = epsilon;
    o.l_max = l_max;
    o.discretize = discretize;
    if (!backend.empty()) {
      o.backend = backend == "sketch" ? TopologicalBackend::sketch : TopologicalBackend::exact;
    }
    o.rng_seed = rng_seed;
    return o;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path, 0, "cannot open file for writing");
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  auto out = open_output(path);
  out << text;
}

std::optional<long> peak_rss_kib() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream fields(line.substr(6));
      long kib = 0;
      if (fields >> kib) return kib;
    }
  }
  return std::nullopt;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json trace_json(const std::vector<std::pair<int, double>>& trace) {
  json out = json::array();
  for (const auto& [l, alpha] : trace) out.push_back({{"l", l}, {"alpha", alpha}});
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateCmd {
  std::size_t communities = 4;
  std::size_t size = 500;
  double p_in = 0.05;
  double p_out = 0.002;
  double noise = 0.1;
  double spread = -1.0;
  std::uint64_t rng_seed = 0;
  std::string out;

  void add_to(CLI::App& app) {
    app.add_option("--communities", communities, "Number of planted communities")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--size", size, "Nodes per community")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--p-in", p_in, "Edge probability inside a community")->capture_default_str();
    app.add_option("--p-out", p_out, "Edge probability across communities")->capture_default_str();
    app.add_option("--noise", noise, "Probability of a foreign category label")
        ->capture_default_str();
    app.add_option("--spread", spread, "Half-width of the quantitative value range per community");
    app.add_option("--rng-seed", rng_seed)->capture_default_str();
    app.add_option("--out", out, "Output prefix")->required();
  }

  int run() const {
    auto spec = PlantedSpec::uniform(communities, size, p_in, p_out, noise, rng_seed);
    if (spread >= 0.0) spec.spread = spread;
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto synthetic = generate(spec);
    write_synthetic(synthetic, out);
    std::cerr << "wrote " << out << ".{edges,attrs.tsv,schema,truth}: "
              << synthetic.graph.node_count() << " nodes, " << synthetic.graph.edge_count()
              << " edges\n";
    return 0;
  }
};

// ---------------------------------------------------------------- tune

struct TuneCmd {
  GraphInput input;
  RunFlags flags;
  std::string out;

  void add_to(CLI::App& app) {
    input.add_to(app);
    flags.add_to(app);
    app.add_option("--out", out, "Report path (default: stdout)");
  }

  int run() const {
    const auto options = flags.options();
    const auto g = input.load();
    TuningOptions tuning;
    tuning.variant = options.variant;
    tuning.alpha_s = options.alpha_s;
    tuning.alpha_t = options.alpha_t;
    tuning.epsilon = options.epsilon;
    tuning.l_max = options.l_max;
    tuning.discretize = options.discretize;
    tuning.sampling.backend = options.backend.value_or(default_backend(g.node_count()));
    tuning.sampling.hash_seed = derive_hash_seed(options.rng_seed);
    Rng rng(options.rng_seed);
    const auto report = tune(g, tuning, rng);

    json j;
    j["variant"] = to_string(options.variant);
    j["tau"] = report.tau_hat;
    j["l"] = report.chosen_l;
    j["trace"] = trace_json(report.alpha_trace);
    j["alpha_s"] = options.alpha_s;
    j["alpha_t"] = options.alpha_t;
    j["epsilon"] = options.epsilon;
    j["l_max"] = options.l_max;
    j["discretize"] = options.discretize;
    j["backend"] = to_string(tuning.sampling.backend);
    j["sample_size"] = cdf_sample_size(g.node_count(), options.epsilon);
    j["rng_seed"] = options.rng_seed;
    j["input"] = input.to_json();
    emit(out, j.dump(2) + "\n");
    return 0;
  }
};

// ---------------------------------------------------------------- cluster

struct ClusterCmd {
  GraphInput input;
  RunFlags flags;
  std::optional<double> tau;
  std::optional<int> radius;
  std::string first_seed;
  std::size_t runs = 1;
  std::string sketch_cache;
  std::string out;

  void add_to(CLI::App& app) {
    input.add_to(app);
    flags.add_to(app);
    app.add_option("--tau", tau, "Distance threshold; skips tau tuning")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--l", radius, "Neighborhood radius; skips the radius search")
        ->check(CLI::PositiveNumber);
    app.add_option("--first-seed", first_seed, "Node id used as the first seed");
    app.add_option("--runs", runs, "Repetitions with rng seeds seed, seed+1, ...")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--sketch-cache", sketch_cache,
                   "Sketch table file, read when it matches the run and written otherwise");
    app.add_option("--out", out, "Clustering file; metadata goes to <out>.meta.json")
        ->required();
  }

  int run() const {
    auto options = flags.options();
    options.tau = tau;
    options.radius = radius;
    const auto g = input.load();
    if (!first_seed.empty()) {
      const auto v = g.find(first_seed);
      if (!v) throw UsageError("--first-seed: unknown node id '" + first_seed + "'");
      options.first_seed = *v;
    }

    std::optional<SketchTable> cached;
    if (!sketch_cache.empty()) {
      std::ifstream in(sketch_cache, std::ios::binary);
      if (in) {
        try {
          cached = load_sketch_table(in, g.topology_digest());
        } catch (const DataError& e) {
          std::cerr << "ignoring sketch cache: " << e.what() << '\n';
        }
      }
    }

    const auto embedding = build_embedding(g);
    std::vector<RunMetrics> metrics;
    json run_rows = json::array();
    std::cout << "run\trng_seed\tk\tQ\tWCSS\ttau\tl\tseconds\n";
    json first_meta;
    for (std::size_t i = 0; i < runs; ++i) {
      auto run_options = options;
      run_options.rng_seed = options.rng_seed + i;
      if (i > 0) run_options.first_seed.reset();
      run_options.table = cached ? &*cached : nullptr;
      const auto result = run_variant(g, run_options);
      const auto m = measure(g, embedding, result, run_options.rng_seed);
      metrics.push_back(m);

      if (result.table && !sketch_cache.empty() && (!cached || !(*cached == *result.table))) {
        std::ofstream cache(sketch_cache, std::ios::binary);
        if (cache) {
          save_sketch_table(*result.table, g.topology_digest(), cache);
          cached = *result.table;
        } else {
          std::cerr << "cannot write sketch cache " << sketch_cache << '\n';
        }
      }

      std::cout << i << '\t' << m.rng_seed << '\t' << m.clusters << '\t'
                << (m.modularity ? format_double(*m.modularity) : "nan") << '\t'
                << format_double(m.wcss) << '\t' << format_double(m.tau) << '\t' << m.radius
                << '\t' << format_double(m.seconds) << '\n';

      json row;
      row["rng_seed"] = m.rng_seed;
      row["k"] = m.clusters;
      row["Q"] = optional_number(m.modularity);
      row["WCSS"] = m.wcss;
      row["tau"] = m.tau;
      row["l"] = m.radius;
      row["sketch_k"] = m.sketch_k;
      row["hash_seed"] = result.hash_seed;
      row["trace"] = trace_json(result.tuning.alpha_trace);
      row["seconds"] = {{"tune", result.tune_seconds},
                        {"sketch", result.sketch_seconds},
                        {"cluster", result.cluster_seconds}};
      run_rows.push_back(row);

      if (i == 0) {
        auto file = open_output(out);
        write_clustering(g, result.clustering, file);
        first_meta = row;
        first_meta["mode"] = to_string(result.clustering.params.mode);
        first_meta["backend"] = to_string(result.backend);
      }
    }

    json meta;
    meta["variant"] = to_string(options.variant);
    meta["tau"] = first_meta["tau"];
    meta["l"] = first_meta["l"];
    meta["k"] = first_meta["k"];
    meta["sketch_k"] = first_meta["sketch_k"];
    meta["Q"] = first_meta["Q"];
    meta["WCSS"] = first_meta["WCSS"];
    meta["mode"] = first_meta["mode"];
    meta["backend"] = first_meta["backend"];
    meta["epsilon"] = options.epsilon;
    meta["rng_seed"] = options.rng_seed;
    meta["hash_seed"] = first_meta["hash_seed"];
    meta["seconds"] = first_meta["seconds"];
    meta["peak_rss_kib"] = peak_rss_kib() ? json(*peak_rss_kib()) : json(nullptr);
    meta["parameters"] = {{"alpha_s", options.alpha_s},
                          {"alpha_t", options.alpha_t},
                          {"epsilon", options.epsilon},
                          {"l_max", options.l_max},
                          {"discretize", options.discretize},
                          {"backend", flags.backend.empty() ? json(nullptr) : json(flags.backend)},
                          {"tau", tau ? json(*tau) : json(nullptr)},
                          {"l", radius ? json(*radius) : json(nullptr)},
                          {"first_seed", first_seed.empty() ? json(nullptr) : json(first_seed)},
                          {"runs", runs}};
    meta["input"] = input.to_json();
    meta["graph"] = {{"nodes", g.node_count()},
                     {"edges", g.edge_count()},
                     {"topology_digest", g.topology_digest()}};
    meta["runs"] = run_rows;
    if (runs > 1) {
      const auto s = summarize(metrics);
      meta["summary"] = {{"k", {{"mean", s.clusters.mean}, {"stdev", s.clusters.stdev}}},
                         {"Q", {{"mean", s.modularity.mean}, {"stdev", s.modularity.stdev}}},
                         {"WCSS", {{"mean", s.wcss.mean}, {"stdev", s.wcss.stdev}}}};
      std::cout << "mean\t-\t" << format_double(s.clusters.mean) << '\t'
                << format_double(s.modularity.mean) << '\t' << format_double(s.wcss.mean) << '\t'
                << format_double(s.tau.mean) << '\t' << format_double(s.radius.mean) << '\t'
                << format_double(s.seconds.mean) << '\n';
      std::cout << "stdev\t-\t" << format_double(s.clusters.stdev) << '\t'
                << format_double(s.modularity.stdev) << '\t' << format_double(s.wcss.stdev)
                << '\t' << format_double(s.tau.stdev) << '\t' << format_double(s.radius.stdev)
                << '\t' << format_double(s.seconds.stdev) << '\n';
    }
    auto meta_file = open_output(out + ".meta.json");
    meta_file << meta.dump(2) << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- metrics

struct MetricsCmd {
  GraphInput input;
  std::string clustering;
  std::string out;

  void add_to(CLI::App& app) {
    input.add_to(app);
    app.add_option("--clustering", clustering, "Clustering file (<id>\\t<cluster>)")->required();
    app.add_option("--out", out, "Report path (default: stdout)");
  }

  int run() const {
    const auto g = input.load();
    std::ifstream in(clustering);
    if (!in) throw DataError(clustering, 0, "cannot open file");
    const auto c = read_clustering(g, in, clustering);
    json j;
    j["k"] = c.cluster_count();
    j["Q"] = g.edge_count() > 0 ? json(modularity(g, c)) : json(nullptr);
    j["WCSS"] = wcss(c, build_embedding(g));
    json sizes = json::array();
    for (const auto& [size, count] : size_distribution(c)) {
      sizes.push_back({{"size", size}, {"count", count}});
    }
    j["sizes"] = sizes;
    emit(out, j.dump(2) + "\n");
    return 0;
  }
};

// ---------------------------------------------------------------- distance-cdf

struct DistanceCdfCmd {
  GraphInput input;
  std::string kind = "semantic";
  int radius = 1;
  double epsilon = 0.9;
  std::size_t pairs = 0;
  bool discretize = false;
  std::string backend;
  std::uint64_t rng_seed = 0;
  std::string out;

  void add_to(CLI::App& app) {
    input.add_to(app);
    app.add_option("--kind", kind, "semantic, topological or combined")
        ->check(CLI::IsMember({"semantic", "topological", "combined"}))
        ->capture_default_str();
    app.add_option("--l", radius, "Neighborhood radius")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--epsilon", epsilon, "Sets the sample size 2 ln(n)/epsilon^2")
        ->capture_default_str();
    app.add_option("--pairs", pairs, "Explicit sample size");
    app.add_flag("--discretize", discretize, "Compare quantitative values as categories");
    app.add_option("--backend", backend, "exact or sketch")
        ->check(CLI::IsMember({"exact", "sketch"}));
    app.add_option("--rng-seed", rng_seed)->capture_default_str();
    app.add_option("--out", out, "Output path (default: stdout)");
  }

  int run() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw UsageError("--epsilon must be in (0, 1]");
    const auto g = input.load();
    if (g.node_count() < 2) throw DataError(input.attrs, 0, "need at least two nodes");
    DistanceConfig config;
    config.radius = radius;
    config.mode = kind == "semantic"      ? DistanceMode::semantic_only
                  : kind == "topological" ? DistanceMode::topological_only
                                          : DistanceMode::combined;
    config.discretize_quantitative = discretize;
    config.backend = backend.empty() ? default_backend(g.node_count())
                     : backend == "sketch" ? TopologicalBackend::sketch
                                           : TopologicalBackend::exact;
    std::optional<SketchTable> table;
    if (config.mode != DistanceMode::semantic_only &&
        config.backend == TopologicalBackend::sketch) {
      table = build_sketch_table(g, radius, choose_k(g.node_count(), epsilon),
                                 derive_hash_seed(rng_seed));
    }
    const NodeDistance dist(g, config, table ? &*table : nullptr);
    const PairDistance fn = [&dist](NodeId a, NodeId b) { return dist(a, b); };
    Rng rng(rng_seed);
    const std::size_t count = pairs > 0 ? pairs : cdf_sample_size(g.node_count(), epsilon);
    const auto sample = sample_pairs(g.node_count(), count, rng);
    const EmpiricalCDF cdf(evaluate_pairs(sample, fn));

    std::ostringstream text;
    text << "distance\tcumulative_fraction\n";
    const auto values = cdf.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
      text << format_double(values[i]) << '\t'
           << format_double(static_cast<double>(i + 1) / static_cast<double>(values.size()))
           << '\n';
    }
    emit(out, text.str());
    return 0;
  }
};

// ---------------------------------------------------------------- bench

struct BenchCmd {
  GraphInput input;
  RunFlags flags;
  std::vector<double> alphas{0.1, 0.2, 0.4, 0.6, 0.8, 0.9};
  std::vector<std::string> variants{"stoc", "sc", "toc"};
  bool with_discretized = false;
  std::size_t runs = 10;
  std::string out;

  void add_to(CLI::App& app) {
    input.add_to(app);
    flags.add_to(app, false);
    app.add_option("--alphas", alphas, "Grid of alpha_s = alpha_t values")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--variants", variants, "Variants to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"stoc", "sc", "toc"}))
        ->capture_default_str();
    app.add_flag("--with-discretized", with_discretized, "Add a discretized SToC row per alpha");
    app.add_option("--runs", runs, "Runs per row")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--out", out, "Table path (default: stdout)");
  }

  int run() const {
    BenchOptions options;
    options.base = flags.options();
    options.variants.clear();
    for (const auto& v : variants) options.variants.push_back(*parse_variant(v));
    options.alphas = alphas;
    options.discretized_stoc = with_discretized;
    options.runs = runs;
    const auto g = input.load();
    const auto rows = run_bench(g, options);

    std::ostringstream text;
    text << "variant\talpha\truns\tk_mean\tk_stdev\tQ_mean\tQ_stdev\tWCSS_mean\tWCSS_stdev\t"
            "tau_mean\tl_mean\tseconds_mean\n";
    for (const auto& row : rows) {
      const auto& s = row.summary;
      text << to_string(row.variant) << (row.discretize ? "-discretized" : "") << '\t'
           << format_double(row.alpha) << '\t' << row.runs.size() << '\t'
           << format_double(s.clusters.mean) << '\t' << format_double(s.clusters.stdev) << '\t'
           << format_double(s.modularity.mean) << '\t' << format_double(s.modularity.stdev)
           << '\t' << format_double(s.wcss.mean) << '\t' << format_double(s.wcss.stdev) << '\t'
           << format_double(s.tau.mean) << '\t' << format_double(s.radius.mean) << '\t'
           << format_double(s.seconds.mean) << '\n';
    }
    emit(out, text.str());
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attributed graph clustering with tau-close connected clusters"};
  app.require_subcommand(1);

  GenerateCmd generate_cmd;
  TuneCmd tune_cmd;
  ClusterCmd cluster_cmd;
  MetricsCmd metrics_cmd;
  DistanceCdfCmd cdf_cmd;
  BenchCmd bench_cmd;

  auto* generate = app.add_subcommand("generate", "Write a planted-partition attributed graph");
  generate_cmd.add_to(*generate);
  auto* tune = app.add_subcommand("tune", "Estimate tau and l from attraction ratios");
  tune_cmd.add_to(*tune);
  auto* cluster = app.add_subcommand("cluster", "Tune and cluster a graph");
  cluster_cmd.add_to(*cluster);
  auto* metrics = app.add_subcommand("metrics", "Modularity, WCSS and cluster sizes");
  metrics_cmd.add_to(*metrics);
  auto* cdf = app.add_subcommand("distance-cdf", "Sampled cumulative distance distribution");
  cdf_cmd.add_to(*cdf);
  auto* bench = app.add_subcommand("bench", "Compare variants over an alpha grid");
  bench_cmd.add_to(*bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*generate) return generate_cmd.run();
    if (*tune) return tune_cmd.run();
    if (*cluster) return cluster_cmd.run();
    if (*metrics) return metrics_cmd.run();
    if (*cdf) return cdf_cmd.run();
    if (*bench) return bench_cmd.run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
