#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "../fixtures.hpp"
#include "../oracle/oracle.hpp"
#include "stoc/distance.hpp"
#include "stoc/error.hpp"
#include "stoc/sketch.hpp"

using namespace stoc;
using stoc::test::node;

namespace {

AttributedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  GraphParts parts;
  for (std::size_t v = 0; v < n; ++v) parts.node_ids.push_back("n" + std::to_string(v));
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (coin(rng)) parts.edges.emplace_back(a, b);
    }
  }
  return AttributedGraph::build(parts);
}

std::vector<NodeId> invert(const SketchView& s, std::size_t n) {
  std::unordered_map<Rank, NodeId> inverse;
  for (NodeId v = 0; v < n; ++v) inverse[node_rank(v, s.hash_seed)] = v;
  std::vector<NodeId> out;
  for (Rank r : s.ranks) out.push_back(inverse.at(r));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> range_set(NodeId lo, NodeId hi) {
  std::vector<NodeId> out;
  for (NodeId v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

}  // namespace

TEST_SUITE("sketch") {
  TEST_CASE("choose_k uses the natural log with a floor of 8") {
    CHECK(choose_k(60'977, 0.9) == 14);
    CHECK(choose_k(1, 0.5) == kMinSketchSize);
    CHECK(choose_k_from_log(81.0, 0.9) == 100);
    CHECK(choose_k(1000, 0.3) == 77);
    CHECK_THROWS_AS(choose_k(100, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(choose_k(100, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(choose_k(0, 0.5), std::invalid_argument);
  }

  TEST_CASE("node ranks are distinct") {
    std::vector<Rank> ranks;
    for (NodeId v = 0; v < 100'000; ++v) ranks.push_back(node_rank(v, 42));
    std::sort(ranks.begin(), ranks.end());
    CHECK(std::adjacent_find(ranks.begin(), ranks.end()) == ranks.end());
    CHECK(node_rank(5, 1) != node_rank(5, 2));
  }

  TEST_CASE("bottom-k of a union equals the merge of bottom-k sketches") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<NodeId> value(0, 60);
    std::uniform_int_distribution<std::size_t> length(0, 40);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<NodeId> a(length(rng)), b(length(rng));
      for (auto& x : a) x = value(rng);
      for (auto& x : b) x = value(rng);
      const std::size_t k = 1 + trial % 20;
      std::vector<NodeId> both = a;
      both.insert(both.end(), b.begin(), b.end());
      const auto expected = make_sketch(both, k, 3).ranks;
      const auto merged = merge_bottom_k(make_sketch(a, k, 3).ranks, make_sketch(b, k, 3).ranks, k);
      CHECK(merged == expected);
    }
  }

  TEST_CASE("sketches are strictly increasing and at most k long") {
    const auto g = random_graph(150, 0.04, 5);
    const auto table = build_sketch_table(g, 2, 16, 77);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto s = table.sketch(v);
      CHECK(s.ranks.size() <= 16);
      CHECK(std::adjacent_find(s.ranks.begin(), s.ranks.end(),
                               [](Rank x, Rank y) { return x >= y; }) == s.ranks.end());
    }
  }

  TEST_CASE("with k >= n propagated sketches invert to the exact balls") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const std::size_t n = 50 * seed;
      const auto g = random_graph(n, 3.0 / static_cast<double>(n), seed);
      const auto adj = oracle::adjacency(g);
      for (int l = 1; l <= 3; ++l) {
        const auto table = build_sketch_table(g, l, n, seed * 31);
        for (NodeId v = 0; v < n; ++v) {
          const auto s = table.sketch(v);
          const auto ball = oracle::ball(adj, v, l);
          CHECK(s.complete);
          CHECK(invert(s, n) == std::vector<NodeId>(ball.begin(), ball.end()));
        }
      }
    }
  }

  TEST_CASE("with small k each sketch is the bottom-k of the exact ball") {
    const auto g = random_graph(200, 0.03, 8);
    for (int l = 1; l <= 3; ++l) {
      const auto table = build_sketch_table(g, l, 10, 1234);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto ball = exact_l_neighborhood(g, v, l);
        const auto expected = make_sketch(ball, 10, 1234);
        const auto s = table.sketch(v);
        CHECK(std::vector<Rank>(s.ranks.begin(), s.ranks.end()) == expected.ranks);
        CHECK(s.complete == expected.cardinality.has_value());
      }
    }
  }

  TEST_CASE("toy and path examples") {
    const auto g = test::toy();
    const auto table = build_sketch_table(g, 1, 8, 9);
    CHECK(invert(table.sketch(node(g, "v0")), 8) == exact_l_neighborhood(g, node(g, "v0"), 1));

    GraphParts path;
    path.node_ids = {"a", "b", "c"};
    path.edges = {{0, 1}, {1, 2}};
    const auto p = AttributedGraph::build(path);
    const auto t2 = build_sketch_table(p, 2, 8, 9);
    CHECK(invert(t2.sketch(0), 3) == std::vector<NodeId>{0, 1, 2});
    const auto t1 = build_sketch_table(p, 1, 8, 9);
    CHECK(invert(t1.sketch(0), 3) == std::vector<NodeId>{0, 1});
  }

  TEST_CASE("parallel build equals the serial reference and is deterministic") {
    const auto g = random_graph(300, 0.02, 12);
    for (int l = 1; l <= 3; ++l) {
      for (std::size_t k : {1u, 8u, 40u}) {
        const auto parallel = build_sketch_table(g, l, k, 5);
        CHECK(parallel == serial::build_sketch_table(g, l, k, 5));
        CHECK(parallel == build_sketch_table(g, l, k, 5));
      }
    }
  }

  TEST_CASE("estimator edge cases") {
    const auto a = make_sketch(range_set(0, 9), 16, 1);
    CHECK(estimate_jaccard_distance(a.view(), a.view()) == 0.0);
    const auto b = make_sketch(range_set(10, 19), 16, 1);
    CHECK(estimate_jaccard_distance(a.view(), b.view()) == 1.0);
    const auto other_k = make_sketch(range_set(0, 9), 8, 1);
    CHECK_THROWS_AS(estimate_jaccard_distance(a.view(), other_k.view()), std::invalid_argument);
    const auto other_seed = make_sketch(range_set(0, 9), 16, 2);
    CHECK_THROWS_AS(estimate_jaccard_distance(a.view(), other_seed.view()), std::invalid_argument);
    // Complete sketches give the exact answer even when the union exceeds k.
    const auto c = make_sketch(range_set(5, 20), 16, 1);
    CHECK(estimate_jaccard_distance(a.view(), c.view()) == doctest::Approx(1.0 - 5.0 / 21.0));
  }

  TEST_CASE("estimates of a fixed pair are accurate on average") {
    const auto x = range_set(1, 100);
    const auto y = range_set(51, 150);
    const double truth = 1.0 - 50.0 / 150.0;
    double sum = 0.0;
    int within = 0;
    const int seeds = 60;
    for (int seed = 0; seed < seeds; ++seed) {
      const double est = estimate_jaccard_distance(make_sketch(x, 64, seed).view(),
                                                   make_sketch(y, 64, seed).view());
      sum += est;
      within += std::abs(est - truth) <= 0.15 ? 1 : 0;
    }
    CHECK(std::abs(sum / seeds - truth) <= 0.05);
    CHECK(within >= seeds * 9 / 10);
  }

  TEST_CASE("sketch distances on G(500, 0.02) stay within epsilon") {
    const auto g = random_graph(500, 0.02, 21);
    const std::size_t k = choose_k(500, 0.3);
    const auto table = build_sketch_table(g, 2, k, 17);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<NodeId> pick(0, 499);
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
      const NodeId a = pick(rng);
      const NodeId b = pick(rng);
      const double exact = topological_distance_exact(g, a, b, 2);
      ok += std::abs(topological_distance_sketch(table, a, b, 2) - exact) <= 0.3 ? 1 : 0;
    }
    CHECK(ok >= 90);
  }

  TEST_CASE("sketch distance with k >= union is exact") {
    const auto g = random_graph(60, 0.05, 2);
    const auto table = build_sketch_table(g, 2, 60, 8);
    for (NodeId a = 0; a < 60; ++a) {
      for (NodeId b = 0; b < 60; ++b) {
        CHECK(std::abs(topological_distance_sketch(table, a, b, 2) -
                       topological_distance_exact(g, a, b, 2)) <= 1e-12);
      }
    }
    CHECK(topological_distance_sketch(table, 3, 3, 2) == 0.0);
    CHECK_THROWS_AS(topological_distance_sketch(table, 0, 1, 1), std::invalid_argument);
  }

  TEST_CASE("cache round-trips bit-exactly and checks its header") {
    const auto g = random_graph(120, 0.04, 3);
    const auto table = build_sketch_table(g, 2, 12, 1001);
    std::stringstream buffer;
    save_sketch_table(table, g.topology_digest(), buffer);
    const std::string bytes = buffer.str();

    std::istringstream in(bytes);
    const auto loaded = load_sketch_table(in, g.topology_digest());
    CHECK(loaded == table);

    std::stringstream again;
    save_sketch_table(loaded, g.topology_digest(), again);
    CHECK(again.str() == bytes);

    std::istringstream wrong_digest(bytes);
    CHECK_THROWS_AS(load_sketch_table(wrong_digest, g.topology_digest() + 1), DataError);
    std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(load_sketch_table(truncated), DataError);
    std::istringstream garbage("not a sketch table");
    CHECK_THROWS_AS(load_sketch_table(garbage), DataError);
  }

  TEST_CASE("extending a table adds one round") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = random_graph(120, 0.03, seed);
      auto table = build_sketch_table(g, 1, 16, seed);
      for (int l = 2; l <= 4; ++l) {
        table = extend_sketch_table(g, table);
        CHECK(table.radius() == l);
        CHECK(table == build_sketch_table(g, l, 16, seed));
      }
    }
  }
}
