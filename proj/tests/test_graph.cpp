#include <algorithm>
#include <set>
#include <thread>

#include "doctest.h"
#include "gluedtrees/graph.hpp"
#include "gluedtrees/oracle.hpp"
#include "gluedtrees/rng.hpp"
#include "gluedtrees/serialize.hpp"

using namespace gluedtrees;

TEST_CASE("column sizes and vertex count") {
  auto g = GluedTreesGraph::generate(4, 7);
  CHECK(g.vertex_count() == 62);
  const int expect[] = {1, 2, 4, 8, 16, 16, 8, 4, 2, 1};
  for (int j = 0; j < 10; ++j) CHECK(g.column_size(j) == expect[j]);

  for (int n = 1; n <= 8; ++n) {
    auto h = GluedTreesGraph::generate(n, 11);
    CHECK(h.vertex_count() == (1 << (n + 2)) - 2);
    for (int j = 0; j <= n; ++j) CHECK(h.column_size(j) == 1 << j);
    for (int j = n + 1; j <= 2 * n + 1; ++j) CHECK(h.column_size(j) == 1 << (2 * n + 1 - j));
  }
}

TEST_CASE("degrees: entrance and exit 2, everything else 3") {
  for (int n : {1, 2, 5}) {
    auto g = GluedTreesGraph::generate(n, 3);
    CHECK(g.degree(g.entrance()) == 2);
    CHECK(g.degree(g.exit_vertex()) == 2);
    for (int v = 1; v < g.vertex_count() - 1; ++v) CHECK(g.degree(v) == 3);
  }
}

TEST_CASE("edges only join adjacent columns") {
  auto g = GluedTreesGraph::generate(5, 19);
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int s = 0; s < g.degree(v); ++s) {
      const int u = g.adjacent(v)[(std::size_t)s];
      CHECK(std::abs(g.column_of(u) - g.column_of(v)) == 1);
    }
}

TEST_CASE("central edges form a single alternating cycle") {
  for (int n : {1, 2, 3, 6}) {
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      auto g = GluedTreesGraph::generate(n, seed);
      // walk the cycle starting from any left leaf
      const int start = g.column_begin(n);
      int prev = -1, cur = start, len = 0;
      do {
        int next = -1;
        for (int s = 0; s < g.degree(cur); ++s) {
          const int u = g.adjacent(cur)[(std::size_t)s];
          const int cu = g.column_of(u);
          if ((cu == n || cu == n + 1) && u != prev) next = u;
        }
        REQUIRE(next != -1);
        // alternation: consecutive cycle vertices sit in opposite leaf columns
        CHECK(g.column_of(next) != g.column_of(cur));
        prev = cur;
        cur = next;
        ++len;
      } while (cur != start);
      CHECK(len == 1 << (n + 1));
    }
  }
}

TEST_CASE("same seed reproduces the graph byte for byte") {
  auto a = GluedTreesGraph::generate(4, 12345);
  auto b = GluedTreesGraph::generate(4, 12345);
  a.assign_names(77);
  b.assign_names(77);
  a.assign_coloring(88);
  b.assign_coloring(88);
  CHECK(a == b);
  CHECK(a.serialize() == b.serialize());
  auto c = GluedTreesGraph::generate(4, 12346);
  CHECK_FALSE(c == GluedTreesGraph::generate(4, 12345));
}

TEST_CASE("generation rejects bad sizes") {
  CHECK_THROWS_AS(GluedTreesGraph::generate(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(GluedTreesGraph::generate(30, 1, /*max_vertices=*/1 << 20), std::invalid_argument);
}

TEST_CASE("naming: entrance 0, all distinct, reserved strings never used") {
  auto g = GluedTreesGraph::generate(4, 5);
  g.assign_names(21);
  CHECK(g.name_of(g.entrance()).is_zero());
  CHECK(g.name_of(g.entrance()).width() == 8);
  std::set<std::uint64_t> seen;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto nm = g.name_of(v);
    CHECK_FALSE(nm.is_all_ones());
    CHECK(seen.insert(nm.bits()).second);
  }
}

TEST_CASE("naming: n=2 fills the space exactly, n=1 is rejected") {
  auto g2 = GluedTreesGraph::generate(2, 9);
  g2.assign_names(10);  // 14 vertices, 14 usable names
  std::set<std::uint64_t> used;
  for (int v = 0; v < g2.vertex_count(); ++v) used.insert(g2.name_of(v).bits());
  CHECK(used.size() == 14);

  auto g1 = GluedTreesGraph::generate(1, 9);
  CHECK_THROWS_AS(g1.assign_names(10), std::invalid_argument);
}

TEST_CASE("coloring consistency across seeds and sizes") {
  for (int n = 2; n <= 8; ++n) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto g = GluedTreesGraph::generate(n, seed);
      g.assign_names(seed + 1);
      g.assign_coloring(seed + 2);
      for (int v = 0; v < g.vertex_count(); ++v) {
        bool used[kNumEdgeColors] = {};
        for (int s = 0; s < g.degree(v); ++s) {
          const int c = g.edge_color(v, s);
          REQUIRE(c >= 0);
          REQUIRE(c < kNumEdgeColors);
          REQUIRE_FALSE(used[c]);
          used[c] = true;
        }
      }
    }
  }
}

TEST_CASE("entrance edges get distinct letters") {
  auto g = GluedTreesGraph::generate(4, 2);
  g.assign_names(3);
  g.assign_coloring(4);
  const int c0 = g.edge_color(0, 0), c1 = g.edge_color(0, 1);
  CHECK(c0 / 3 != c1 / 3);
}

TEST_CASE("colored oracle: involution, reserved replies, counting") {
  auto g = GluedTreesGraph::generate(4, 31);
  g.assign_names(32);
  g.assign_coloring(33);
  GraphOracle oracle(g);

  SUBCASE("non-vertex and missing-color queries answer all-ones") {
    // find a bit string that is not a name
    std::uint64_t probe = 0;
    while (g.vertex_by_name(VertexName(probe, 8)) >= 0) ++probe;
    CHECK(oracle.neighbor_by_color(VertexName(probe, 8), 0).is_all_ones());
    CHECK(oracle.neighbor_by_color(oracle.not_a_vertex(), 0).is_all_ones());

    const auto ent = oracle.entrance_name();
    int present[kNumEdgeColors] = {};
    for (int s = 0; s < g.degree(0); ++s) present[g.edge_color(0, s)] = 1;
    for (int c = 0; c < kNumEdgeColors; ++c)
      if (!present[c]) CHECK(oracle.neighbor_by_color(ent, c).is_all_ones());
  }

  SUBCASE("v_c(v_c(a)) = a for every vertex and incident color") {
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto a = g.name_of(v);
      for (int s = 0; s < g.degree(v); ++s) {
        const int c = g.edge_color(v, s);
        const auto b = oracle.neighbor_by_color(a, c);
        REQUIRE_FALSE(b.is_all_ones());
        CHECK(oracle.neighbor_by_color(b, c) == a);
      }
    }
  }

  SUBCASE("neighbor replies and counting") {
    const auto before = oracle.query_count();
    auto ns = oracle.neighbors(oracle.entrance_name());
    CHECK(ns.size() == 2);
    auto col1 = oracle.neighbors(ns[0].name);
    CHECK(col1.size() == 3);
    CHECK(oracle.neighbors(oracle.not_a_vertex()).empty());
    CHECK(oracle.query_count() == before + 3);
  }

  SUBCASE("query counter is exact under concurrent readers") {
    const auto before = oracle.query_count();
    constexpr int kThreads = 4, kPer = 500;
    std::vector<std::thread> ts;
    for (int i = 0; i < kThreads; ++i)
      ts.emplace_back([&oracle] {
        for (int k = 0; k < kPer; ++k) oracle.neighbors(oracle.entrance_name());
      });
    for (auto& t : ts) t.join();
    CHECK(oracle.query_count() == before + kThreads * kPer);
  }
}

TEST_CASE("name-only oracle variant withholds colors") {
  auto g = GluedTreesGraph::generate(3, 41);
  g.assign_names(42);
  g.assign_coloring(43);
  GraphOracle oracle(g, /*include_colors=*/false);
  auto ns = oracle.neighbors(oracle.entrance_name());
  REQUIRE(ns.size() == 2);
  CHECK(ns[0].color == kNoColor);
  CHECK_THROWS_AS(oracle.neighbor_by_color(oracle.entrance_name(), 0), std::logic_error);
}

TEST_CASE("serialization round trip and tamper detection") {
  auto g = GluedTreesGraph::generate(4, 101);
  g.assign_names(102);
  g.assign_coloring(103);
  const auto bytes = g.serialize();
  CHECK(bytes.size() < (1u << 20));
  CHECK(GluedTreesGraph::deserialize(bytes) == g);
  CHECK(g.serialize() == bytes);

  auto bad = bytes;
  bad[bad.size() - 3] ^= 1;  // corrupt the checksum digits
  CHECK_THROWS_AS(GluedTreesGraph::deserialize(bad), ParseError);

  auto truncated = bytes.substr(0, bytes.size() / 2);
  CHECK_THROWS_AS(GluedTreesGraph::deserialize(truncated), ParseError);

  CHECK_THROWS_AS(GluedTreesGraph::deserialize("gluedtrees-graph v9\nn 3\n"), ParseError);

  // unnamed, uncolored graphs round trip too
  auto plain = GluedTreesGraph::generate(3, 7);
  CHECK(GluedTreesGraph::deserialize(plain.serialize()) == plain);
}

TEST_CASE("serialization round trips across random shapes") {
  Rng rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + (int)rng.below(5);
    auto g = GluedTreesGraph::generate(n, rng.next());
    const bool named = rng.below(2) == 1;
    if (named) g.assign_names(rng.next());
    if (named && rng.below(2) == 1) g.assign_coloring(rng.next());
    CHECK(GluedTreesGraph::deserialize(g.serialize()) == g);
  }
}

TEST_CASE("n=1 structure: single 4-cycle through both leaf columns") {
  auto g = GluedTreesGraph::generate(1, 77);
  CHECK(g.vertex_count() == 6);
  CHECK(g.column_size(1) == 2);
  CHECK(g.column_size(2) == 2);
  // each left leaf joins both right leaves
  for (int v = g.column_begin(1); v < g.column_begin(2); ++v) {
    std::set<int> right;
    for (int s = 0; s < g.degree(v); ++s) {
      const int u = g.adjacent(v)[(std::size_t)s];
      if (g.column_of(u) == 2) right.insert(u);
    }
    CHECK(right.size() == 2);
  }
}
