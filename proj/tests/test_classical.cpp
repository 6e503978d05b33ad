#include <cmath>
#include <set>

#include "doctest.h"
#include "gluedtrees/classical.hpp"
#include "gluedtrees/graph.hpp"
#include "gluedtrees/oracle.hpp"
#include "gluedtrees/rng.hpp"

using namespace gluedtrees;

TEST_CASE("classical generator: columns sum to zero, probability conserved") {
  auto k = ClassicalGenerator::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 0.7);
  for (int j = 0; j < 4; ++j) {
    double colsum = 0;
    for (int i = 0; i < 4; ++i) colsum += k.matrix[(std::size_t)i * 4 + (std::size_t)j];
    CHECK(std::abs(colsum) < 1e-14);
  }
  std::vector<double> p0 = {0.5, 0.25, 0.25, 0.0};
  auto pt = classical_master_evolve(k, p0, 3.7);
  double total = 0;
  for (double x : pt) {
    CHECK(x >= -1e-12);
    total += x;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  auto same = classical_master_evolve(k, p0, 0.0);
  for (int i = 0; i < 4; ++i) CHECK(same[(std::size_t)i] == doctest::Approx(p0[(std::size_t)i]).epsilon(1e-12));
}

TEST_CASE("single edge relaxes exponentially") {
  auto k = ClassicalGenerator::from_edges(2, {{0, 1}}, 1.0);
  for (double t : {0.1, 0.5, 2.0}) {
    auto p = classical_master_evolve(k, std::vector<double>{1.0, 0.0}, t);
    CHECK(p[0] == doctest::Approx((1 + std::exp(-2 * t)) / 2).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx((1 - std::exp(-2 * t)) / 2).epsilon(1e-12));
  }
}

TEST_CASE("column-reduced classical walk stalls at the bottleneck") {
  const int n = 20;
  auto k = ClassicalGenerator::column_chain(n, 1.0);
  std::vector<double> p0((std::size_t)(2 * n + 2), 0.0);
  p0[0] = 1.0;
  auto pt = classical_master_evolve(k, p0, 1e4);
  double total = 0;
  for (double x : pt) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  // exit-column occupancy stays exponentially small: the equilibrium value
  // is 1/(2^{n+2}-2) = 2.4e-7, far below the 2^{-n/2} threshold
  CHECK(pt[(std::size_t)(2 * n + 1)] < std::pow(2.0, -n / 2.0));
  CHECK(pt[(std::size_t)(2 * n + 1)] == doctest::Approx(1.0 / ((1ull << (n + 2)) - 2)).epsilon(1e-3));
}

TEST_CASE("identified trees instance shape") {
  auto inst = make_identified_trees(3, 77);
  CHECK((int)inst.adj.size() == 3 * 8 - 2);
  CHECK(inst.adj[0].size() == 2);
  CHECK(inst.adj[(std::size_t)inst.exit].size() == 2);
  int deg2 = 0;
  for (const auto& l : inst.adj) deg2 += l.size() == 2;
  CHECK(deg2 == 2 + 8);  // entrance, exit, and the 2^n identified leaves
  std::set<std::uint64_t> names(inst.names.begin(), inst.names.end());
  CHECK(names.size() == inst.adj.size());
}

TEST_CASE("identified-trees traversal finds the exit") {
  SUBCASE("n=1 within four queries") {
    auto inst = make_identified_trees(1, 5);
    auto oracle = inst.oracle();
    auto r = traverse_identified_trees(oracle, 100);
    REQUIRE(r.found);
    CHECK(r.exit == inst.exit_name());
    CHECK(r.queries <= 4);
  }
  SUBCASE("exhaustive seeds across sizes, O(n^2) query budget") {
    for (int n : {1, 2, 3, 4, 6, 9, 12}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto inst = make_identified_trees(n, seed * 17 + 1);
        auto oracle = inst.oracle();
        auto r = traverse_identified_trees(oracle, 40 + 12L * n * n);
        REQUIRE_MESSAGE(r.found, "n=", n, " seed=", seed, " note=", r.note);
        CHECK(r.exit == inst.exit_name());
        CHECK(r.queries <= 40 + 6L * n * n);
      }
    }
  }
  SUBCASE("a glued-trees oracle defeats it") {
    auto g = GluedTreesGraph::generate(6, 3);
    g.assign_names(4);
    GraphOracle oracle(g, /*include_colors=*/false);
    auto r = traverse_identified_trees(oracle, 1 << 3);  // 2^{n/2} budget
    CHECK_FALSE(r.found);
    CHECK(!r.note.empty());
  }
}

TEST_CASE("hypercube traversal") {
  SUBCASE("n=1: the single neighbor is the exit") {
    auto inst = make_hypercube(1, 3);
    auto oracle = inst.oracle();
    auto r = traverse_hypercube(oracle, 10);
    REQUIRE(r.found);
    CHECK(r.exit == inst.exit_name());
    CHECK(r.queries <= 2);
  }
  SUBCASE("always the exact antipode, 100 namings at n=10") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto inst = make_hypercube(10, seed + 11);
      auto oracle = inst.oracle();
      auto r = traverse_hypercube(oracle, 4000);
      REQUIRE(r.found);
      CHECK(r.exit == inst.exit_name());
    }
  }
  SUBCASE("query count fits c*n^2") {
    for (int n : {3, 6, 10, 14}) {
      auto inst = make_hypercube(n, 5);
      auto oracle = inst.oracle();
      auto r = traverse_hypercube(oracle, 10000);
      REQUIRE(r.found);
      CHECK(r.queries <= 2 + n * n);
    }
  }
  SUBCASE("non-hypercube oracle trips the level bookkeeping") {
    auto inst = make_identified_trees(3, 9);
    auto oracle = inst.oracle();
    CHECK_THROWS_AS(traverse_hypercube(oracle, 10000), std::runtime_error);
  }
}
