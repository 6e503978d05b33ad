#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gluedtrees/graph.hpp"
#include "gluedtrees/linalg.hpp"
#include "gluedtrees/rng.hpp"
#include "gluedtrees/walk.hpp"

using namespace gluedtrees;

namespace {

std::vector<cplx> random_state(int dim, Rng& rng) {
  std::vector<cplx> v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  normalize(v);
  return v;
}

}  // namespace

TEST_CASE("tridiagonal eigensolver matches the uniform-chain closed form") {
  for (int m : {2, 3, 8, 33, 200}) {
    auto es = eig_tridiagonal(std::vector<double>(m, 0.0), std::vector<double>(m - 1, 1.0));
    for (int k = 0; k < m; ++k) {
      const double exact = 2.0 * std::cos(std::numbers::pi * (m - k) / (m + 1));
      CHECK(es.values[(std::size_t)k] == doctest::Approx(exact).epsilon(1e-12));
    }
    // residual and orthonormality
    for (int k = 0; k < m; ++k) {
      double res = 0, nrm = 0;
      for (int i = 0; i < m; ++i) {
        double hx = 0;
        if (i > 0) hx += es.vec(i - 1, k);
        if (i + 1 < m) hx += es.vec(i + 1, k);
        res = std::max(res, std::abs(hx - es.values[(std::size_t)k] * es.vec(i, k)));
        nrm += es.vec(i, k) * es.vec(i, k);
      }
      CHECK(res < 1e-12);
      CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("dense symmetric eigensolver agrees with the tridiagonal path") {
  Rng rng(5);
  const int m = 40;
  std::vector<double> diag(m), off(m - 1);
  for (auto& x : diag) x = rng.uniform() - 0.5;
  for (auto& x : off) x = rng.uniform() + 0.1;
  auto tri = eig_tridiagonal(diag, off);
  std::vector<double> dense((std::size_t)m * m, 0.0);
  for (int i = 0; i < m; ++i) dense[(std::size_t)i * m + i] = diag[(std::size_t)i];
  for (int i = 0; i + 1 < m; ++i)
    dense[(std::size_t)i * m + i + 1] = dense[(std::size_t)(i + 1) * m + i] = off[(std::size_t)i];
  auto full = eig_symmetric(dense, m);
  for (int k = 0; k < m; ++k)
    CHECK(full.values[(std::size_t)k] == doctest::Approx(tri.values[(std::size_t)k]).epsilon(1e-11));

  // eigenvector residuals on a dense random symmetric matrix
  const int d2 = 30;
  std::vector<double> a((std::size_t)d2 * d2);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j <= i; ++j)
      a[(std::size_t)i * d2 + j] = a[(std::size_t)j * d2 + i] = rng.uniform() - 0.5;
  auto es = eig_symmetric(a, d2);
  for (int k = 0; k < d2; ++k) {
    double res = 0;
    for (int i = 0; i < d2; ++i) {
      double hx = 0;
      for (int j = 0; j < d2; ++j) hx += a[(std::size_t)i * d2 + j] * es.vec(j, k);
      res = std::max(res, std::abs(hx - es.values[(std::size_t)k] * es.vec(i, k)));
    }
    CHECK(res < 1e-11);
  }
}

TEST_CASE("adjacency hamiltonian entries") {
  auto g = GluedTreesGraph::generate(1, 4);
  auto h = WalkHamiltonian::adjacency(g, 0.5);
  auto dense = h.matrix.dense();
  int nonzero = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double x = dense[(std::size_t)i * 6 + j];
      CHECK(dense[(std::size_t)j * 6 + i] == x);
      if (i == j) CHECK(x == 0.0);
      if (x != 0.0) {
        CHECK(x == 0.5);
        ++nonzero;
      }
    }
  // G'_1 has 8 edges (4 tree edges plus the alternating 4-cycle), which the
  // degree sum 2+2+4*3 = 16 pins down.
  CHECK(nonzero == 16);
  CHECK_THROWS_AS(WalkHamiltonian::adjacency(g, 0.0), std::invalid_argument);

  auto single = WalkHamiltonian::from_edges(2, {{0, 1}}, 1.0);
  auto d2 = single.matrix.dense();
  CHECK(d2[1] == 1.0);
  CHECK(d2[2] == 1.0);
  CHECK(d2[0] == 0.0);
}

TEST_CASE("evolve: identity at t=0, two-site Rabi flop, unitarity") {
  auto h = WalkHamiltonian::from_edges(2, {{0, 1}}, 1.0);
  std::vector<cplx> psi0 = {1.0, 0.0};
  auto same = evolve(h, psi0, 0.0);
  CHECK(same[0] == cplx(1.0));

  auto flipped = evolve(h, psi0, std::numbers::pi / 2);
  CHECK(std::abs(flipped[1]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(flipped[0]) < 1e-12);

  auto chain = ColumnChain::for_graph(3);
  std::vector<cplx> start(static_cast<std::size_t>(chain.sites), 0.0);
  start[0] = 1.0;
  auto es = chain.eig();
  auto out = es.evolve(start, 100.0);
  CHECK(norm(out) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(evolve(h, std::vector<cplx>(3, 0.0), 1.0), std::invalid_argument);
}

TEST_CASE("evolve properties: unitarity, reversal, gamma scaling, krylov/dense agreement") {
  Rng rng(31);
  auto g = GluedTreesGraph::generate(4, 8);
  auto h = WalkHamiltonian::adjacency(g);
  for (int rep = 0; rep < 5; ++rep) {
    auto psi = random_state(h.dim, rng);
    const double t = rng.uniform() * 1000.0;
    auto fwd = evolve(h, psi, t);
    CHECK(norm(fwd) == doctest::Approx(1.0).epsilon(1e-12));
    auto back = evolve(h, fwd, -t);
    double diff = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) diff = std::max(diff, std::abs(back[i] - psi[i]));
    CHECK(diff < 1e-10);
  }

  // gamma scaling: (gamma, t) == (c*gamma, t/c)
  auto h2 = WalkHamiltonian::adjacency(g, 2.0 * h.gamma);
  auto psi = random_state(h.dim, rng);
  auto a = evolve(h, psi, 3.0);
  auto b = evolve(h2, psi, 1.5);
  double diff = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  CHECK(diff < 1e-10);

  // krylov route vs dense route
  auto kry = krylov_evolve(h.matrix, psi, 7.5);
  auto dns = evolve(h, psi, 7.5);
  diff = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) diff = std::max(diff, std::abs(kry[i] - dns[i]));
  CHECK(diff < 1e-10);
}

TEST_CASE("column chain couplings") {
  auto c1 = ColumnChain::for_graph(1);
  REQUIRE(c1.sites == 4);
  CHECK(c1.couplings[0] == doctest::Approx(1.0));
  CHECK(c1.couplings[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(c1.couplings[2] == doctest::Approx(1.0));

  auto c4 = ColumnChain::for_graph(4);
  CHECK(c4.sites == 10);
  CHECK(c4.defect_bond == 4);
  for (int i = 0; i + 1 < 10; ++i)
    CHECK(c4.couplings[(std::size_t)i] == doctest::Approx(i == 4 ? std::sqrt(2.0) : 1.0));

  auto half = ColumnChain::for_graph(4, 0.5);
  CHECK(half.couplings[0] == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(half.couplings[4] == doctest::Approx(1.0));

  auto lemma = ColumnChain::hitting_chain(5);
  CHECK(lemma.sites == 10);
  CHECK(lemma.defect_bond == 4);  // between sites 5 and 6, 1-indexed
}

TEST_CASE("column projection and lift") {
  auto g = GluedTreesGraph::generate(3, 15);
  std::vector<cplx> ent(static_cast<std::size_t>(g.vertex_count()), 0.0);
  ent[0] = 1.0;
  auto cols = project_to_columns(g, ent);
  CHECK(std::abs(cols[0] - 1.0) < 1e-15);
  for (int j = 1; j < g.num_columns(); ++j) CHECK(std::abs(cols[(std::size_t)j]) < 1e-15);

  // uniform superposition over column n has unit coefficient at slot n
  std::vector<cplx> mid(static_cast<std::size_t>(g.vertex_count()), 0.0);
  const int n = g.n();
  for (int v = g.column_begin(n); v < g.column_begin(n + 1); ++v)
    mid[(std::size_t)v] = 1.0 / std::sqrt(double(g.column_size(n)));
  auto cm = project_to_columns(g, mid);
  CHECK(std::abs(cm[(std::size_t)n] - 1.0) < 1e-14);

  // lift then project is the identity on column states
  auto lifted = lift_from_columns(g, cm);
  auto again = project_to_columns(g, lifted);
  for (int j = 0; j < g.num_columns(); ++j)
    CHECK(std::abs(again[(std::size_t)j] - cm[(std::size_t)j]) < 1e-14);
}

TEST_CASE("full walk stays in the column subspace and matches the chain") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = GluedTreesGraph::generate(3, seed);
    auto h = WalkHamiltonian::adjacency(g);
    WalkPropagator prop(h);
    auto chain_es = ColumnChain::for_graph(3).eig();
    std::vector<cplx> ent(static_cast<std::size_t>(g.vertex_count()), 0.0);
    ent[0] = 1.0;
    std::vector<cplx> c0(static_cast<std::size_t>(g.num_columns()), 0.0);
    c0[0] = 1.0;
    for (double t : {0.0, 1.0, 2.5, 7.0, 12.0}) {
      auto full = prop.at(ent, t);
      auto cols = project_to_columns(g, full);
      auto red = chain_es.evolve(c0, t);
      for (int j = 0; j < g.num_columns(); ++j)
        CHECK(std::abs(cols[(std::size_t)j] - red[(std::size_t)j]) < 1e-10);
      // projection loses no weight: the walk never leaves the subspace
      double colnorm = 0;
      for (auto& x : cols) colnorm += std::norm(x);
      CHECK(colnorm == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("krylov route at n=8 reproduces the column-chain amplitudes") {
  // 1022 vertices: above the dense one-shot switchover, so evolve() runs
  // the Lanczos propagator; column invariance supplies the exact answer.
  auto g = GluedTreesGraph::generate(8, 44);
  auto h = WalkHamiltonian::adjacency(g);
  auto chain_es = ColumnChain::for_graph(8).eig();
  std::vector<cplx> ent((std::size_t)g.vertex_count(), 0.0);
  ent[0] = 1.0;
  std::vector<cplx> c0((std::size_t)g.num_columns(), 0.0);
  c0[0] = 1.0;
  for (double t : {3.0, 9.5, 17.0}) {
    auto full = evolve(h, ent, t);
    CHECK(norm(full) == doctest::Approx(1.0).epsilon(1e-12));
    auto cols = project_to_columns(g, full);
    auto red = chain_es.evolve(c0, t);
    for (int j = 0; j < g.num_columns(); ++j)
      CHECK(std::abs(cols[(std::size_t)j] - red[(std::size_t)j]) < 1e-10);
  }
}

TEST_CASE("exit probability curve basics") {
  std::vector<double> times = {0.0, 1.0, 2.0};
  auto curve = exit_probability_curve(4, times);
  CHECK(curve[0] == 0.0);
  for (double p : curve) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("exit curve n=100: wavefront arrives near t=n with appreciable weight") {
  const int n = 100;
  std::vector<double> times;
  for (double t = 0.0; t <= 1.5 * n; t += 0.25) times.push_back(t);
  auto curve = exit_probability_curve(n, times);
  std::size_t i = 1;
  while (i + 1 < curve.size() &&
         !(curve[i] > 1e-8 && curve[i] > curve[i - 1] && curve[i] >= curve[i + 1]))
    ++i;
  const double t_first = times[i];
  CHECK(t_first >= 0.8 * n);
  CHECK(t_first <= 1.3 * n);
  CHECK(curve[i] > std::pow(n, -2.0 / 3.0) / 10.0);
}

TEST_CASE("lemma 1: closed form beats the bound, first term beats 1/2n") {
  SUBCASE("spec example n=4") {
    const double tau = lemma1_tau(4, 0.5);
    auto r = lemma1_average(4, 0.5, tau);
    CHECK(r.first_term >= 1.0 / 8.0);
    CHECK(r.closed_form.probability > 1.0 / 16.0);
  }
  SUBCASE("sweep") {
    for (int n : {2, 3, 7, 12, 25, 40}) {
      for (double eps : {0.1, 0.5}) {
        const double tau = lemma1_tau(n, eps);
        auto r = lemma1_average(n, eps, tau);
        CHECK(r.first_term >= 1.0 / (2.0 * n));
        CHECK(r.closed_form.probability > r.bound);
      }
    }
  }
  SUBCASE("monte carlo agrees with the closed form") {
    const double tau = lemma1_tau(6, 0.5);
    auto r = lemma1_average(6, 0.5, tau, 100000, 99);
    REQUIRE(r.sampled.has_value());
    const double p = r.closed_form.probability;
    const double sigma = std::sqrt(p * (1 - p) / 100000.0) * 3.0 + 3e-3;
    CHECK(std::abs(r.sampled->probability - p) < sigma);
  }
  CHECK_THROWS_AS(lemma1_average(4, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lemma1_average(4, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("theorem 1 experiment") {
  auto r8 = theorem1_experiment(8, 0.5);
  CHECK(r8.average.closed_form.probability > 1.0 / 32.0);
  CHECK(r8.average.closed_form.probability <= 1.0);

  auto r4 = theorem1_experiment(4, 0.9);
  CHECK(r4.average.closed_form.probability > 0.0125);
}
