#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gluedtrees/bessel.hpp"
#include "gluedtrees/line.hpp"
#include "gluedtrees/rng.hpp"
#include "gluedtrees/walk.hpp"

using namespace gluedtrees;

TEST_CASE("bessel: recurrence agrees with the integral representation") {
  for (double x : {0.5, 3.0, 17.0, 80.0, 100.0}) {
    for (int nu : {0, 1, 2, 7, 20, 41}) {
      CHECK(std::abs(bessel_j(nu, x) - bessel_j_integral(nu, x)) < 1e-10);
    }
  }
  // parity for negative orders
  CHECK(bessel_j(-3, 5.0) == doctest::Approx(-bessel_j(3, 5.0)));
  CHECK(bessel_j(-4, 5.0) == doctest::Approx(bessel_j(4, 5.0)));
  // reference values
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(5, 0.0) == 0.0);
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-13));
  CHECK(bessel_j(1, 2.0) == doctest::Approx(0.5767248077568734).epsilon(1e-13));
}

TEST_CASE("infinite line propagator: identity at t=0 and truncated-chain match") {
  CHECK(infinite_line_propagator(3, 3, 0.0) == cplx(1.0));
  CHECK(infinite_line_propagator(3, 5, 0.0) == cplx(0.0));

  // dense evolution on a 401-site chain, sites -200..200
  const int L = 401, mid = 200;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < L; ++i) edges.emplace_back(i, i + 1);
  auto h = WalkHamiltonian::from_edges(L, edges, 1.0);
  for (double t : {7.0, 40.0}) {
    std::vector<cplx> psi(L, 0.0);
    const int j = -5;
    psi[(std::size_t)(mid + j)] = 1.0;
    auto out = krylov_evolve(h.matrix, psi, t);
    for (int k = -20; k <= 20; ++k) {
      const cplx expect = infinite_line_propagator(j, k, t);
      CHECK(std::abs(out[(std::size_t)(mid + k)] - expect) < 1e-8);
    }
  }
}

TEST_CASE("wavefront profile: decay beyond the widened front, -1/3 front scaling") {
  auto w = wavefront_profile(50.0, 120);
  CHECK(w.decay_ok);
  // frozen truth for the profile at distance 120 (scipy cross-check 1.1476e-5)
  const std::size_t idx120 = (std::size_t)(120 - w.distances.front());
  CHECK(w.distances[idx120] == 120);
  CHECK(w.magnitudes[idx120] == doctest::Approx(1.1476221795665e-05).epsilon(1e-6));
  // still above 1e-6 just past the naive 2.02t edge; the Airy width matters
  CHECK(w.magnitudes[idx120] > 1e-6);
  // far past the widened edge it really is tiny
  const std::size_t idx150 = (std::size_t)(150 - w.distances.front());
  CHECK(w.magnitudes[idx150] < 1e-12);
  // |G| at distance 0 is |J_0(100)|
  auto w2 = wavefront_profile(50.0, 100);
  CHECK(w2.distances.front() == 0);
  CHECK(w2.magnitudes.front() == doctest::Approx(std::abs(bessel_j(0, 100.0))).epsilon(1e-12));
  // front constant steady over a decade (J_d(d) ~ 0.4473 d^{-1/3})
  CHECK(w.front_const / w.front_const_decade > 1.0 / 3.0);
  CHECK(w.front_const / w.front_const_decade < 3.0);
  CHECK(w.front_const == doctest::Approx(0.4473).epsilon(0.05));
}

TEST_CASE("transmission coefficient") {
  SUBCASE("alpha=sqrt2 closed form") {
    auto r = transmission(std::numbers::pi / 2, std::sqrt(2.0));
    CHECK(std::norm(r.transmission) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    auto r6 = transmission(std::numbers::pi / 6, std::sqrt(2.0));
    CHECK(std::norm(r6.transmission) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("no defect means full transmission") {
    for (double p : {0.3, 1.0, 2.5}) {
      auto r = transmission(p, 1.0);
      CHECK(std::norm(r.transmission) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(r.reflection) < 1e-12);
    }
  }
  SUBCASE("unitarity on random momenta and strengths") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
      const double p = 1e-3 + (std::numbers::pi - 2e-3) * rng.uniform();
      const double alpha = 0.1 + 3.0 * rng.uniform();
      auto r = transmission(p, alpha);
      CHECK(std::norm(r.transmission) + std::norm(r.reflection) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("|T|^2 matches 8 sin^2 p/(1+8 sin^2 p) across the band") {
    for (int g = 1; g < 32; ++g) {
      const double p = std::numbers::pi * g / 32;
      const double s2 = std::sin(p) * std::sin(p);
      CHECK(std::norm(transmission(p, std::sqrt(2.0)).transmission) ==
            doctest::Approx(8 * s2 / (1 + 8 * s2)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(transmission(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(transmission(std::numbers::pi, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(transmission(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("wave packet scattering") {
  SUBCASE("no defect transmits everything") {
    PacketSpec spec;
    spec.sigma = 10;
    spec.offset = 120;
    auto r = wavepacket_scatter(1.0, spec);
    CHECK(r.transmitted >= 0.999);
    CHECK(r.transmitted + r.reflected == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("narrow-band packet at pi/2 transmits about 8/9") {
    PacketSpec spec;
    spec.sigma = 20;
    spec.offset = 150;
    auto r = wavepacket_scatter(std::sqrt(2.0), spec);
    CHECK(r.transmitted == doctest::Approx(8.0 / 9.0).epsilon(0.02));
    CHECK(r.transmitted == doctest::Approx(r.predicted).epsilon(0.02));
    CHECK(r.transmitted + r.reflected == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("off-center momentum matches the quadrature prediction") {
    PacketSpec spec;
    spec.sigma = 12;
    spec.offset = 150;
    spec.momentum = 1.0;
    auto r = wavepacket_scatter(std::sqrt(2.0), spec);
    CHECK(r.transmitted == doctest::Approx(r.predicted).epsilon(0.02));
  }
  SUBCASE("packet leaving the band is rejected") {
    PacketSpec spec;
    spec.sigma = 10;
    spec.momentum = 0.05;
    CHECK_THROWS_AS(wavepacket_scatter(1.0, spec), std::invalid_argument);
  }
}

TEST_CASE("finite line propagator") {
  SUBCASE("initial condition") {
    const int L = 9;
    const int tr = finite_line_truncation(0.0, L);
    for (int j = 1; j <= L; ++j)
      for (int k = 1; k <= L; ++k) {
        const cplx g = finite_line_propagator(j, k, 0.0, L, tr);
        CHECK(std::abs(g - (j == k ? cplx(1) : cplx(0))) < 1e-14);
      }
  }
  SUBCASE("virtual boundary sites vanish") {
    const int L = 12;
    const int tr = finite_line_truncation(9.0, L);
    CHECK(std::abs(finite_line_propagator(3, 0, 9.0, L, tr)) < 1e-12);
    CHECK(std::abs(finite_line_propagator(3, L + 1, 9.0, L, tr)) < 1e-12);
  }
  SUBCASE("L=20 image sum matches the dense chain exponential") {
    const int L = 20;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < L; ++i) edges.emplace_back(i, i + 1);
    auto h = WalkHamiltonian::from_edges(L, edges, 1.0);
    WalkPropagator prop(h);
    const double t = 12.0;
    const int tr = finite_line_truncation(t, L);
    for (int j : {1, 7, 20})
      for (int k = 1; k <= L; ++k) {
        const cplx expect = prop.amplitude(j - 1, k - 1, t);
        CHECK(std::abs(finite_line_propagator(j, k, t, L, tr) - expect) < 1e-8);
      }
  }
  SUBCASE("doubling the truncation changes nothing") {
    const int L = 20;
    const int tr = finite_line_truncation(12.0, L);
    const cplx a = finite_line_propagator(1, 20, 12.0, L, tr);
    const cplx b = finite_line_propagator(1, 20, 12.0, L, 2 * tr);
    CHECK(std::abs(a - b) < 1e-12);
  }
  CHECK_THROWS_AS(finite_line_propagator(1, 5, 50.0, 20, 1), std::invalid_argument);
}

TEST_CASE("quantization roots: counts, paper's n=5 case, dense cross-check") {
  SUBCASE("n=5: 8 real roots, 2 bound states, 10 eigenvalues") {
    auto rep = quantization_roots(5);
    CHECK(rep.real_roots.size() == 8);
    CHECK(rep.bound_states.size() == 2);
    CHECK(rep.eigenvalues.size() == 10);
    int plus = 0, minus = 0;
    for (const auto& r : rep.real_roots) (r.branch > 0 ? plus : minus)++;
    CHECK(plus == 4);
    CHECK(minus == 4);
  }
  SUBCASE("n=2 boundary case: no bound states yet") {
    auto rep = quantization_roots(2);
    CHECK(rep.real_roots.size() == 4);
    CHECK(rep.bound_states.empty());
    for (double e : rep.eigenvalues) CHECK(std::abs(e) < 2.0);
  }
  SUBCASE("real roots lie in [-2,2], bound states outside, counts for n>=3") {
    for (int n : {3, 4, 9, 17}) {
      auto rep = quantization_roots(n);
      CHECK((int)rep.real_roots.size() == 2 * n - 2);
      CHECK(rep.bound_states.size() == 2);
      for (const auto& r : rep.real_roots) CHECK(std::abs(r.energy) <= 2.0);
      for (const auto& b : rep.bound_states) CHECK(std::abs(b.energy) > 2.0);
      CHECK(rep.min_gap > 0);
    }
  }
  SUBCASE("bound states approach +-(sqrt2 + 1/sqrt2)") {
    auto rep = quantization_roots(20);
    const double target = std::sqrt(2.0) + 1.0 / std::sqrt(2.0);
    for (const auto& b : rep.bound_states)
      CHECK(std::abs(std::abs(b.energy) - target) < 1e-6);
  }
  SUBCASE("every eigenvalue matches dense diagonalization") {
    for (int n : {2, 5, 23, 100, 200}) {
      auto rep = quantization_roots(n);
      auto es = ColumnChain::hitting_chain(n).eig(false);
      REQUIRE((int)rep.eigenvalues.size() == es.dim);
      for (int k = 0; k < es.dim; ++k)
        CHECK(std::abs(rep.eigenvalues[(std::size_t)k] - es.values[(std::size_t)k]) < 1e-10);
    }
  }
}

TEST_CASE("eigenvector ansatz satisfies the chain equations, parity holds") {
  for (int n : {3, 5, 12}) {
    auto rep = quantization_roots(n);
    const int m = 2 * n;
    auto check_vec = [&](const std::vector<double>& v, double E, int branch) {
      // chain couplings: 1 everywhere, sqrt2 between sites n and n+1 (1-based)
      for (int site = 1; site <= m; ++site) {
        double hx = 0;
        if (site > 1) hx += (site - 1 == n ? std::sqrt(2.0) : 1.0) * v[(std::size_t)site - 2];
        if (site < m) hx += (site == n ? std::sqrt(2.0) : 1.0) * v[(std::size_t)site];
        CHECK(std::abs(hx - E * v[(std::size_t)site - 1]) < 1e-10);
      }
      // <E|col 1> = branch * <E|col 2n>
      CHECK(v[0] == doctest::Approx(branch * v[(std::size_t)m - 1]).epsilon(1e-10));
    };
    for (const auto& r : rep.real_roots) check_vec(rep.eigenvector(r), r.energy, r.branch);
    for (const auto& b : rep.bound_states) check_vec(rep.eigenvector(b), b.energy, b.branch);
  }
}

TEST_CASE("minimum gap: dense agreement, lemma bound, true asymptote") {
  SUBCASE("n=5 matches dense") {
    auto es = ColumnChain::hitting_chain(5).eig(false);
    double dense_gap = 1e9;
    for (int k = 1; k < es.dim; ++k)
      dense_gap = std::min(dense_gap, es.values[(std::size_t)k] - es.values[(std::size_t)k - 1]);
    CHECK(min_gap(5).gap == doctest::Approx(dense_gap).epsilon(1e-10));
  }
  SUBCASE("scaled gap stays above the lemma's 8 and trends to 4 sqrt2 pi^2") {
    for (int n : {10, 25, 50, 100, 200, 350, 500}) {
      const double scaled = min_gap(n).gap * std::pow(double(n), 3);
      CHECK(scaled > 8.0);
    }
    // the scaled gap peaks near n=20 and then falls toward the asymptote
    double prev = 1e9;
    for (int n : {50, 100, 200, 350, 500}) {
      const double scaled = min_gap(n).gap * std::pow(double(n), 3);
      CHECK(scaled < prev + 1e-9);
      prev = scaled;
    }
    const double limit = 4.0 * std::sqrt(2.0) * std::numbers::pi * std::numbers::pi;
    CHECK(min_gap(500).gap * std::pow(500.0, 3) == doctest::Approx(limit).epsilon(0.01));
  }
}
