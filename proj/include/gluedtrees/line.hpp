#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "gluedtrees/linalg.hpp"

namespace gluedtrees {

// <k| exp(-iHt) |j> on the infinite uniform line: (-i)^(k-j) J_{k-j}(2t).
cplx infinite_line_propagator(int j, int k, double t);

struct WavefrontProfile {
  double t = 0;
  std::vector<int> distances;
  std::vector<double> magnitudes;
  // No magnitude beyond the Airy-widened front edge reached 1e-6.
  bool decay_ok = false;
  double decay_edge = 0;  // 2.02 t + 6 (2t)^(1/3)
  // |G| * d^(1/3) at the front, here and one decade out; their ratio tests
  // the d^(-1/3) front scaling.
  double front_const = 0;
  double front_const_decade = 0;
};

WavefrontProfile wavefront_profile(double t, int window);

struct ScatteringResult {
  double momentum = 0;
  double alpha = 0;
  cplx transmission;
  cplx reflection;
};

// Plane-wave scattering off a single strengthened bond; the transmission is
// evaluated from the closed form and the reflection from the matching
// conditions (a 2x2 linear solve), so |T|^2 + |R|^2 = 1 is a real check.
ScatteringResult transmission(double p, double alpha);

struct PacketSpec {
  double sigma = 10.0;      // spatial width in sites, >= a few
  double momentum = 1.5707963267948966;  // in (0, pi)
  int offset = 150;         // initial distance from the defect
};

struct PacketScatterResult {
  double transmitted = 0;
  double reflected = 0;
  double predicted = 0;  // integral of |T(p)|^2 against the packet spectrum
  double measure_time = 0;
};

// Evolves a Gaussian packet on a truncated defect line and measures the
// probability that crossed the defect. Throws if the packet would touch the
// lattice boundary before measurement.
PacketScatterResult wavepacket_scatter(double alpha, const PacketSpec& spec);

// Finite line of L sites (no defect), 1-indexed, boundaries at 0 and L+1:
// the method-of-images sum over reflected copies of the infinite-line
// propagator. Throws when the truncation leaves images within reach of 2t.
cplx finite_line_propagator(int j, int k, double t, int L, int truncation);
int finite_line_truncation(double t, int L);  // smallest safe truncation

struct RealRoot {
  double p = 0;     // momentum in (0, pi)
  int branch = 0;   // +1 or -1: sign s in sin((n+1)p) = s sqrt(2) sin(np)
  double energy = 0;  // 2 cos p
};

struct BoundState {
  double k = 0;       // p = ik (branch +1) or p = pi + ik (branch -1)
  int branch = 0;
  double energy = 0;  // +2 cosh k or -2 cosh k
};

struct SpectralReport {
  int n = 0;  // chain has 2n sites
  std::vector<RealRoot> real_roots;       // ascending momentum
  std::vector<BoundState> bound_states;   // two for n >= 3, none at n = 2
  std::vector<double> eigenvalues;        // all 2n, ascending
  double min_gap = 0;
  std::pair<double, double> min_gap_pair{0, 0};

  // Reconstructs the (normalized) eigenvector of one spectral item on the
  // 2n-site chain from the sin/sinh ansatz.
  std::vector<double> eigenvector(const RealRoot& r) const;
  std::vector<double> eigenvector(const BoundState& b) const;
};

// Solves sin((n+1)p)/sin(np) = +-sqrt(2) on (0,pi) by bracketed bisection
// plus the sinh-branch bound states, and cross-counts against the chain
// dimension. Root-count mismatches throw rather than proceed.
SpectralReport quantization_roots(int n);

struct MinGapResult {
  double gap = 0;
  double lower = 0, upper = 0;  // the witness pair
};

MinGapResult min_gap(int n);

}  // namespace gluedtrees
