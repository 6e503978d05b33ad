#include "gluedtrees/line.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gluedtrees/bessel.hpp"
#include "gluedtrees/walk.hpp"

namespace gluedtrees {

namespace {
constexpr double kPi = std::numbers::pi;

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}
}  // namespace

cplx infinite_line_propagator(int j, int k, double t) {
  if (t < 0) throw std::invalid_argument("infinite_line_propagator: t < 0");
  return i_power(-(k - j)) * bessel_j(k - j, 2.0 * t);
}

WavefrontProfile wavefront_profile(double t, int window) {
  if (t <= 0) throw std::invalid_argument("wavefront_profile: t must be positive");
  WavefrontProfile w;
  w.t = t;
  const int front = static_cast<int>(std::lround(2.0 * t));
  const int lo = std::max(0, front - window);
  const int hi = front + window;
  const auto j = bessel_j_array(hi, 2.0 * t);
  w.decay_edge = 2.02 * t + 6.0 * std::cbrt(2.0 * t);
  w.decay_ok = true;
  for (int d = lo; d <= hi; ++d) {
    w.distances.push_back(d);
    const double mag = std::abs(j[static_cast<std::size_t>(d)]);
    w.magnitudes.push_back(mag);
    if (d >= w.decay_edge && mag >= 1e-6) w.decay_ok = false;
  }
  const int decade = 10 * front;
  const double at_front = std::abs(bessel_j(front, static_cast<double>(front)));
  const double at_decade = std::abs(bessel_j(decade, static_cast<double>(decade)));
  w.front_const = at_front * std::cbrt(static_cast<double>(front));
  w.front_const_decade = at_decade * std::cbrt(static_cast<double>(decade));
  return w;
}

ScatteringResult transmission(double p, double alpha) {
  if (alpha <= 0) throw std::invalid_argument("transmission: alpha must be positive");
  if (!(p > 0.0) || !(p < kPi))
    throw std::invalid_argument("transmission: degenerate momentum, need 0 < p < pi");
  const cplx i(0, 1);
  const double sp = std::sin(p), cp = std::cos(p);
  ScatteringResult r;
  r.momentum = p;
  r.alpha = alpha;
  r.transmission = 2.0 * i * alpha * sp / ((alpha * alpha - 1.0) * cp + i * (alpha * alpha + 1.0) * sp);

  // Matching conditions with the defect bond between sites 0 and 1:
  //   E psi_0 = psi_-1 + alpha psi_1,  E psi_1 = alpha psi_0 + psi_2,
  // with psi_j = e^{ipj} + R e^{-ipj} left of the bond and T e^{ipj} right.
  const double E = 2.0 * cp;
  const cplx eip = std::polar(1.0, p), emip = std::polar(1.0, -p);
  const cplx e2ip = std::polar(1.0, 2.0 * p);
  // unknowns x = (R, T):
  //   (E - eip) R - alpha eip T = emip - E
  //   -alpha R + (E eip - e2ip) T = alpha
  const cplx a11 = E - eip, a12 = -alpha * eip;
  const cplx a21 = -alpha, a22 = E * eip - e2ip;
  const cplx b1 = emip - E, b2 = alpha;
  const cplx det = a11 * a22 - a12 * a21;
  r.reflection = (b1 * a22 - a12 * b2) / det;
  const cplx t_check = (a11 * b2 - b1 * a21) / det;
  if (std::abs(t_check - r.transmission) > 1e-10)
    throw std::runtime_error("transmission: matching solve disagrees with the closed form");
  return r;
}

PacketScatterResult wavepacket_scatter(double alpha, const PacketSpec& spec) {
  if (alpha <= 0) throw std::invalid_argument("wavepacket_scatter: alpha must be positive");
  if (spec.sigma < 2.0) throw std::invalid_argument("wavepacket_scatter: packet too narrow");
  const double p0 = spec.momentum;
  const double sigma_p = 1.0 / (2.0 * spec.sigma);
  if (p0 - 5.0 * sigma_p <= 0.0 || p0 + 5.0 * sigma_p >= kPi)
    throw std::invalid_argument("wavepacket_scatter: momentum support leaves (0, pi)");

  // Packets with momentum in (0, pi) travel toward decreasing site index
  // (group velocity -2 sin p), so the packet starts right of the defect.
  const int L = 4 * spec.offset + 1;
  const int d = L / 2;  // defect bond joins sites d and d+1
  const int j0 = d + spec.offset;

  std::vector<WeightedEdge> edges;
  for (int i = 0; i + 1 < L; ++i) edges.push_back({i, i + 1, i == d ? alpha : 1.0});
  const SparseSymmetric h(L, edges);

  std::vector<cplx> psi(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i)
    psi[static_cast<std::size_t>(i)] =
        std::polar(std::exp(-(i - j0) * (i - j0) / (4.0 * spec.sigma * spec.sigma)), p0 * i);
  normalize(psi);
  const std::vector<cplx> psi0 = psi;

  const double tmeas = 1.5 * spec.offset / (2.0 * std::sin(p0));
  psi = krylov_evolve(h, std::move(psi), tmeas);

  double edge_mass = 0;
  for (int i = 0; i < std::min(10, L); ++i)
    edge_mass += std::norm(psi[static_cast<std::size_t>(i)]) + std::norm(psi[static_cast<std::size_t>(L - 1 - i)]);
  if (edge_mass > 1e-9)
    throw std::runtime_error("wavepacket_scatter: packet reached the lattice boundary before measurement");

  PacketScatterResult out;
  out.measure_time = tmeas;
  for (int i = 0; i <= d; ++i) out.transmitted += std::norm(psi[static_cast<std::size_t>(i)]);
  for (int i = d + 1; i < L; ++i) out.reflected += std::norm(psi[static_cast<std::size_t>(i)]);

  // Quadrature of |T(p)|^2 against the packet's momentum density.
  const int grid = 4000;
  double num = 0, den = 0;
  for (int gidx = 1; gidx < grid; ++gidx) {
    const double p = kPi * gidx / grid;
    cplx amp = 0;
    for (int i = 0; i < L; ++i) amp += psi0[static_cast<std::size_t>(i)] * std::polar(1.0, -p * i);
    const double w = std::norm(amp);
    num += w * std::norm(transmission(p, alpha).transmission);
    den += w;
  }
  out.predicted = num / den;
  return out;
}

int finite_line_truncation(double t, int L) {
  // Omitted images must sit beyond the wavefront plus its Airy width.
  const double reach = 2.0 * t + 6.0 * std::cbrt(2.0 * t) + 40.0;
  return static_cast<int>(reach / (2.0 * (L + 1))) + 1;
}

cplx finite_line_propagator(int j, int k, double t, int L, int truncation) {
  if (L < 1 || j < 1 || j > L || k < 0 || k > L + 1)
    throw std::invalid_argument("finite_line_propagator: indices out of range");
  if (t < 0) throw std::invalid_argument("finite_line_propagator: t < 0");
  if (truncation < finite_line_truncation(t, L))
    throw std::invalid_argument("finite_line_propagator: truncation insufficient for this t");
  cplx sum = 0;
  for (int l = -truncation; l <= truncation; ++l) {
    sum += infinite_line_propagator(j, k + 2 * l * (L + 1), t);
    sum -= infinite_line_propagator(j, -k + 2 * l * (L + 1), t);
  }
  return sum;
}

namespace {

double quant_fn(int n, int branch, double p) {
  return std::sin((n + 1) * p) - branch * std::sqrt(2.0) * std::sin(n * p);
}

// log(sinh(x)) stable for large x
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2; }

}  // namespace

SpectralReport quantization_roots(int n) {
  if (n < 2) throw std::invalid_argument("quantization_roots: n must be >= 2");
  SpectralReport rep;
  rep.n = n;

  for (const int branch : {+1, -1}) {
    const int grid = 64 * (n + 1);
    double prev_p = 1e-12;
    double prev_f = quant_fn(n, branch, prev_p);
    for (int g = 1; g <= grid; ++g) {
      const double p = kPi * g / grid - (g == grid ? 1e-12 : 0.0);
      const double f = quant_fn(n, branch, p);
      if ((prev_f < 0 && f >= 0) || (prev_f > 0 && f <= 0)) {
        double lo = prev_p, hi = p, flo = prev_f;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = quant_fn(n, branch, mid);
          if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        rep.real_roots.push_back({root, branch, 2.0 * std::cos(root)});
      }
      prev_p = p;
      prev_f = f;
    }
  }
  std::sort(rep.real_roots.begin(), rep.real_roots.end(),
            [](const RealRoot& a, const RealRoot& b) { return a.p < b.p; });

  // Bound states: sinh((n+1)k)/sinh(nk) = sqrt(2). The left side decreases
  // from (n+1)/n toward... it increases from (n+1)/n to e^k asymptotics, so a
  // root exists iff (n+1)/n < sqrt(2), i.e. n >= 3. The +sqrt2 branch gives
  // E = 2 cosh k; p = pi + ik turns the -sqrt2 branch into the same condition
  // with E = -2 cosh k.
  if ((n + 1.0) / n < std::sqrt(2.0)) {
    auto f = [n](double k) { return log_sinh((n + 1) * k) - log_sinh(n * k) - 0.5 * std::numbers::ln2; };
    double lo = 1e-8, hi = 2.0;
    if (f(lo) >= 0 || f(hi) <= 0) throw std::runtime_error("quantization_roots: bound-state bracket failed");
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) < 0 ? lo : hi) = mid;
    }
    const double k = 0.5 * (lo + hi);
    rep.bound_states.push_back({k, +1, 2.0 * std::cosh(k)});
    rep.bound_states.push_back({k, -1, -2.0 * std::cosh(k)});
  }

  const std::size_t expected = 2 * static_cast<std::size_t>(n);
  if (rep.real_roots.size() + rep.bound_states.size() != expected)
    throw std::runtime_error("quantization_roots: root count mismatch (" +
                             std::to_string(rep.real_roots.size()) + " real + " +
                             std::to_string(rep.bound_states.size()) + " bound != " +
                             std::to_string(expected) + ")");

  for (const auto& r : rep.real_roots) rep.eigenvalues.push_back(r.energy);
  for (const auto& b : rep.bound_states) rep.eigenvalues.push_back(b.energy);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());

  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i) {
    const double g = rep.eigenvalues[i] - rep.eigenvalues[i - 1];
    if (g < rep.min_gap) {
      rep.min_gap = g;
      rep.min_gap_pair = {rep.eigenvalues[i - 1], rep.eigenvalues[i]};
    }
  }
  return rep;
}

std::vector<double> SpectralReport::eigenvector(const RealRoot& r) const {
  std::vector<double> v(static_cast<std::size_t>(2 * n));
  for (int j = 1; j <= n; ++j) v[static_cast<std::size_t>(j) - 1] = std::sin(r.p * j);
  for (int j = n + 1; j <= 2 * n; ++j)
    v[static_cast<std::size_t>(j) - 1] = r.branch * std::sin(r.p * (2 * n + 1 - j));
  double nn = 0;
  for (double x : v) nn += x * x;
  for (double& x : v) x /= std::sqrt(nn);
  return v;
}

std::vector<double> SpectralReport::eigenvector(const BoundState& b) const {
  std::vector<double> v(static_cast<std::size_t>(2 * n));
  if (b.branch > 0) {
    for (int j = 1; j <= n; ++j) v[static_cast<std::size_t>(j) - 1] = std::sinh(b.k * j);
    for (int j = n + 1; j <= 2 * n; ++j)
      v[static_cast<std::size_t>(j) - 1] = std::sinh(b.k * (2 * n + 1 - j));
  } else {
    // p = pi + ik: site-alternating signs, antisymmetric across the defect
    for (int j = 1; j <= n; ++j)
      v[static_cast<std::size_t>(j) - 1] = (j % 2 ? -1.0 : 1.0) * std::sinh(b.k * j);
    for (int j = n + 1; j <= 2 * n; ++j)
      v[static_cast<std::size_t>(j) - 1] =
          -((2 * n + 1 - j) % 2 ? -1.0 : 1.0) * std::sinh(b.k * (2 * n + 1 - j));
  }
  double nn = 0;
  for (double x : v) nn += x * x;
  for (double& x : v) x /= std::sqrt(nn);
  return v;
}

MinGapResult min_gap(int n) {
  const SpectralReport rep = quantization_roots(n);
  return {rep.min_gap, rep.min_gap_pair.first, rep.min_gap_pair.second};
}

}  // namespace gluedtrees
