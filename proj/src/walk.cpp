#include "gluedtrees/walk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gluedtrees/rng.hpp"

namespace gluedtrees {

namespace {
// Dense eigendecomposition stays exact and affordable up to a few thousand
// states; evolve() switches to Lanczos earlier because it rebuilds the
// decomposition on every call.
constexpr int kDenseLimit = 4096;
constexpr int kDenseOneShotLimit = 600;
}  // namespace

WalkHamiltonian WalkHamiltonian::adjacency(const GluedTreesGraph& g, double gamma) {
  if (gamma <= 0) throw std::invalid_argument("adjacency_hamiltonian: gamma must be positive");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(g.edge_count()));
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int s = 0; s < g.degree(v); ++s) {
      const int u = g.adjacent(v)[static_cast<std::size_t>(s)];
      if (u > v) edges.emplace_back(v, u);
    }
  return from_edges(g.vertex_count(), edges, gamma);
}

WalkHamiltonian WalkHamiltonian::from_edges(int dim, const std::vector<std::pair<int, int>>& edges,
                                            double gamma) {
  WalkHamiltonian h;
  h.dim = dim;
  h.gamma = gamma;
  h.matrix = SparseSymmetric(dim, edges, gamma);
  return h;
}

std::vector<cplx> evolve(const WalkHamiltonian& h, std::vector<cplx> psi0, double t) {
  if (static_cast<int>(psi0.size()) != h.dim) throw std::invalid_argument("evolve: dimension mismatch");
  if (!std::isfinite(t)) throw std::invalid_argument("evolve: time must be finite");
  if (t == 0.0) return psi0;
  if (h.dim <= kDenseOneShotLimit) {
    const Eigensystem es = eig_symmetric(h.matrix.dense(), h.dim, true);
    return es.evolve(psi0, t);
  }
  return krylov_evolve(h.matrix, std::move(psi0), t);
}

WalkPropagator::WalkPropagator(const WalkHamiltonian& h) {
  if (h.dim > kDenseLimit)
    throw std::invalid_argument("WalkPropagator: dimension too large for the dense route");
  eig_ = eig_symmetric(h.matrix.dense(), h.dim, true);
}

ColumnChain ColumnChain::for_graph(int n, double gamma) {
  if (n < 1) throw std::invalid_argument("column_chain: n must be >= 1");
  ColumnChain c;
  c.sites = 2 * n + 2;
  c.defect_bond = n;
  c.gamma = gamma;
  c.couplings.assign(static_cast<std::size_t>(c.sites) - 1, std::sqrt(2.0) * gamma);
  c.couplings[static_cast<std::size_t>(n)] = 2.0 * gamma;
  return c;
}

ColumnChain ColumnChain::hitting_chain(int n, double gamma) {
  if (n < 1) throw std::invalid_argument("hitting_chain: n must be >= 1");
  ColumnChain c = for_graph(n - 1, gamma);
  // G'_{n-1} reduces to exactly 2n sites; nothing else changes.
  return c;
}

Eigensystem ColumnChain::eig(bool want_vectors) const {
  return eig_tridiagonal(std::vector<double>(static_cast<std::size_t>(sites), 0.0), couplings,
                         want_vectors);
}

SparseSymmetric ColumnChain::sparse() const {
  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(sites) - 1);
  for (int i = 0; i + 1 < sites; ++i) edges.push_back({i, i + 1, couplings[static_cast<std::size_t>(i)]});
  return SparseSymmetric(sites, edges);
}

std::vector<cplx> project_to_columns(const GluedTreesGraph& g, std::span<const cplx> psi_full) {
  if (static_cast<int>(psi_full.size()) != g.vertex_count())
    throw std::invalid_argument("project_to_columns: dimension mismatch");
  std::vector<cplx> out(static_cast<std::size_t>(g.num_columns()), 0.0);
  for (int j = 0; j < g.num_columns(); ++j) {
    cplx s = 0;
    for (int v = g.column_begin(j); v < g.column_begin(j + 1); ++v)
      s += psi_full[static_cast<std::size_t>(v)];
    out[static_cast<std::size_t>(j)] = s / std::sqrt(static_cast<double>(g.column_size(j)));
  }
  return out;
}

std::vector<cplx> lift_from_columns(const GluedTreesGraph& g, std::span<const cplx> psi_cols) {
  if (static_cast<int>(psi_cols.size()) != g.num_columns())
    throw std::invalid_argument("lift_from_columns: dimension mismatch");
  std::vector<cplx> out(static_cast<std::size_t>(g.vertex_count()));
  for (int j = 0; j < g.num_columns(); ++j) {
    const cplx amp = psi_cols[static_cast<std::size_t>(j)] / std::sqrt(static_cast<double>(g.column_size(j)));
    for (int v = g.column_begin(j); v < g.column_begin(j + 1); ++v)
      out[static_cast<std::size_t>(v)] = amp;
  }
  return out;
}

std::vector<double> exit_probability_curve(int n, std::span<const double> times, double gamma) {
  const ColumnChain chain = ColumnChain::for_graph(n, gamma);
  const Eigensystem es = chain.eig(true);
  std::vector<double> out;
  out.reserve(times.size());
  for (const double t : times) {
    if (!std::isfinite(t)) throw std::invalid_argument("exit_probability_curve: non-finite time");
    out.push_back(t == 0.0 ? 0.0 : std::norm(es.amplitude(0, chain.sites - 1, t)));
  }
  return out;
}

namespace {

double chain_min_gap(const Eigensystem& es) {
  double g = std::numeric_limits<double>::infinity();
  for (int k = 1; k < es.dim; ++k)
    g = std::min(g, es.values[static_cast<std::size_t>(k)] - es.values[static_cast<std::size_t>(k) - 1]);
  return g;
}

}  // namespace

double lemma1_tau(int n, double epsilon) {
  const Eigensystem es = ColumnChain::hitting_chain(n).eig(false);
  return 4.0 * n / (epsilon * chain_min_gap(es));
}

Lemma1Average lemma1_average(int n, double epsilon, double tau, long mc_samples,
                             std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("lemma1_average: n must be >= 1");
  if (tau <= 0) throw std::invalid_argument("lemma1_average: tau must be positive");
  const ColumnChain chain = ColumnChain::hitting_chain(n);
  const Eigensystem es = chain.eig(true);
  const int m = chain.sites;  // 2n
  const int src = 0, dst = m - 1;

  // closed form: sum_E w_E^2 + sum_{E != E'} (1 - e^{-i(E-E')tau})/(i(E-E')tau) ...
  double first = 0;
  for (int k = 0; k < m; ++k) {
    const double w = es.vec(src, k) * es.vec(dst, k);
    first += w * w;
  }
  cplx cross = 0;
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      if (k == l) continue;
      const double dE = es.values[static_cast<std::size_t>(k)] - es.values[static_cast<std::size_t>(l)];
      const cplx kernel = (1.0 - std::polar(1.0, -dE * tau)) / (cplx(0.0, 1.0) * dE * tau);
      cross += kernel * (es.vec(dst, k) * es.vec(src, k) * es.vec(src, l) * es.vec(dst, l));
    }
  }

  Lemma1Average out;
  out.min_gap = chain_min_gap(es);
  out.first_term = first;
  out.bound = (1.0 - epsilon) / (2.0 * n);
  out.closed_form = {n, epsilon, tau, first + cross.real(), HittingResult::Method::kClosedForm, 0, 0};

  if (mc_samples > 0) {
    Rng rng(seed, /*stream=*/17);
    double acc = 0;
    for (long s = 0; s < mc_samples; ++s) {
      const double t = tau * rng.uniform();
      acc += std::norm(es.amplitude(src, dst, t));
    }
    out.sampled = HittingResult{n,   epsilon,    tau, acc / static_cast<double>(mc_samples),
                                HittingResult::Method::kSampled, mc_samples, seed};
  }
  return out;
}

Theorem1Result theorem1_experiment(int n, double epsilon, long mc_samples, std::uint64_t seed) {
  const double tau = std::pow(static_cast<double>(n), 4) / (2.0 * epsilon);
  Theorem1Result r;
  r.average = lemma1_average(n, epsilon, tau, mc_samples, seed);
  r.gap_bound_applies = 8.0 / std::pow(static_cast<double>(n), 3) < r.average.min_gap;
  return r;
}

}  // namespace gluedtrees
