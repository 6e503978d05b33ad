#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gluedtrees/graph.hpp"
#include "gluedtrees/linalg.hpp"

namespace gluedtrees {

inline constexpr double kDefaultGamma = 0.7071067811865475244;  // 1/sqrt(2)

// H = gamma * adjacency matrix: zero diagonal, one entry of gamma per edge.
struct WalkHamiltonian {
  int dim = 0;
  double gamma = kDefaultGamma;
  SparseSymmetric matrix;

  static WalkHamiltonian adjacency(const GluedTreesGraph& g, double gamma = kDefaultGamma);
  static WalkHamiltonian from_edges(int dim, const std::vector<std::pair<int, int>>& edges,
                                    double gamma);
};

// exp(-iHt) psi0: dense eigendecomposition when the dimension is small,
// Lanczos otherwise. Both routes agree to ~1e-12 on overlapping sizes.
std::vector<cplx> evolve(const WalkHamiltonian& h, std::vector<cplx> psi0, double t);

// Caches the eigendecomposition for repeated time points (dense route only).
class WalkPropagator {
 public:
  explicit WalkPropagator(const WalkHamiltonian& h);
  std::vector<cplx> at(std::span<const cplx> psi0, double t) const { return eig_.evolve(psi0, t); }
  cplx amplitude(int from, int to, double t) const { return eig_.amplitude(from, to, t); }
  const Eigensystem& eigensystem() const { return eig_; }

 private:
  Eigensystem eig_;
};

// The column-subspace reduction of H: a line of `sites` vertices with one
// strengthened bond. Couplings are sqrt(2)*gamma except 2*gamma across the
// defect; with gamma = 1/sqrt(2) that is 1 everywhere and sqrt(2) at the
// defect.
struct ColumnChain {
  int sites = 0;
  int defect_bond = 0;  // couplings[defect_bond] joins sites defect_bond, defect_bond+1
  double gamma = kDefaultGamma;
  std::vector<double> couplings;

  // cols 0..2n+1 of G'_n: 2n+2 sites, defect between sites n and n+1.
  static ColumnChain for_graph(int n, double gamma = kDefaultGamma);
  // The 2n-site chain of the hitting lemma (G'_{n-1} with columns relabeled
  // 1..2n); defect between sites n and n+1 in that 1-based labeling.
  static ColumnChain hitting_chain(int n, double gamma = kDefaultGamma);

  Eigensystem eig(bool want_vectors = true) const;
  SparseSymmetric sparse() const;
};

// Coefficients <col j|psi> of a full-graph state, j = 0..2n+1.
std::vector<cplx> project_to_columns(const GluedTreesGraph& g, std::span<const cplx> psi_full);
// Column coefficients back to the vertex basis (uniform within columns);
// inverse of the projection on the column subspace.
std::vector<cplx> lift_from_columns(const GluedTreesGraph& g, std::span<const cplx> psi_cols);

// |<col 2n+1| exp(-iHt) |col 0>|^2 on the reduced chain, per time point.
std::vector<double> exit_probability_curve(int n, std::span<const double> times,
                                           double gamma = kDefaultGamma);

struct HittingResult {
  int n = 0;
  double epsilon = 0;
  double tau = 0;
  double probability = 0;
  enum class Method { kClosedForm, kSampled } method = Method::kClosedForm;
  long samples = 0;
  std::uint64_t seed = 0;
};

struct Lemma1Average {
  HittingResult closed_form;
  std::optional<HittingResult> sampled;
  double min_gap = 0;     // smallest eigenvalue gap of the 2n-site chain
  double first_term = 0;  // sum_E |<E|col 1>|^2 |<E|col 2n>|^2
  double bound = 0;       // (1-epsilon)/(2n)
};

// Time-averaged exit probability of the walk on the 2n-site hitting chain,
// started at col 1 and measured at col 2n, with t uniform in [0, tau].
// tau <= 0 throws. The closed form integrates the eigenbasis expression
// exactly; the sampled estimate draws mc_samples times when mc_samples > 0.
Lemma1Average lemma1_average(int n, double epsilon, double tau, long mc_samples = 0,
                             std::uint64_t seed = 0);

// tau = 4n/(epsilon * measured gap), the lemma's claimed-bound mode.
double lemma1_tau(int n, double epsilon);

struct Theorem1Result {
  Lemma1Average average;
  bool gap_bound_applies = false;  // 8/n^3 < measured gap
};

// tau = n^4/(2 epsilon) as in the hitting theorem.
Theorem1Result theorem1_experiment(int n, double epsilon, long mc_samples = 0,
                                   std::uint64_t seed = 0);

}  // namespace gluedtrees
