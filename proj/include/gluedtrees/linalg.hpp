#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gluedtrees {

using cplx = std::complex<double>;

// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
// Vectors are stored column-major: vec(i, k) is component i of eigenvector k.
struct Eigensystem {
  int dim = 0;
  std::vector<double> values;
  std::vector<double> vectors;  // empty unless requested

  double vec(int i, int k) const { return vectors[static_cast<std::size_t>(i) + static_cast<std::size_t>(dim) * static_cast<std::size_t>(k)]; }
  bool has_vectors() const { return !vectors.empty(); }

  // psi(t) = exp(-i t A) psi0 through the eigenbasis.
  std::vector<cplx> evolve(std::span<const cplx> psi0, double t) const;
  // <to| exp(-i t A) |from> for basis states.
  cplx amplitude(int from, int to, double t) const;
};

// Symmetric tridiagonal eigensolver (implicit QL with shifts).
Eigensystem eig_tridiagonal(std::vector<double> diag, std::vector<double> off,
                            bool want_vectors = true);

// Dense symmetric eigensolver: Householder reduction followed by QL.
// `a` is row-major dim*dim and is copied internally.
Eigensystem eig_symmetric(std::span<const double> a, int dim, bool want_vectors = true);

struct WeightedEdge {
  int u, v;
  double w;
};

// Real symmetric sparse matrix, fully stored, fixed structure after build.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;
  SparseSymmetric(int dim, const std::vector<std::pair<int, int>>& edges, double weight);
  SparseSymmetric(int dim, const std::vector<WeightedEdge>& edges);

  int dim() const { return dim_; }
  double norm_bound() const { return norm_bound_; }  // Gershgorin row-sum bound
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  std::vector<double> dense() const;

 private:
  int dim_ = 0;
  double norm_bound_ = 0;
  std::vector<std::int32_t> row_ptr_, col_;
  std::vector<double> val_;
};

// exp(-i t A) psi via adaptive Lanczos steps; exact to ~tol for symmetric A.
std::vector<cplx> krylov_evolve(const SparseSymmetric& a, std::vector<cplx> psi, double t,
                                double tol = 1e-13, int subspace = 48);

double norm(std::span<const cplx> v);
void normalize(std::span<cplx> v);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // <a|b>

}  // namespace gluedtrees
