#include "gluedtrees/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gluedtrees {

double norm(std::span<const cplx> v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void normalize(std::span<cplx> v) {
  const double n = norm(v);
  if (n == 0) throw std::invalid_argument("normalize: zero vector");
  for (auto& x : v) x /= n;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

std::vector<cplx> Eigensystem::evolve(std::span<const cplx> psi0, double t) const {
  if (static_cast<int>(psi0.size()) != dim) throw std::invalid_argument("evolve: dimension mismatch");
  const std::size_t n = static_cast<std::size_t>(dim);
  std::vector<cplx> coeff(n), out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    cplx c = 0;
    const double* vk = &vectors[n * k];
    for (std::size_t i = 0; i < n; ++i) c += vk[i] * psi0[i];
    coeff[k] = c * std::polar(1.0, -values[k] * t);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double* vk = &vectors[n * k];
    const cplx c = coeff[k];
    for (std::size_t i = 0; i < n; ++i) out[i] += c * vk[i];
  }
  return out;
}

cplx Eigensystem::amplitude(int from, int to, double t) const {
  cplx s = 0;
  for (int k = 0; k < dim; ++k)
    s += vec(to, k) * vec(from, k) * std::polar(1.0, -values[static_cast<std::size_t>(k)] * t);
  return s;
}

namespace {

// Implicit-shift QL on a tridiagonal matrix; z (if non-null, n*n column-major
// by eigenvector after transposition conventions below) accumulates rotations.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z, int n) {
  if (n == 1) return;
  e.push_back(0.0);  // e[n-1] scratch
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[static_cast<std::size_t>(m)]) + std::abs(d[static_cast<std::size_t>(m) + 1]);
        if (std::abs(e[static_cast<std::size_t>(m)]) <= 1e-300 ||
            std::abs(e[static_cast<std::size_t>(m)]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m != l) {
        if (++iter > 64) throw std::runtime_error("eig_tridiagonal: QL failed to converge");
        double g = (d[static_cast<std::size_t>(l) + 1] - d[static_cast<std::size_t>(l)]) / (2.0 * e[static_cast<std::size_t>(l)]);
        double r = std::hypot(g, 1.0);
        g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
            e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[static_cast<std::size_t>(i)];
          const double b = c * e[static_cast<std::size_t>(i)];
          r = std::hypot(f, g);
          e[static_cast<std::size_t>(i) + 1] = r;
          if (r == 0.0) {
            d[static_cast<std::size_t>(i) + 1] -= p;
            e[static_cast<std::size_t>(m)] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[static_cast<std::size_t>(i) + 1] - p;
          r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
          p = s * r;
          d[static_cast<std::size_t>(i) + 1] = g + p;
          g = c * r - b;
          if (z) {
            double* zd = z->data();
            for (int k = 0; k < n; ++k) {
              const std::size_t ki = static_cast<std::size_t>(k) + static_cast<std::size_t>(n) * static_cast<std::size_t>(i);
              const std::size_t ki1 = ki + static_cast<std::size_t>(n);
              f = zd[ki1];
              zd[ki1] = s * zd[ki] + c * f;
              zd[ki] = c * zd[ki] - s * f;
            }
          }
        }
        if (underflow) continue;
        d[static_cast<std::size_t>(l)] -= p;
        e[static_cast<std::size_t>(l)] = g;
        e[static_cast<std::size_t>(m)] = 0.0;
      }
    } while (m != l);
  }
}

void sort_eigensystem(Eigensystem& es) {
  const int n = es.dim;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return es.values[static_cast<std::size_t>(a)] < es.values[static_cast<std::size_t>(b)]; });
  Eigensystem out;
  out.dim = n;
  out.values.resize(static_cast<std::size_t>(n));
  if (es.has_vectors()) out.vectors.resize(es.vectors.size());
  for (int k = 0; k < n; ++k) {
    out.values[static_cast<std::size_t>(k)] = es.values[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    if (es.has_vectors())
      std::copy_n(&es.vectors[static_cast<std::size_t>(n) * static_cast<std::size_t>(order[static_cast<std::size_t>(k)])],
                  n, &out.vectors[static_cast<std::size_t>(n) * static_cast<std::size_t>(k)]);
  }
  es = std::move(out);
}

}  // namespace

Eigensystem eig_tridiagonal(std::vector<double> diag, std::vector<double> off, bool want_vectors) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) throw std::invalid_argument("eig_tridiagonal: empty matrix");
  if (off.size() + 1 != diag.size()) throw std::invalid_argument("eig_tridiagonal: off size");
  Eigensystem es;
  es.dim = n;
  std::vector<double>* zp = nullptr;
  if (want_vectors) {
    es.vectors.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      es.vectors[static_cast<std::size_t>(i) * (static_cast<std::size_t>(n) + 1)] = 1.0;
    zp = &es.vectors;
  }
  ql_implicit(diag, off, zp, n);
  es.values = std::move(diag);
  sort_eigensystem(es);
  return es;
}

Eigensystem eig_symmetric(std::span<const double> a, int dim, bool want_vectors) {
  const std::size_t n = static_cast<std::size_t>(dim);
  if (a.size() != n * n) throw std::invalid_argument("eig_symmetric: size mismatch");
  std::vector<double> z(a.begin(), a.end());
  std::vector<double> d(n, 0.0), e(n, 0.0);

  // Householder reduction to tridiagonal form (tred2), accumulating the
  // transformation in z. z is treated row-major here; the final eigenvector
  // matrix is transposed into column-major order below.
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(z[i * n + k]);
      if (scale == 0.0) {
        e[i] = z[i * n + l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          z[i * n + k] /= scale;
          h += z[i * n + k] * z[i * n + k];
        }
        double f = z[i * n + l];
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z[i * n + l] = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          z[j * n + i] = z[i * n + j] / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += z[j * n + k] * z[i * n + k];
          for (std::size_t k = j + 1; k <= l; ++k) g += z[k * n + j] * z[i * n + k];
          e[j] = g / h;
          f += e[j] * z[i * n + j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = z[i * n + j];
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) z[j * n + k] -= f * e[k] + g * z[i * n + k];
        }
      }
    } else {
      e[i] = z[i * n + l];
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += z[i * n + k] * z[k * n + j];
        for (std::size_t k = 0; k < i; ++k) z[k * n + j] -= g * z[k * n + i];
      }
    }
    d[i] = z[i * n + i];
    z[i * n + i] = 1.0;
    for (std::size_t j = 0; j < i; ++j) z[j * n + i] = z[i * n + j] = 0.0;
  }

  // QL expects the subdiagonal shifted down by one slot.
  std::vector<double> off(n > 1 ? n - 1 : 0);
  for (std::size_t i = 1; i < n; ++i) off[i - 1] = e[i];

  Eigensystem es;
  es.dim = dim;
  if (want_vectors) {
    // Column-major with columns as eigenvectors: component i of vector k at
    // index i + n*k. The accumulated z has eigenvectors as columns in
    // row-major layout, i.e. z[i*n + k]; transpose while copying.
    es.vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) es.vectors[i + n * k] = z[i * n + k];
    ql_implicit(d, off, &es.vectors, dim);
  } else {
    ql_implicit(d, off, nullptr, dim);
  }
  es.values = std::move(d);
  sort_eigensystem(es);
  return es;
}

SparseSymmetric::SparseSymmetric(int dim, const std::vector<std::pair<int, int>>& edges,
                                 double weight)
    : SparseSymmetric(dim, [&] {
        std::vector<WeightedEdge> we;
        we.reserve(edges.size());
        for (const auto& [u, v] : edges) we.push_back({u, v, weight});
        return we;
      }()) {}

SparseSymmetric::SparseSymmetric(int dim, const std::vector<WeightedEdge>& edges) : dim_(dim) {
  std::vector<int> count(static_cast<std::size_t>(dim), 0);
  for (const auto& e : edges) {
    ++count[static_cast<std::size_t>(e.u)];
    ++count[static_cast<std::size_t>(e.v)];
  }
  row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
  for (int i = 0; i < dim; ++i)
    row_ptr_[static_cast<std::size_t>(i) + 1] = row_ptr_[static_cast<std::size_t>(i)] + count[static_cast<std::size_t>(i)];
  col_.resize(static_cast<std::size_t>(row_ptr_.back()));
  val_.resize(col_.size());
  std::vector<int> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const auto& e : edges) {
    const auto ku = static_cast<std::size_t>(fill[static_cast<std::size_t>(e.u)]++);
    const auto kv = static_cast<std::size_t>(fill[static_cast<std::size_t>(e.v)]++);
    col_[ku] = e.v;
    val_[ku] = e.w;
    col_[kv] = e.u;
    val_[kv] = e.w;
  }
  for (int i = 0; i < dim; ++i) {
    double s = 0;
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      s += std::abs(val_[static_cast<std::size_t>(k)]);
    norm_bound_ = std::max(norm_bound_, s);
  }
}

void SparseSymmetric::apply(std::span<const cplx> x, std::span<cplx> y) const {
  for (int i = 0; i < dim_; ++i) {
    cplx s = 0;
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      s += val_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
    y[static_cast<std::size_t>(i)] = s;
  }
}

std::vector<double> SparseSymmetric::dense() const {
  std::vector<double> a(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_), 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      a[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])] +=
          val_[static_cast<std::size_t>(k)];
  return a;
}

std::vector<cplx> krylov_evolve(const SparseSymmetric& a, std::vector<cplx> psi, double t,
                                double tol, int subspace) {
  const int n = a.dim();
  if (static_cast<int>(psi.size()) != n) throw std::invalid_argument("krylov_evolve: dimension mismatch");
  if (t == 0.0 || a.norm_bound() == 0.0) return psi;

  const int m = std::min(subspace, n);
  // Substep so the truncated-series error (e*|A|*dt/m)^m stays below tol.
  const double direction = t > 0 ? 1.0 : -1.0;
  double remaining = std::abs(t);
  const double step_cap =
      std::max(1e-12, m / (std::exp(1.0) * a.norm_bound()) * std::pow(std::min(tol, 0.1), 1.0 / m));

  std::vector<std::vector<cplx>> basis;
  std::vector<cplx> w(static_cast<std::size_t>(n));
  while (remaining > 0) {
    const double dt = std::min(remaining, step_cap) * direction;
    const double beta0 = norm(psi);
    if (beta0 == 0) return psi;

    basis.clear();
    basis.push_back(psi);
    for (auto& x : basis[0]) x /= beta0;
    std::vector<double> alpha, beta;
    int built = 0;
    for (int j = 0; j < m; ++j) {
      a.apply(basis[static_cast<std::size_t>(j)], w);
      if (j > 0) {
        const double b = beta[static_cast<std::size_t>(j) - 1];
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= b * basis[static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(i)];
      }
      const double al = inner(basis[static_cast<std::size_t>(j)], w).real();
      alpha.push_back(al);
      for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= al * basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      // full reorthogonalization; the subspace is small
      for (const auto& v : basis) {
        const cplx c = inner(v, w);
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= c * v[static_cast<std::size_t>(i)];
      }
      built = j + 1;
      const double b = norm(w);
      if (b < 1e-14) break;  // happy breakdown: exact subspace
      if (j + 1 < m) {
        beta.push_back(b);
        basis.push_back(w);
        for (auto& x : basis.back()) x /= b;
      }
    }

    auto small = eig_tridiagonal(alpha, beta, true);
    // u = exp(-i dt T) e1, scaled back by beta0
    std::vector<cplx> u(static_cast<std::size_t>(built), 0.0);
    for (int k = 0; k < built; ++k) {
      const cplx phase = std::polar(1.0, -small.values[static_cast<std::size_t>(k)] * dt);
      for (int j = 0; j < built; ++j)
        u[static_cast<std::size_t>(j)] += small.vec(j, k) * small.vec(0, k) * phase;
    }
    std::fill(psi.begin(), psi.end(), cplx(0));
    for (int j = 0; j < built; ++j)
      for (int i = 0; i < n; ++i)
        psi[static_cast<std::size_t>(i)] += beta0 * u[static_cast<std::size_t>(j)] * basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];

    remaining -= std::abs(dt);
  }
  return psi;
}

}  // namespace gluedtrees
