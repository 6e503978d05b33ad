#include "gluedtrees/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gluedtrees {

std::vector<double> bessel_j_array(int nmax, double x) {
  if (nmax < 0) throw std::invalid_argument("bessel_j_array: nmax < 0");
  if (x < 0) throw std::invalid_argument("bessel_j_array: x < 0");
  std::vector<double> j(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }

  // Start the downward recurrence well above both nmax and x so the
  // dominant solution has decayed to nothing by the time it reaches the
  // orders we keep.
  const double top = std::max<double>(nmax, x);
  int start = static_cast<int>(top + 12.0 + 8.0 * std::sqrt(top));
  if (start % 2) ++start;

  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[static_cast<std::size_t>(start) + 1] = 0.0;
  f[static_cast<std::size_t>(start)] = 1e-280;
  for (int k = start; k >= 1; --k) {
    f[static_cast<std::size_t>(k) - 1] = (2.0 * k / x) * f[static_cast<std::size_t>(k)] - f[static_cast<std::size_t>(k) + 1];
    if (std::abs(f[static_cast<std::size_t>(k) - 1]) > 1e280) {
      for (int i = k - 1; i <= start + 1; ++i) f[static_cast<std::size_t>(i)] *= 1e-280;
    }
  }
  // Normalization: J_0 + 2*(J_2 + J_4 + ...) = 1.
  double s = f[0];
  for (int k = 2; k <= start; k += 2) s += 2.0 * f[static_cast<std::size_t>(k)];
  for (int k = 0; k <= nmax; ++k) j[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k)] / s;
  return j;
}

double bessel_j(int nu, double x) {
  const int a = std::abs(nu);
  const double v = bessel_j_array(a, x)[static_cast<std::size_t>(a)];
  return (nu < 0 && a % 2) ? -v : v;
}

double bessel_j_integral(int nu, double x) {
  const int a = std::abs(nu);
  // Composite Simpson; the integrand oscillates ~(a+x) times, so scale the
  // panel count with the order.
  int panels = 2000 + 400 * static_cast<int>(a + std::ceil(x));
  if (panels % 2) ++panels;
  const double h = std::numbers::pi / panels;
  auto f = [&](double th) { return std::cos(a * th - x * std::sin(th)); };
  double s = f(0.0) + f(std::numbers::pi);
  for (int i = 1; i < panels; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  const double v = s * h / 3.0 / std::numbers::pi;
  return (nu < 0 && a % 2) ? -v : v;
}

}  // namespace gluedtrees
