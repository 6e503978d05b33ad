#pragma once

#include <vector>

namespace gluedtrees {

// J_0(x) .. J_nmax(x) by Miller's backward recurrence with normalization;
// accurate to ~1e-14 relative over the ranges used here. x >= 0.
std::vector<double> bessel_j_array(int nmax, double x);

// Integer order, either sign of nu (J_{-nu} = (-1)^nu J_nu), x >= 0.
double bessel_j(int nu, double x);

// Independent route: quadrature of (1/pi) * int_0^pi cos(nu*theta - x*sin(theta)) dtheta.
double bessel_j_integral(int nu, double x);

}  // namespace gluedtrees
