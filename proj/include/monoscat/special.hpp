#pragma once

#include <complex>

namespace monoscat {

using cdouble = std::complex<double>;

// Cylindrical Bessel functions of integer order for real x > 0
// (x = 0 allowed for bessel_j). Accurate to better than 1e-12 relative
// over the argument ranges used here; validated against reference
// fixtures in the tests.
double bessel_j(int n, double x);
double bessel_y(int n, double x);

// Hankel function of the first kind, H_n^{(1)}(x) = J_n + i Y_n.
cdouble hankel1(int n, double x);

// Derivatives via J'_n = (J_{n-1} - J_{n+1}) / 2 (same recurrence for Y, H).
double bessel_j_prime(int n, double x);
cdouble hankel1_prime(int n, double x);

// 2D outgoing free-space kernel Phi(x) = (i/4) H_0^{(1)}(k|x|).
cdouble helmholtz_kernel(double k, double r);

// Integral of Phi over a disc of radius rho centered at the singularity:
//   int_{|y|<rho} Phi(y) dy = (i pi rho / (2k)) H_1^{(1)}(k rho) - 1/k^2.
// Used as the singularity-corrected self-cell weight of the volume solver.
cdouble kernel_disc_integral(double k, double rho);

} // namespace monoscat
