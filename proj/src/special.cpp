#include "monoscat/special.hpp"

#include <cmath>
#include <stdexcept>

namespace monoscat {

double bessel_j(int n, double x) {
  if (x < 0.0) throw std::domain_error("bessel_j: x must be >= 0");
  const int m = std::abs(n);
  double v = std::cyl_bessel_j(static_cast<double>(m), x);
  return (n < 0 && (m & 1)) ? -v : v;
}

double bessel_y(int n, double x) {
  if (x <= 0.0) throw std::domain_error("bessel_y: x must be > 0");
  const int m = std::abs(n);
  double v = std::cyl_neumann(static_cast<double>(m), x);
  return (n < 0 && (m & 1)) ? -v : v;
}

cdouble hankel1(int n, double x) {
  return {bessel_j(n, x), bessel_y(n, x)};
}

double bessel_j_prime(int n, double x) {
  if (n == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x));
}

cdouble hankel1_prime(int n, double x) {
  if (n == 0) return -hankel1(1, x);
  return 0.5 * (hankel1(n - 1, x) - hankel1(n + 1, x));
}

cdouble helmholtz_kernel(double k, double r) {
  return cdouble(0.0, 0.25) * hankel1(0, k * r);
}

cdouble kernel_disc_integral(double k, double rho) {
  const double pi = 3.14159265358979323846;
  return cdouble(0.0, 1.0) * (pi * rho / (2.0 * k)) * hankel1(1, k * rho)
         - 1.0 / (k * k);
}

} // namespace monoscat
