#include "monoscat/forward.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace monoscat {

namespace {

// Series coefficients for scattering of a unit plane wave by the disc
// |x| < a with constant contrast q (interior wave number ki = k sqrt(1+q)).
// With the angular expansion u = sum_n i^n c_n(r) e^{i n phi}, matching
// value and radial derivative at r = a gives, per order n >= 0,
//   scattered:  b_n H_n^{(1)}(k r)   (outside)
//   total:      a_n J_n(ki r)        (inside)
struct MieCoefficients {
  std::vector<cdouble> b;  // b[0..n_terms]
  std::vector<cdouble> a;
};

MieCoefficients mie_coefficients(double radius, double q_const, double k, int n_terms) {
  if (!(radius > 0.0)) throw std::invalid_argument("mie: radius must be > 0");
  if (!(q_const > -1.0)) throw std::invalid_argument("mie: contrast must be > -1");
  if (!(k > 0.0)) throw std::invalid_argument("mie: k must be > 0");
  const double ki = k * std::sqrt(1.0 + q_const);
  const double xa = k * radius, xi = ki * radius;

  MieCoefficients c;
  c.b.resize(n_terms + 1);
  c.a.resize(n_terms + 1);
  for (int n = 0; n <= n_terms; ++n) {
    const double Jk = bessel_j(n, xa), Jpk = bessel_j_prime(n, xa);
    const double Ji = bessel_j(n, xi), Jpi = bessel_j_prime(n, xi);
    const cdouble H = hankel1(n, xa), Hp = hankel1_prime(n, xa);
    const cdouble denom = ki * Jpi * H - k * Hp * Ji;
    c.b[n] = -(ki * Jpi * Jk - k * Jpk * Ji) / denom;
    c.a[n] = (Jk + c.b[n] * H) / Ji;
  }
  return c;
}

void check_converged(const std::vector<cdouble>& b, int n_terms) {
  double total = 0.0;
  for (const auto& v : b) total += std::abs(v);
  if (total > 0.0 && std::abs(b[n_terms]) > 1e-14 * total)
    throw std::runtime_error("mie series not converged; increase n_terms");
}

} // namespace

cdouble mie_far_field_value(double radius, double q_const, double k, double phi,
                            int n_terms) {
  if (q_const == 0.0) return 0.0;
  const MieCoefficients c = mie_coefficients(radius, q_const, k, n_terms);
  check_converged(c.b, n_terms);
  // Far asymptotics of H_n^{(1)} cancel the i^n prefactors, leaving
  // u_inf = -4i sum_n b_n e^{i n phi} in the normalization with
  // C_2 = e^{i pi/4} / sqrt(8 pi k).
  cdouble s = c.b[0];
  for (int n = 1; n <= n_terms; ++n)
    s += c.b[n] * 2.0 * std::cos(n * phi);  // b_{-n} = b_n
  return cdouble(0.0, -4.0) * s;
}

MatrixXcd mie_far_field(double radius, double q_const, double k,
                        const DirectionGrid& dirs, int n_terms) {
  const int n = dirs.n;
  MatrixXcd out = MatrixXcd::Zero(n, n);
  if (q_const == 0.0) return out;
  // Circulant: entries depend only on (l - m) mod N.
  std::vector<cdouble> row(n);
  for (int d = 0; d < n; ++d)
    row[d] = mie_far_field_value(radius, q_const, k, dirs.angle(d) - dirs.angle(0), n_terms);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) out(l, m) = row[((l - m) % n + n) % n];
  return out;
}

cdouble mie_total_field_value(double radius, double q_const, double k,
                              const Point& x, const Point& theta, int n_terms) {
  const double r = x.norm();
  const double phi = std::atan2(x.y(), x.x()) - std::atan2(theta.y(), theta.x());
  if (q_const == 0.0) return std::exp(cdouble(0.0, k * theta.dot(x)));
  const MieCoefficients c = mie_coefficients(radius, q_const, k, n_terms);
  check_converged(c.b, n_terms);
  const double ki = k * std::sqrt(1.0 + q_const);
  const cdouble iunit(0.0, 1.0);
  cdouble s = 0.0;
  cdouble ipow = 1.0;  // i^n
  for (int n = 0; n <= n_terms; ++n, ipow *= iunit) {
    cdouble radial;
    if (r < radius) radial = c.a[n] * bessel_j(n, ki * r);
    else radial = bessel_j(n, k * r) + c.b[n] * hankel1(n, k * r);
    const double ang = (n == 0) ? 1.0 : 2.0 * std::cos(n * phi);
    s += ipow * radial * ang;
  }
  return s;
}

} // namespace monoscat
