#include <doctest.h>

#include <cmath>

#include "monoscat/forward.hpp"

using namespace monoscat;

namespace {
constexpr double kPi = 3.14159265358979323846;

Scene disc_scene(double radius, double q, double k) {
  Scene s;
  s.k = k;
  s.bounding_radius = 1.5 * radius + 0.1;
  Shape d;
  d.kind = ShapeKind::Disc;
  d.radius = radius;
  d.contrast = q;
  s.shapes.push_back(d);
  return s;
}

double rel_error(const MatrixXcd& a, const MatrixXcd& b) {
  return (a - b).norm() / b.norm();
}
} // namespace

TEST_CASE("zero contrast: total field equals the incident plane wave") {
  const Scene s = disc_scene(1.0, 0.0, 2.0);
  const ContrastField q = rasterize(s, 2.0, 32);
  const PlaneWave pw{{1.0, 0.0}};
  const TotalField u = solve_total_field(q, pw, 2.0);
  for (int i = 0; i < 32; i += 5)
    for (int j = 0; j < 32; j += 5) {
      const Point x = q.cell_center(i, j);
      const cdouble expected = std::exp(cdouble(0.0, 2.0 * x.x()));
      CHECK(std::abs(u.values(i, j) - expected) < 1e-12);
    }
  const DirectionGrid dirs(16);
  CHECK(far_field(q, u, dirs).norm() == 0.0);
}

TEST_CASE("herglotz quadrature") {
  const DirectionGrid dirs(64);
  SUBCASE("constant density at the origin integrates to 2pi") {
    HerglotzWave g{dirs, VectorXcd::Ones(64)};
    const VectorXcd v = evaluate_herglotz(g, 1.0, {{0.0, 0.0}});
    CHECK(std::abs(v[0] - cdouble(2.0 * kPi, 0.0)) < 1e-12);
  }
  SUBCASE("zero density gives zero") {
    HerglotzWave g{dirs, VectorXcd::Zero(64)};
    CHECK(evaluate_herglotz(g, 1.0, {{0.7, -0.3}}).norm() == 0.0);
  }
  SUBCASE("N=64 matches dense N=4096 quadrature (2pi J_0(1))") {
    HerglotzWave g{dirs, VectorXcd::Ones(64)};
    const cdouble v64 = evaluate_herglotz(g, 1.0, {{1.0, 0.0}})[0];
    const DirectionGrid dense(4096);
    HerglotzWave gd{dense, VectorXcd::Ones(4096)};
    const cdouble vd = evaluate_herglotz(gd, 1.0, {{1.0, 0.0}})[0];
    CHECK(std::abs(v64 - vd) < 1e-10);
    CHECK(std::abs(v64 - 2.0 * kPi * bessel_j(0, 1.0)) < 1e-10);
  }
  SUBCASE("density length must match the grid") {
    HerglotzWave g{dirs, VectorXcd::Ones(32)};
    CHECK_THROWS_AS(evaluate_herglotz(g, 1.0, {{0.0, 0.0}}), std::invalid_argument);
  }
}

TEST_CASE("mie far field fixtures (independent reference values)") {
  struct Fixture { double a, q, k, phi; cdouble v; };
  const Fixture fixtures[] = {
      {1.0, 1.0, 2.0, 0.0, {7.827959969484396, 7.661357194900474}},
      {1.0, 1.0, 2.0, kPi / 3.0, {2.751913849892341, 4.219144077966549}},
      {1.0, 1.0, 2.0, kPi, {0.03051568073901703, -3.0996536934471086}},
      {1.0, 2.0, 1.0, 0.7, {3.382605639573978, 3.2607510403426354}},
      {1.0, -0.5, 5.0, 2.0, {-2.445273084071279, -0.7774736973476999}},
      {0.7, 0.5, 3.0, 1.234, {1.8444269145248127, 1.3045728657406594}},
  };
  for (const auto& f : fixtures) {
    CAPTURE(f.phi);
    const cdouble v = mie_far_field_value(f.a, f.q, f.k, f.phi);
    CHECK(std::abs(v - f.v) < 1e-10 * std::abs(f.v));
  }
}

TEST_CASE("mie matrix is circulant and zero for zero contrast") {
  const DirectionGrid dirs(16);
  CHECK(mie_far_field(1.0, 0.0, 2.0, dirs).norm() == 0.0);
  const MatrixXcd m = mie_far_field(1.0, 1.0, 2.0, dirs);
  for (int l = 0; l < 16; ++l)
    for (int c = 0; c < 16; ++c)
      CHECK(std::abs(m(l, c) - m((l + 1) % 16, (c + 1) % 16)) < 1e-12);
}

TEST_CASE("mie series error when not converged") {
  CHECK_THROWS_AS(mie_far_field_value(1.0, 1.0, 5.0, 0.0, 3), std::runtime_error);
}

TEST_CASE("solver matches the mie oracle for a penetrable disc") {
  const double k = 2.0;
  const Scene s = disc_scene(1.0, 1.0, k);
  const ContrastField q = rasterize(s, 2.0, 128);
  const PlaneWave pw{{1.0, 0.0}};
  const TotalField u = solve_total_field(q, pw, k);

  // Interior field against the analytic series, relative L2 over the disc.
  double num = 0.0, den = 0.0;
  for (int i = 0; i < q.resolution; ++i)
    for (int j = 0; j < q.resolution; ++j) {
      const Point x = q.cell_center(i, j);
      if (x.norm() > 0.85) continue;  // stay away from the rasterized boundary
      const cdouble exact = mie_total_field_value(1.0, 1.0, k, x, {1.0, 0.0});
      num += std::norm(u.values(i, j) - exact);
      den += std::norm(exact);
    }
  CHECK(std::sqrt(num / den) < 1e-2);

  // Far field against the analytic series.
  const DirectionGrid dirs(32);
  const VectorXcd ff = far_field(q, u, dirs);
  VectorXcd exact(32);
  for (int l = 0; l < 32; ++l)
    exact[l] = mie_far_field_value(1.0, 1.0, k, dirs.angle(l));
  CHECK((ff - exact).norm() / exact.norm() < 1e-2);
}

TEST_CASE("weak contrast: one-term Born expansion is second-order accurate") {
  const double k = 2.0, eps1 = 1e-2, eps2 = 1e-3;
  auto defect = [&](double eps) {
    const Scene s = disc_scene(1.0, eps, k);
    const ContrastField q = rasterize(s, 2.0, 64);
    const PlaneWave pw{{0.0, 1.0}};
    const TotalField u = solve_total_field(q, pw, k);
    const MatrixXcd born = born_first_order(q, pw, k);
    return (u.values - born).norm() / incident_on_grid(pw, q, k).norm();
  };
  const double d1 = defect(eps1), d2 = defect(eps2);
  CHECK(d1 < 1e-3);
  // O(eps^2): shrinking eps by 10 shrinks the defect by ~100.
  CHECK(d2 < d1 / 50.0);
}

TEST_CASE("discrete reciprocity: u_inf(x,theta) = u_inf(-theta,-x)") {
  const double k = 2.0;
  const Scene s = disc_scene(0.8, 1.0, k);
  ContrastField q = rasterize(s, 1.5, 64);
  // Break the rotational symmetry so the check is non-trivial.
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 64; ++j) q.values(i, j) *= 0.3;

  const DirectionGrid dirs(8);
  MatrixXcd ff(8, 8);
  for (int m = 0; m < 8; ++m) {
    const TotalField u = solve_total_field(q, PlaneWave{dirs.direction(m)}, k);
    ff.col(m) = far_field(q, u, dirs);
  }
  const int half = 4;
  for (int l = 0; l < 8; ++l)
    for (int m = 0; m < 8; ++m) {
      const cdouble rhs = ff((m + half) % 8, (l + half) % 8);
      CHECK(std::abs(ff(l, m) - rhs) < 1e-7 * ff.norm());
    }
}

TEST_CASE("solver errors") {
  const Scene s = disc_scene(1.0, 1.0, 2.0);
  const ContrastField q = rasterize(s, 2.0, 32);
  CHECK_THROWS_AS(solve_total_field(q, PlaneWave{{1.0, 0.0}}, -1.0),
                  std::invalid_argument);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  cfg.restart = 1;
  CHECK_THROWS_AS(solve_total_field(q, PlaneWave{{1.0, 0.0}}, 2.0, cfg),
                  std::runtime_error);
  const TotalField u = solve_total_field(q, PlaneWave{{1.0, 0.0}}, 2.0);
  const ContrastField q2 = rasterize(s, 2.0, 16);
  const DirectionGrid dirs(8);
  CHECK_THROWS_AS(far_field(q2, u, dirs), std::invalid_argument);
}

TEST_CASE("repeated solves are bit-identical") {
  const Scene s = disc_scene(1.0, 1.0, 2.0);
  const ContrastField q = rasterize(s, 2.0, 64);
  const PlaneWave pw{{0.6, 0.8}};
  const TotalField a = solve_total_field(q, pw, 2.0);
  const TotalField b = solve_total_field(q, pw, 2.0);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}
