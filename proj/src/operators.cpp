#include "monoscat/operators.hpp"

#include <cmath>
#include <iostream>
#include <omp.h>
#include <stdexcept>

#include "monoscat/threads.hpp"

namespace monoscat {

namespace {
constexpr double kPi = 3.14159265358979323846;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }
} // namespace

FarFieldMatrix assemble_far_field_matrix(const Scene& scene, const DirectionGrid& dirs,
                                         const AssemblyOptions& opts) {
  scene.validate();
  const double box = opts.box_halfwidth > 0.0 ? opts.box_halfwidth : scene.bounding_radius;
  if (dirs.n < 2.0 * scene.k * scene.bounding_radius)
    std::cerr << "note: N = " << dirs.n << " is below the sampling guidance 2kR = "
              << 2.0 * scene.k * scene.bounding_radius << "\n";

  FarFieldMatrix f;
  f.k = scene.k;
  f.n_dirs = dirs.n;
  f.entries = MatrixXcd::Zero(dirs.n, dirs.n);
  if (scene.shapes.empty()) return f;

  const ContrastField q = rasterize(scene, box, opts.grid_resolution);
  if (q.values.cwiseAbs().maxCoeff() == 0.0) return f;

  const double w = dirs.weight();
  std::exception_ptr error;

  #pragma omp parallel for schedule(dynamic) num_threads(opts.parallel ? thread_count() : 1)
  for (int m = 0; m < dirs.n; ++m) {
    try {
      const PlaneWave pw{dirs.direction(m)};
      const TotalField u = solve_total_field(q, pw, scene.k, opts.solver);
      const VectorXcd col = far_field(q, u, dirs);
      f.entries.col(m) = w * col;
    } catch (...) {
      #pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return f;
}

ScatteringMatrix scattering_matrix(const FarFieldMatrix& f) {
  if (!(f.k > 0.0)) throw std::invalid_argument("scattering_matrix: k must be > 0");
  const double cd2 = 1.0 / (8.0 * kPi * f.k);  // |C_2|^2
  ScatteringMatrix s;
  s.k = f.k;
  s.entries = MatrixXcd::Identity(f.entries.rows(), f.entries.cols())
              + cdouble(0.0, 2.0 * f.k * cd2) * f.entries;
  return s;
}

double eigenvalue_circle_radius(double k) {
  const double cd2 = 1.0 / (8.0 * kPi * k);
  return 1.0 / (2.0 * k * cd2);  // = 4 pi
}

BornPixelOperator assemble_born_pixel(const Point& z, double area,
                                      const DirectionGrid& dirs, double k) {
  if (!(area > 0.0)) throw std::invalid_argument("born pixel: area must be > 0");
  const int n = dirs.n;
  const double c = dirs.weight() * k * k * area;
  BornPixelOperator t;
  t.center = z;
  t.area = area;
  t.entries.resize(n, n);
  // v v* structure with v_l = e^{-i k z.theta_l}; build the upper triangle
  // and mirror so Hermitian symmetry is exact.
  VectorXcd v(n);
  for (int l = 0; l < n; ++l) v[l] = std::exp(cdouble(0.0, -k * z.dot(dirs.direction(l))));
  for (int l = 0; l < n; ++l) {
    t.entries(l, l) = c;
    for (int m = l + 1; m < n; ++m) {
      const cdouble e = c * v[l] * std::conj(v[m]);
      t.entries(l, m) = e;
      t.entries(m, l) = std::conj(e);
    }
  }
  return t;
}

BornPixelOperator assemble_born_pixel_exact(const Point& z, double area,
                                            const DirectionGrid& dirs, double k) {
  if (!(area > 0.0)) throw std::invalid_argument("born pixel: area must be > 0");
  const int n = dirs.n;
  const double side = std::sqrt(area);
  const double c = dirs.weight() * k * k;
  BornPixelOperator t;
  t.center = z;
  t.area = area;
  t.entries.resize(n, n);
  for (int l = 0; l < n; ++l) {
    t.entries(l, l) = c * area;
    for (int m = l + 1; m < n; ++m) {
      const Point d = dirs.direction(m) - dirs.direction(l);
      // int_P e^{i k x.d} dx over the square pixel.
      const cdouble phase = std::exp(cdouble(0.0, k * z.dot(d)));
      const double amp = area * sinc(0.5 * k * d.x() * side) * sinc(0.5 * k * d.y() * side);
      const cdouble e = c * amp * phase;
      t.entries(l, m) = e;
      t.entries(m, l) = std::conj(e);
    }
  }
  return t;
}

double herglotz_energy(const BornPixelOperator& t, const VectorXcd& g) {
  if (g.size() != t.entries.rows())
    throw std::invalid_argument("herglotz_energy: density length does not match operator");
  const cdouble e = g.dot(t.entries * g);  // g^* T g
  if (std::abs(e.imag()) > 1e-12 * (1.0 + std::abs(e.real())))
    throw std::runtime_error("herglotz_energy: quadratic form is not real");
  return e.real();
}

double check_energy_identity(const FarFieldMatrix& f, const Scene& scene,
                             const VectorXcd& g, const AssemblyOptions& opts) {
  if (g.size() != f.entries.rows())
    throw std::invalid_argument("check_energy_identity: density length mismatch");
  const DirectionGrid dirs(f.n_dirs);
  const double w = dirs.weight();

  // Left side: int g conj(F_q g) ds ~ (2pi/N) sum_l g_l conj((F g)_l).
  const VectorXcd fg = f.entries * g;
  cdouble lhs = 0.0;
  for (int l = 0; l < dirs.n; ++l) lhs += g[l] * std::conj(fg[l]);
  lhs *= w;

  // Right side: k^2 int q u^i_g conj(u_{q,g}).
  const double box = opts.box_halfwidth > 0.0 ? opts.box_halfwidth : scene.bounding_radius;
  const ContrastField q = rasterize(scene, box, opts.grid_resolution);
  const HerglotzWave hg{dirs, g};
  const MatrixXcd ui = incident_on_grid(hg, q, scene.k);
  const TotalField u = solve_total_field(q, hg, scene.k, opts.solver);
  cdouble rhs = 0.0;
  for (int i = 0; i < q.resolution; ++i)
    for (int j = 0; j < q.resolution; ++j)
      if (q.values(i, j) != 0.0)
        rhs += q.values(i, j) * ui(i, j) * std::conj(u.values(i, j));
  rhs *= scene.k * scene.k * q.cell_area();

  return std::abs(lhs - rhs);
}

} // namespace monoscat
