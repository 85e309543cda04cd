#pragma once

#include <Eigen/Dense>

#include "monoscat/forward.hpp"
#include "monoscat/scene.hpp"

namespace monoscat {

// Discrete far field operator, F = (2pi/N) [u_inf(xhat_l; theta_m)].
struct FarFieldMatrix {
  MatrixXcd entries;
  double k = 1.0;
  int n_dirs = 0;
};

struct ScatteringMatrix {
  MatrixXcd entries;  // S = I + 2ik|C_2|^2 F, |C_2|^2 = 1/(8 pi k)
  double k = 1.0;
};

// Rank-one pixel discretization of the Born operator T_B,
//   entry (l,m) = (2pi/N) k^2 |P| e^{i k z.(theta_m - theta_l)}.
// Hermitian PSD with single nonzero eigenvalue 2 pi k^2 |P|.
struct BornPixelOperator {
  Point center{0.0, 0.0};
  double area = 0.0;
  MatrixXcd entries;
};

struct AssemblyOptions {
  int grid_resolution = 256;       // M cells per axis for the forward solves
  double box_halfwidth = 0.0;      // 0 = use scene bounding radius
  SolverConfig solver{};
  bool parallel = true;            // OpenMP over incident directions
};

// One forward solve per incident direction; column m holds
// (2pi/N) u_inf(.; theta_m). Emits a note to stderr when the sampling
// guidance N >= 2kR is violated.
FarFieldMatrix assemble_far_field_matrix(const Scene& scene, const DirectionGrid& dirs,
                                         const AssemblyOptions& opts = {});

ScatteringMatrix scattering_matrix(const FarFieldMatrix& f);

// Center of the eigenvalue circle is i/(2k|C_2|^2) = 4 pi i, radius 4 pi.
double eigenvalue_circle_radius(double k);

BornPixelOperator assemble_born_pixel(const Point& z, double area,
                                      const DirectionGrid& dirs, double k);

// Exact pixel integration of the Born operator over the axis-aligned
// square pixel of side sqrt(area) centered at z (sinc factors instead of
// the constant-phase midpoint rule).
BornPixelOperator assemble_born_pixel_exact(const Point& z, double area,
                                            const DirectionGrid& dirs, double k);

// Quadratic form g* (T g); imaginary part must vanish to rounding.
double herglotz_energy(const BornPixelOperator& t, const VectorXcd& g);

// Residual | (2pi/N) sum_l g_l conj((F g)_l) - k^2 sum_cells q u^i_g conj(u_g) dA |
// of the far field energy identity, with u_g solved on the given grid.
double check_energy_identity(const FarFieldMatrix& f, const Scene& scene,
                             const VectorXcd& g, const AssemblyOptions& opts = {});

} // namespace monoscat
