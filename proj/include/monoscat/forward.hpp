#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "monoscat/scene.hpp"
#include "monoscat/special.hpp"

namespace monoscat {

using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

// N equidistant unit directions on the circle, phi_n = n * 2pi/N,
// quadrature weight 2pi/N.
struct DirectionGrid {
  int n = 2;

  explicit DirectionGrid(int count);
  double weight() const { return 2.0 * 3.14159265358979323846 / n; }
  double angle(int m) const { return m * weight(); }
  Point direction(int m) const { return {std::cos(angle(m)), std::sin(angle(m))}; }
};

struct PlaneWave {
  Point direction{1.0, 0.0};  // unit vector
};

struct HerglotzWave {
  DirectionGrid grid;
  VectorXcd density;  // length grid.n
};

using IncidentField = std::variant<PlaneWave, HerglotzWave>;

struct SolverConfig {
  double gmres_tolerance = 1e-10;
  int max_iterations = 500;
  int restart = 50;
  double points_per_wavelength_min = 10.0;
};

struct TotalField {
  double box_halfwidth = 1.0;
  int resolution = 2;
  double k = 1.0;
  MatrixXcd values;  // u_q at cell centers, layout as ContrastField
};

// Incident field values at the cell centers of the contrast grid.
MatrixXcd incident_on_grid(const IncidentField& inc, const ContrastField& q, double k);

// Herglotz wave function u^i_g(x) = (2pi/N) sum_m e^{i k x.theta_m} g_m.
VectorXcd evaluate_herglotz(const HerglotzWave& g, double k,
                            const std::vector<Point>& points);

// Solves the Lippmann-Schwinger equation (I - k^2 V_q) u = u^i by
// restarted GMRES with an FFT-applied convolution kernel; the singular
// self-cell uses the exact integral of the kernel over an equal-area disc.
// Throws std::runtime_error on non-convergence, std::invalid_argument on k <= 0.
TotalField solve_total_field(const ContrastField& q, const IncidentField& inc,
                             double k, const SolverConfig& cfg = {});

// Far field pattern of the solved field, u_inf(xhat_l) =
// k^2 sum_cells q u e^{-ik xhat_l . y} * cell_area.
VectorXcd far_field(const ContrastField& q, const TotalField& u,
                    const DirectionGrid& dirs);

// One-term Born approximation u^i + k^2 V_q u^i on the grid (test oracle
// for the weak-contrast regime).
MatrixXcd born_first_order(const ContrastField& q, const IncidentField& inc,
                           double k);

// Analytic far field of a constant-contrast disc of given radius centered
// at the origin (separation of variables; Bessel series inside, Hankel
// series outside, coefficients from continuity of value and normal
// derivative). Entry (l,m) is u_inf(xhat_l; theta_m); depends only on the
// angle difference. Throws std::runtime_error if the series has not
// converged after n_terms orders.
MatrixXcd mie_far_field(double radius, double q_const, double k,
                        const DirectionGrid& dirs, int n_terms = 80);

// Scalar version, phi = angle(xhat) - angle(theta).
cdouble mie_far_field_value(double radius, double q_const, double k, double phi,
                            int n_terms = 80);

// Analytic total field inside/outside the disc for a unit plane wave
// incident from direction theta.
cdouble mie_total_field_value(double radius, double q_const, double k,
                              const Point& x, const Point& theta,
                              int n_terms = 80);

} // namespace monoscat
