#pragma once

#include <Eigen/Dense>
#include <vector>

#include "monoscat/operators.hpp"
#include "monoscat/scene.hpp"

namespace monoscat {

// Default absolute threshold for discarding near-zero eigenvalues.
inline constexpr double kDefaultDelta = 1e-14;

struct EigCountReport {
  int n_negative = 0;   // eigenvalues < -delta
  int n_positive = 0;   // eigenvalues > +delta
  int n_discarded = 0;  // |lambda| <= delta
  double delta = kDefaultDelta;
  Eigen::VectorXd eigenvalues;  // ascending
};

// Full eigendecomposition of the Hermitian part (H + H*)/2 with counts at
// the threshold delta. Throws std::invalid_argument if H deviates from
// Hermitian by more than 1e-12 * ||H||.
EigCountReport count_signed_eigs(const MatrixXcd& h, double delta = kDefaultDelta);

// Re(S1* (F2 - F1)) with S1 = scattering_matrix(F1); the Hermitian gap
// whose signed eigenvalue counts express the monotonicity direction.
MatrixXcd monotonicity_gap(const FarFieldMatrix& f1, const FarFieldMatrix& f2);

struct LeqFinResult {
  bool holds = false;
  EigCountReport report;
};

// A <=_fin B certified at finite N: the count of eigenvalues of B - A
// below -delta must not exceed the budget.
LeqFinResult leqfin_test(const MatrixXcd& a, const MatrixXcd& b,
                         double delta = kDefaultDelta, int budget = 0);

struct IndicatorMap {
  PixelGrid grid;
  std::vector<int> values;  // I_alpha per pixel, row-major
  double alpha = 0.0;
  int sign = 1;
  double delta = kDefaultDelta;
  int baseline = 0;  // negative count of sign * Re(F) alone
};

struct IndicatorOptions {
  double delta = kDefaultDelta;
  bool parallel = true;      // OpenMP over pixels
  bool exact_pixels = false; // exact-integration Born matrices
};

// Per-pixel count of eigenvalues below -delta of sign * (Re F - alpha T_P).
// Warns to stderr when alpha * sign <= 0 (outside the sign-definite regimes).
IndicatorMap indicator_map(const FarFieldMatrix& f, const PixelGrid& pixels,
                           double alpha, int sign,
                           const IndicatorOptions& opts = {});

struct TwoSidedResult {
  bool inside = false;
  EigCountReport lower;  // Re F - alpha T_B
  EigCountReport upper;  // beta T_B - Re F
};

// alpha T_B <=_fin Re(F) <=_fin beta T_B over the probing region given as
// pixel indices; T_B is the sum of exact-integration Born matrices.
TwoSidedResult twosided_test(const FarFieldMatrix& f, const PixelGrid& pixels,
                             const std::vector<int>& region, double alpha,
                             double beta, double delta = kDefaultDelta,
                             int budget = 0);

// Greedy support reconstruction: start from the full pixel grid and
// repeatedly drop any pixel whose removal keeps the two-sided test
// passing; row-major scan repeated to a fixpoint. Returns the surviving
// mask (true = kept). Throws std::runtime_error if the full region
// already fails the test.
std::vector<bool> shrink_reconstruct(const FarFieldMatrix& f, double roi_halfwidth,
                                     int pixels_per_axis, double alpha, double beta,
                                     double delta = kDefaultDelta, int budget = 0);

struct LocalizationResult {
  std::vector<VectorXcd> densities;   // unit-norm g per epsilon
  std::vector<double> ratios;         // ||u^i_g on B||^2 / ||u^i_g on D||^2
  std::vector<double> eps_schedule;
};

// Constructive surrogate for the localized wave functions: for each
// regularization value eps, g is the top generalized eigenvector of
//   (L_B* L_B) g = lambda (L_D* L_D + eps I) g,
// where L_X maps a density to Herglotz values at X's sample points scaled
// by the square root of the quadrature weight.
LocalizationResult localize_density(const std::vector<Point>& b_points, double b_weight,
                                    const std::vector<Point>& d_points, double d_weight,
                                    const DirectionGrid& dirs, double k,
                                    const std::vector<double>& eps_schedule);

// Uniform sample points of a disc region (grid spacing chosen to yield at
// least min_points samples).
std::vector<Point> sample_disc(const Point& center, double radius, int min_points,
                               double* weight);

} // namespace monoscat
