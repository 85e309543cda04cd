#include "monoscat/monotonicity.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <omp.h>
#include <stdexcept>

#include "monoscat/threads.hpp"

namespace monoscat {

namespace {

MatrixXcd hermitian_part(const MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

EigCountReport count_from_eigenvalues(const Eigen::VectorXd& ev, double delta) {
  EigCountReport r;
  r.delta = delta;
  r.eigenvalues = ev;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -delta) ++r.n_negative;
    else if (ev[i] > delta) ++r.n_positive;
    else ++r.n_discarded;
  }
  return r;
}

} // namespace

EigCountReport count_signed_eigs(const MatrixXcd& h, double delta) {
  const double norm = h.norm();
  if ((h - h.adjoint()).norm() > 1e-12 * std::max(norm, 1.0))
    throw std::invalid_argument("count_signed_eigs: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitian_part(h),
                                              Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("count_signed_eigs: eigensolver failed");
  return count_from_eigenvalues(es.eigenvalues(), delta);
}

MatrixXcd monotonicity_gap(const FarFieldMatrix& f1, const FarFieldMatrix& f2) {
  if (f1.entries.rows() != f2.entries.rows())
    throw std::invalid_argument("monotonicity_gap: dimension mismatch");
  if (f1.k != f2.k)
    throw std::invalid_argument("monotonicity_gap: wave number mismatch");
  const ScatteringMatrix s1 = scattering_matrix(f1);
  return hermitian_part(s1.entries.adjoint() * (f2.entries - f1.entries));
}

LeqFinResult leqfin_test(const MatrixXcd& a, const MatrixXcd& b, double delta,
                         int budget) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("leqfin_test: dimension mismatch");
  LeqFinResult r;
  r.report = count_signed_eigs(b - a, delta);
  r.holds = r.report.n_negative <= budget;
  return r;
}

IndicatorMap indicator_map(const FarFieldMatrix& f, const PixelGrid& pixels,
                           double alpha, int sign, const IndicatorOptions& opts) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("indicator_map: sign must be +1 or -1");
  if (alpha * sign <= 0.0)
    std::cerr << "note: alpha * sign <= 0 is outside the sign-definite regimes\n";

  const DirectionGrid dirs(f.n_dirs);
  const MatrixXcd re_f = hermitian_part(f.entries);
  const double s = sign;

  IndicatorMap map;
  map.grid = pixels;
  map.alpha = alpha;
  map.sign = sign;
  map.delta = opts.delta;
  map.baseline = count_signed_eigs(s * re_f, opts.delta).n_negative;
  map.values.assign(pixels.count(), 0);

  #pragma omp parallel for schedule(dynamic, 8) num_threads(opts.parallel ? thread_count() : 1)
  for (int j = 0; j < pixels.count(); ++j) {
    const BornPixelOperator t =
        opts.exact_pixels
            ? assemble_born_pixel_exact(pixels.center(j), pixels.pixel_area(), dirs, f.k)
            : assemble_born_pixel(pixels.center(j), pixels.pixel_area(), dirs, f.k);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(s * (re_f - alpha * t.entries),
                                                Eigen::EigenvaluesOnly);
    int neg = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] < -opts.delta) ++neg;
    map.values[j] = neg;
  }
  return map;
}

namespace {

MatrixXcd region_born_operator(const PixelGrid& pixels, const std::vector<int>& region,
                               const DirectionGrid& dirs, double k) {
  MatrixXcd t = MatrixXcd::Zero(dirs.n, dirs.n);
  for (int j : region) {
    if (j < 0 || j >= pixels.count())
      throw std::invalid_argument("twosided_test: pixel index out of range");
    t += assemble_born_pixel_exact(pixels.center(j), pixels.pixel_area(), dirs, k).entries;
  }
  return t;
}

} // namespace

TwoSidedResult twosided_test(const FarFieldMatrix& f, const PixelGrid& pixels,
                             const std::vector<int>& region, double alpha,
                             double beta, double delta, int budget) {
  if (region.empty()) throw std::invalid_argument("twosided_test: region is empty");
  const DirectionGrid dirs(f.n_dirs);
  const MatrixXcd re_f = hermitian_part(f.entries);
  const MatrixXcd t = region_born_operator(pixels, region, dirs, f.k);

  TwoSidedResult r;
  const LeqFinResult lo = leqfin_test(alpha * t, re_f, delta, budget);
  const LeqFinResult hi = leqfin_test(re_f, beta * t, delta, budget);
  r.lower = lo.report;
  r.upper = hi.report;
  r.inside = lo.holds && hi.holds;
  return r;
}

std::vector<bool> shrink_reconstruct(const FarFieldMatrix& f, double roi_halfwidth,
                                     int pixels_per_axis, double alpha, double beta,
                                     double delta, int budget) {
  const PixelGrid pixels = make_pixel_grid(roi_halfwidth, pixels_per_axis);
  const DirectionGrid dirs(f.n_dirs);
  const MatrixXcd re_f = hermitian_part(f.entries);

  std::vector<bool> mask(pixels.count(), true);
  std::vector<MatrixXcd> pixel_ops(pixels.count());
  for (int j = 0; j < pixels.count(); ++j)
    pixel_ops[j] =
        assemble_born_pixel_exact(pixels.center(j), pixels.pixel_area(), dirs, f.k).entries;

  MatrixXcd t = MatrixXcd::Zero(dirs.n, dirs.n);
  for (int j = 0; j < pixels.count(); ++j) t += pixel_ops[j];

  auto passes = [&](const MatrixXcd& tb) {
    return leqfin_test(alpha * tb, re_f, delta, budget).holds &&
           leqfin_test(re_f, beta * tb, delta, budget).holds;
  };

  if (!passes(t))
    throw std::runtime_error(
        "shrink_reconstruct: sampling region too small or budget too strict");

  // Row-major sweeps to a fixpoint; the empty region trivially passes
  // only when Re F itself is within budget of zero, so stop before
  // removing the last pixel unless that is the case.
  bool changed = true;
  int kept = pixels.count();
  while (changed) {
    changed = false;
    for (int j = 0; j < pixels.count(); ++j) {
      if (!mask[j]) continue;
      if (kept == 1) {
        // Candidate empty region: passes iff -Re F and Re F are both
        // within budget at the threshold.
        const MatrixXcd zero = MatrixXcd::Zero(dirs.n, dirs.n);
        if (!(leqfin_test(zero, re_f, delta, budget).holds &&
              leqfin_test(re_f, zero, delta, budget).holds))
          continue;
      }
      const MatrixXcd trial = t - pixel_ops[j];
      if (passes(trial)) {
        t = trial;
        mask[j] = false;
        --kept;
        changed = true;
      }
    }
  }
  return mask;
}

LocalizationResult localize_density(const std::vector<Point>& b_points, double b_weight,
                                    const std::vector<Point>& d_points, double d_weight,
                                    const DirectionGrid& dirs, double k,
                                    const std::vector<double>& eps_schedule) {
  if (b_points.empty()) throw std::invalid_argument("localize_density: B has no points");
  for (size_t i = 1; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      throw std::invalid_argument("localize_density: eps schedule must strictly decrease");
  for (double e : eps_schedule)
    if (!(e > 0.0)) throw std::invalid_argument("localize_density: eps must be > 0");

  const int n = dirs.n;
  auto herglotz_matrix = [&](const std::vector<Point>& pts, double wt) {
    MatrixXcd l(pts.size(), n);
    const double s = std::sqrt(wt) * dirs.weight();
    for (size_t p = 0; p < pts.size(); ++p)
      for (int m = 0; m < n; ++m)
        l(p, m) = s * std::exp(cdouble(0.0, k * dirs.direction(m).dot(pts[p])));
    return l;
  };

  const MatrixXcd lb = herglotz_matrix(b_points, b_weight);
  const MatrixXcd bb = lb.adjoint() * lb;  // L_B* L_B
  MatrixXcd dd = MatrixXcd::Zero(n, n);
  if (!d_points.empty()) {
    const MatrixXcd ld = herglotz_matrix(d_points, d_weight);
    dd = ld.adjoint() * ld;
  }

  LocalizationResult res;
  res.eps_schedule = eps_schedule;
  for (double eps : eps_schedule) {
    const MatrixXcd reg = dd + eps * MatrixXcd::Identity(n, n);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(bb, reg);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("localize_density: generalized eigensolver failed");
    VectorXcd g = es.eigenvectors().col(n - 1);  // top eigenvector
    g.normalize();

    double ratio;
    if (d_points.empty()) {
      ratio = es.eigenvalues()(n - 1);  // unconstrained maximization, ~ 1/eps
    } else {
      const double num = (lb * g).squaredNorm();
      const double den = std::real(g.dot(dd * g));
      ratio = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
    }
    res.densities.push_back(std::move(g));
    res.ratios.push_back(ratio);
  }
  return res;
}

std::vector<Point> sample_disc(const Point& center, double radius, int min_points,
                               double* weight) {
  // Uniform grid restricted to the disc; refine until enough samples.
  int per_axis = std::max(2, static_cast<int>(std::ceil(std::sqrt(min_points * 4.0 / 3.14))));
  std::vector<Point> pts;
  double h = 0.0;
  while (true) {
    pts.clear();
    h = 2.0 * radius / per_axis;
    for (int i = 0; i < per_axis; ++i)
      for (int j = 0; j < per_axis; ++j) {
        const Point p{center.x() - radius + (j + 0.5) * h,
                      center.y() - radius + (i + 0.5) * h};
        if ((p - center).norm() < radius) pts.push_back(p);
      }
    if (static_cast<int>(pts.size()) >= min_points) break;
    ++per_axis;
  }
  if (weight) *weight = h * h;
  return pts;
}

} // namespace monoscat
