#include <doctest.h>

#include <cmath>
#include <random>

#include "monoscat/monotonicity.hpp"

using namespace monoscat;

namespace {

MatrixXcd random_hermitian(int n, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cdouble(gauss(rng), gauss(rng));
  return scale * 0.5 * (a + a.adjoint()).eval();
}

VectorXcd random_density(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  VectorXcd g(n);
  for (int i = 0; i < n; ++i) g[i] = cdouble(gauss(rng), gauss(rng));
  return g;
}

} // namespace

TEST_CASE("count_signed_eigs basics") {
  SUBCASE("diag(1,-1,0)") {
    MatrixXcd h = MatrixXcd::Zero(3, 3);
    h(0, 0) = 1.0;
    h(1, 1) = -1.0;
    const EigCountReport r = count_signed_eigs(h);
    CHECK(r.n_negative == 1);
    CHECK(r.n_positive == 1);
    CHECK(r.n_discarded == 1);
    CHECK(r.n_negative + r.n_positive + r.n_discarded == 3);
  }
  SUBCASE("zero matrix discards everything") {
    const EigCountReport r = count_signed_eigs(MatrixXcd::Zero(5, 5));
    CHECK(r.n_negative == 0);
    CHECK(r.n_positive == 0);
    CHECK(r.n_discarded == 5);
  }
  SUBCASE("negated rank-one Born pixel has exactly one negative eigenvalue") {
    const DirectionGrid dirs(12);
    const BornPixelOperator t = assemble_born_pixel({0.3, 0.4}, 0.5, dirs, 2.0);
    const EigCountReport r = count_signed_eigs((-0.7 * t.entries).eval());
    CHECK(r.n_negative == 1);
    CHECK(r.n_positive == 0);
    CHECK(r.n_discarded == 11);
  }
  SUBCASE("non-hermitian input is rejected") {
    MatrixXcd h = MatrixXcd::Zero(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(count_signed_eigs(h), std::invalid_argument);
  }
  SUBCASE("counts are recomputable from the eigenvalue list") {
    const MatrixXcd h = random_hermitian(10, 11);
    const EigCountReport r = count_signed_eigs(h, 1e-10);
    int neg = 0, pos = 0, disc = 0;
    for (int i = 0; i < r.eigenvalues.size(); ++i) {
      if (r.eigenvalues[i] < -r.delta) ++neg;
      else if (r.eigenvalues[i] > r.delta) ++pos;
      else ++disc;
    }
    CHECK(neg == r.n_negative);
    CHECK(pos == r.n_positive);
    CHECK(disc == r.n_discarded);
  }
}

TEST_CASE("leqfin_test") {
  SUBCASE("A = B holds with zero negatives") {
    const MatrixXcd a = random_hermitian(8, 1);
    const LeqFinResult r = leqfin_test(a, a, 1e-14, 0);
    CHECK(r.holds);
    CHECK(r.report.n_negative == 0);
  }
  SUBCASE("I vs 0 fails with N negatives") {
    const MatrixXcd i8 = MatrixXcd::Identity(8, 8);
    const LeqFinResult r = leqfin_test(i8, MatrixXcd::Zero(8, 8), 1e-14, 7);
    CHECK_FALSE(r.holds);
    CHECK(r.report.n_negative == 8);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(leqfin_test(MatrixXcd::Zero(3, 3), MatrixXcd::Zero(4, 4)),
                    std::invalid_argument);
  }
}

TEST_CASE("leqfin transitivity proxy on constructed triples") {
  // If B - A has n1 negatives and C - B has n2, then C - A has at most
  // n1 + n2 negatives (eigenvalue count subadditivity under sums).
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 12;
    const MatrixXcd a = random_hermitian(n, 1000 + trial);
    const MatrixXcd ab = random_hermitian(n, 2000 + trial);
    const MatrixXcd bc = random_hermitian(n, 3000 + trial);
    const MatrixXcd b = a + ab;
    const MatrixXcd c = b + bc;
    const int n1 = leqfin_test(a, b, 1e-12, n).report.n_negative;
    const int n2 = leqfin_test(b, c, 1e-12, n).report.n_negative;
    const int n3 = leqfin_test(a, c, 1e-12, n).report.n_negative;
    CHECK(n3 <= n1 + n2);
  }
}

TEST_CASE("monotonicity gap of identical operators vanishes") {
  FarFieldMatrix f;
  f.k = 2.0;
  f.n_dirs = 8;
  f.entries = random_hermitian(8, 5) + cdouble(0, 1) * random_hermitian(8, 6);
  const MatrixXcd gap = monotonicity_gap(f, f);
  CHECK(gap.norm() == 0.0);
}

TEST_CASE("indicator map of the zero matrix is identically 1") {
  FarFieldMatrix f;
  f.k = 2.0;
  f.n_dirs = 16;
  f.entries = MatrixXcd::Zero(16, 16);
  const PixelGrid grid = make_pixel_grid(2.0, 5);
  const IndicatorMap map = indicator_map(f, grid, 0.5, 1);
  CHECK(map.baseline == 0);
  for (int v : map.values) CHECK(v == 1);
}

TEST_CASE("rank-one interlacing: |I - baseline| <= 1 on random matrices") {
  const DirectionGrid dirs(20);
  const PixelGrid grid = make_pixel_grid(3.0, 4);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    FarFieldMatrix f;
    f.k = 1.5;
    f.n_dirs = 20;
    f.entries = random_hermitian(20, 500 + trial) +
                cdouble(0, 1) * random_hermitian(20, 600 + trial);
    const double alpha = unif(rng) * 2.0;
    const int sign = alpha >= 0.0 ? 1 : -1;
    const IndicatorMap map = indicator_map(f, grid, alpha, sign);
    for (int v : map.values) CHECK(std::abs(v - map.baseline) <= 1);
  }
}

TEST_CASE("twosided test") {
  const PixelGrid grid = make_pixel_grid(2.0, 4);
  std::vector<int> all(grid.count());
  for (int j = 0; j < grid.count(); ++j) all[j] = j;

  SUBCASE("zero far field is inside for alpha <= 0 <= beta") {
    FarFieldMatrix f;
    f.k = 2.0;
    f.n_dirs = 12;
    f.entries = MatrixXcd::Zero(12, 12);
    const TwoSidedResult r = twosided_test(f, grid, all, -0.5, 0.5);
    CHECK(r.inside);
  }
  SUBCASE("empty region is rejected") {
    FarFieldMatrix f;
    f.k = 2.0;
    f.n_dirs = 12;
    f.entries = MatrixXcd::Zero(12, 12);
    CHECK_THROWS_AS(twosided_test(f, grid, {}, -0.5, 0.5), std::invalid_argument);
  }
}

TEST_CASE("shrink on the zero matrix returns the empty mask") {
  FarFieldMatrix f;
  f.k = 2.0;
  f.n_dirs = 12;
  f.entries = MatrixXcd::Zero(12, 12);
  const std::vector<bool> mask = shrink_reconstruct(f, 2.0, 4, -0.5, 0.5);
  for (bool b : mask) CHECK_FALSE(b);
}

TEST_CASE("localize_density") {
  const DirectionGrid dirs(32);
  const double k = 2.0;
  double bw = 0.0;
  const auto b_pts = sample_disc({2.0, 0.0}, 1.0, 200, &bw);
  CHECK(b_pts.size() >= 200);

  SUBCASE("empty D: top eigenvalue grows like 1/eps") {
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const LocalizationResult r =
        localize_density(b_pts, bw, {}, 0.0, dirs, k, eps);
    CHECK(r.ratios[1] > 5.0 * r.ratios[0]);
    CHECK(r.ratios[2] > 5.0 * r.ratios[1]);
  }
  SUBCASE("eps schedule must decrease") {
    CHECK_THROWS_AS(localize_density(b_pts, bw, {}, 0.0, dirs, k, {1e-2, 1e-2}),
                    std::invalid_argument);
  }
  SUBCASE("ratios are monotone nondecreasing as eps decreases") {
    double dw = 0.0;
    const auto d_pts = sample_disc({-2.0, 0.0}, 1.0, 200, &dw);
    const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const LocalizationResult r =
        localize_density(b_pts, bw, d_pts, dw, dirs, k, eps);
    for (size_t i = 1; i < r.ratios.size(); ++i)
      CHECK(r.ratios[i] >= 0.99 * r.ratios[i - 1]);
    for (const auto& g : r.densities)
      CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
