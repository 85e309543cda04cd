// Timing comparison of the serial reference paths against the OpenMP
// kernels: far-field matrix assembly (parallel over incident directions)
// and the indicator map (parallel over pixels).

#include <chrono>
#include <cstdio>

#include "monoscat/monotonicity.hpp"
#include "monoscat/operators.hpp"
#include "monoscat/threads.hpp"

using namespace monoscat;

namespace {

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
  Scene scene;
  scene.k = 2.0;
  scene.bounding_radius = 5.0;
  Shape kite;
  kite.kind = ShapeKind::Kite;
  kite.center = {-2.0, 1.5};
  kite.contrast = 1.0;
  scene.shapes.push_back(kite);

  const DirectionGrid dirs(64);
  AssemblyOptions opts;
  opts.grid_resolution = 128;

  std::printf("threads available: %d\n", thread_count());

  opts.parallel = false;
  FarFieldMatrix f;
  const double t_serial = timed([&] { f = assemble_far_field_matrix(scene, dirs, opts); });
  opts.parallel = true;
  FarFieldMatrix fp;
  const double t_par = timed([&] { fp = assemble_far_field_matrix(scene, dirs, opts); });
  const double diff = (f.entries - fp.entries).norm();
  std::printf("far-field assembly  serial %.3fs  openmp %.3fs  speedup %.2fx  |diff| %.3g\n",
              t_serial, t_par, t_serial / t_par, diff);

  const PixelGrid grid = make_pixel_grid(5.0, 60);
  IndicatorOptions iopts;
  iopts.parallel = false;
  IndicatorMap m1, m2;
  const double i_serial = timed([&] { m1 = indicator_map(f, grid, 0.1, 1, iopts); });
  iopts.parallel = true;
  const double i_par = timed([&] { m2 = indicator_map(f, grid, 0.1, 1, iopts); });
  int mismatches = 0;
  for (int j = 0; j < grid.count(); ++j) mismatches += m1.values[j] != m2.values[j];
  std::printf("indicator map       serial %.3fs  openmp %.3fs  speedup %.2fx  mismatches %d\n",
              i_serial, i_par, i_serial / i_par, mismatches);
  return 0;
}
