// Command-line front end: simulate | reconstruct | spectrum | shrink |
// localize | mie. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "monoscat/io.hpp"
#include "monoscat/threads.hpp"

namespace ms = monoscat;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string scene_path;
  std::string matrix_path;
  double k = 0.0;  // 0 = take from scene file
  int n_dirs = 64;
  int grid = 256;
  double roi = 5.0;
  int pixels = 100;
  std::vector<double> alphas{0.1};
  int sign = 1;
  double delta = ms::kDefaultDelta;
  double noise = 0.0;
  unsigned long long seed = 1;
  std::string out_dir = ".";
  double alpha_bound = 0.0, beta_bound = 0.0;
  int budget = 0;
  // localize regions (discs)
  std::vector<double> b_disc{0.0, 0.0, 1.0};  // cx, cy, radius
  std::vector<double> d_disc{0.0, 0.0, 0.0};  // radius 0 = empty D
  std::vector<double> eps_schedule{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  bool exact_pixels = false;
  int max_iters = 0;  // 0 = solver default
};

double timed(std::chrono::steady_clock::time_point& t0) {
  const auto t1 = std::chrono::steady_clock::now();
  const double s = std::chrono::duration<double>(t1 - t0).count();
  t0 = t1;
  return s;
}

std::string out_file(const Options& o, const std::string& name) {
  return (fs::path(o.out_dir) / name).string();
}

std::vector<std::pair<std::string, std::string>> config_echo(const Options& o) {
  std::vector<std::pair<std::string, std::string>> c;
  auto add = [&](const std::string& k, const std::string& v) { c.emplace_back(k, v); };
  add("scene", o.scene_path);
  add("matrix", o.matrix_path);
  add("k", ms::format_double(o.k));
  add("n_dirs", std::to_string(o.n_dirs));
  add("grid", std::to_string(o.grid));
  add("roi", ms::format_double(o.roi));
  add("pixels", std::to_string(o.pixels));
  add("sign", std::to_string(o.sign));
  add("delta", ms::format_double(o.delta));
  add("noise", ms::format_double(o.noise));
  add("seed", std::to_string(o.seed));
  add("threads", std::to_string(ms::thread_count()));
  std::ostringstream as;
  for (size_t i = 0; i < o.alphas.size(); ++i) as << (i ? "," : "") << o.alphas[i];
  add("alpha", as.str());
  return c;
}

void validate_common(const Options& o) {
  if (o.n_dirs < 2 || o.n_dirs % 2 != 0)
    throw CLI::ValidationError("--n-dirs", "N must be even and >= 2");
  if (!(o.noise >= 0.0 && o.noise < 1.0))
    throw CLI::ValidationError("--noise", "noise level must be in [0,1)");
}

ms::Scene load_scene_with_overrides(const Options& o) {
  if (o.scene_path.empty()) throw CLI::ValidationError("--scene", "scene file required");
  ms::Scene scene = ms::load_scene(o.scene_path);
  if (o.k > 0.0) scene.k = o.k;
  return scene;
}

int cmd_simulate(const Options& o) {
  validate_common(o);
  const ms::Scene scene = load_scene_with_overrides(o);
  const ms::DirectionGrid dirs(o.n_dirs);
  ms::AssemblyOptions opts;
  opts.grid_resolution = o.grid;
  if (o.max_iters > 0) opts.solver.max_iterations = o.max_iters;

  auto t0 = std::chrono::steady_clock::now();
  ms::FarFieldMatrix f = ms::assemble_far_field_matrix(scene, dirs, opts);
  ms::RunManifest man;
  man.command = "simulate";
  man.config = config_echo(o);
  man.timings.emplace_back("assemble", timed(t0));

  ms::add_noise(f, o.noise, o.seed);
  const std::string mfile = out_file(o, "farfield.csv");
  ms::write_matrix(f, mfile);
  man.timings.emplace_back("write", timed(t0));
  man.outputs.push_back(mfile);
  ms::write_manifest(man, out_file(o, "manifest.json"));
  std::cout << "wrote " << mfile << "\n";
  return 0;
}

int cmd_reconstruct(const Options& o) {
  validate_common(o);
  if (o.matrix_path.empty())
    throw CLI::ValidationError("--matrix", "matrix file required");
  const ms::FarFieldMatrix f = ms::read_matrix(o.matrix_path);
  const ms::PixelGrid grid = ms::make_pixel_grid(o.roi, o.pixels);

  ms::RunManifest man;
  man.command = "reconstruct";
  man.config = config_echo(o);

  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream summary;
  summary << "{\n  \"baselines\": {";
  bool first = true;
  for (double alpha : o.alphas) {
    ms::IndicatorOptions iopts;
    iopts.delta = o.delta;
    iopts.exact_pixels = o.exact_pixels;
    const ms::IndicatorMap map = ms::indicator_map(f, grid, alpha, o.sign, iopts);
    std::ostringstream tag;
    tag << "alpha_" << alpha;
    const std::string base = out_file(o, "indicator_" + tag.str());
    ms::write_indicator_csv(map, base + ".csv");
    ms::write_indicator_pgm(map, base + ".pgm");
    man.outputs.push_back(base + ".csv");
    man.outputs.push_back(base + ".pgm");
    summary << (first ? "" : ",") << "\n    \"" << ms::format_double(alpha)
            << "\": " << map.baseline;
    first = false;
  }
  summary << "\n  }\n}\n";
  man.timings.emplace_back("indicator", timed(t0));

  const std::string sfile = out_file(o, "summary.json");
  {
    std::ofstream out(sfile + ".tmp");
    out << summary.str();
  }
  fs::rename(sfile + ".tmp", sfile);
  man.outputs.push_back(sfile);
  ms::write_manifest(man, out_file(o, "manifest.json"));
  std::cout << "wrote " << o.alphas.size() << " indicator map(s)\n";
  return 0;
}

int cmd_spectrum(const Options& o) {
  if (o.matrix_path.empty())
    throw CLI::ValidationError("--matrix", "matrix file required");
  const ms::FarFieldMatrix f = ms::read_matrix(o.matrix_path);

  Eigen::ComplexEigenSolver<ms::MatrixXcd> es(f.entries);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const ms::EigCountReport re_report =
      ms::count_signed_eigs(0.5 * (f.entries + f.entries.adjoint()), o.delta);

  const std::string sfile = out_file(o, "spectrum.csv");
  ms::write_spectrum_csv(es.eigenvalues(), re_report.eigenvalues, f.k, sfile);

  double max_resid = 0.0;
  const double r = ms::eigenvalue_circle_radius(f.k);
  const ms::cdouble center(0.0, r);
  double fnorm = f.entries.norm();
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    max_resid = std::max(max_resid, std::abs(std::abs(es.eigenvalues()[i] - center) - r) / r);
  if (fnorm == 0.0)
    std::cout << "degenerate case: zero matrix, all eigenvalues 0 (on the circle)\n";
  std::cout << "max relative circle residual: " << max_resid << "\n";
  std::cout << "Re(F) counts at delta=" << o.delta << ": negative=" << re_report.n_negative
            << " positive=" << re_report.n_positive
            << " discarded=" << re_report.n_discarded << "\n";

  ms::RunManifest man;
  man.command = "spectrum";
  man.config = config_echo(o);
  man.outputs.push_back(sfile);
  ms::write_manifest(man, out_file(o, "manifest.json"));
  return 0;
}

int cmd_shrink(const Options& o) {
  validate_common(o);
  if (o.matrix_path.empty())
    throw CLI::ValidationError("--matrix", "matrix file required");
  const ms::FarFieldMatrix f = ms::read_matrix(o.matrix_path);
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<bool> mask = ms::shrink_reconstruct(
      f, o.roi, o.pixels, o.alpha_bound, o.beta_bound, o.delta, o.budget);

  const ms::PixelGrid grid = ms::make_pixel_grid(o.roi, o.pixels);
  const std::string mfile = out_file(o, "mask.csv");
  ms::write_mask_csv(grid, mask, mfile);

  ms::RunManifest man;
  man.command = "shrink";
  man.config = config_echo(o);
  man.timings.emplace_back("shrink", timed(t0));
  man.outputs.push_back(mfile);
  ms::write_manifest(man, out_file(o, "manifest.json"));
  int kept = 0;
  for (bool b : mask) kept += b;
  std::cout << "kept " << kept << " of " << mask.size() << " pixels\n";
  return 0;
}

int cmd_localize(const Options& o) {
  validate_common(o);
  const double k = o.k > 0.0 ? o.k : 1.0;
  const ms::DirectionGrid dirs(o.n_dirs);

  double bw = 0.0, dw = 0.0;
  const auto b_pts =
      ms::sample_disc({o.b_disc[0], o.b_disc[1]}, o.b_disc[2], 200, &bw);
  std::vector<ms::Point> d_pts;
  if (o.d_disc[2] > 0.0)
    d_pts = ms::sample_disc({o.d_disc[0], o.d_disc[1]}, o.d_disc[2], 200, &dw);

  auto t0 = std::chrono::steady_clock::now();
  const ms::LocalizationResult res =
      ms::localize_density(b_pts, bw, d_pts, dw, dirs, k, o.eps_schedule);

  const std::string rfile = out_file(o, "ratios.csv");
  ms::write_ratios_csv(res.eps_schedule, res.ratios, rfile);

  ms::RunManifest man;
  man.command = "localize";
  man.config = config_echo(o);
  man.timings.emplace_back("localize", timed(t0));
  man.outputs.push_back(rfile);
  ms::write_manifest(man, out_file(o, "manifest.json"));
  for (size_t i = 0; i < res.ratios.size(); ++i)
    std::cout << "eps=" << res.eps_schedule[i] << " ratio=" << res.ratios[i] << "\n";
  return 0;
}

int cmd_mie(const Options& o) {
  validate_common(o);
  const ms::Scene scene = load_scene_with_overrides(o);
  if (scene.shapes.size() != 1 || scene.shapes[0].kind != ms::ShapeKind::Disc ||
      scene.shapes[0].center.norm() != 0.0)
    throw CLI::ValidationError("--scene",
                               "mie requires a single origin-centered disc scene");

  const ms::DirectionGrid dirs(o.n_dirs);
  const ms::Shape& disc = scene.shapes[0];
  ms::FarFieldMatrix f;
  f.k = scene.k;
  f.n_dirs = o.n_dirs;
  f.entries =
      dirs.weight() * ms::mie_far_field(disc.radius, disc.contrast, scene.k, dirs);

  const std::string mfile = out_file(o, "mie_farfield.csv");
  ms::write_matrix(f, mfile);
  ms::RunManifest man;
  man.command = "mie";
  man.config = config_echo(o);
  man.outputs.push_back(mfile);
  ms::write_manifest(man, out_file(o, "manifest.json"));
  std::cout << "wrote " << mfile << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"2D inverse medium scattering: far field simulation and "
               "monotonicity-based support reconstruction"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--scene", o.scene_path, "scene JSON file");
    c->add_option("--matrix", o.matrix_path, "far-field matrix CSV");
    c->add_option("--k", o.k, "wave number override");
    c->add_option("--n-dirs", o.n_dirs, "number of directions N (even)");
    c->add_option("--grid", o.grid, "forward solver cells per axis M");
    c->add_option("--roi", o.roi, "region of interest halfwidth R");
    c->add_option("--pixels", o.pixels, "pixels per axis");
    c->add_option("--alpha", o.alphas, "indicator parameter(s)")->delimiter(',');
    c->add_option("--sign", o.sign, "contrast sign, +1 or -1");
    c->add_option("--delta", o.delta, "eigenvalue discard threshold");
    c->add_option("--noise", o.noise, "relative noise level in [0,1)");
    c->add_option("--seed", o.seed, "noise RNG seed");
    c->add_option("--out", o.out_dir, "output directory");
    c->add_option("--alpha-bound", o.alpha_bound, "two-sided lower factor");
    c->add_option("--beta-bound", o.beta_bound, "two-sided upper factor");
    c->add_option("--budget", o.budget, "allowed eigenvalue-count exceptions");
    c->add_option("--b-disc", o.b_disc, "localize: B disc cx,cy,r")->expected(3);
    c->add_option("--d-disc", o.d_disc, "localize: D disc cx,cy,r (r=0: empty)")
        ->expected(3);
    c->add_option("--eps", o.eps_schedule, "localize: eps schedule")->delimiter(',');
    c->add_flag("--exact-pixels", o.exact_pixels,
                "exact pixel integration for Born matrices");
    c->add_option("--max-iters", o.max_iters, "forward solver iteration cap");
  };

  auto* c_sim = app.add_subcommand("simulate", "solve the forward problem, write F");
  auto* c_rec = app.add_subcommand("reconstruct", "indicator maps from a matrix file");
  auto* c_spec = app.add_subcommand("spectrum", "eigenvalues and circle residuals");
  auto* c_shr = app.add_subcommand("shrink", "greedy two-sided support reconstruction");
  auto* c_loc = app.add_subcommand("localize", "localized wave function demo");
  auto* c_mie = app.add_subcommand("mie", "analytic disc far-field matrix");
  for (auto* c : {c_sim, c_rec, c_spec, c_shr, c_loc, c_mie}) add_common(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::filesystem::create_directories(o.out_dir);
    if (c_sim->parsed()) return cmd_simulate(o);
    if (c_rec->parsed()) return cmd_reconstruct(o);
    if (c_spec->parsed()) return cmd_spectrum(o);
    if (c_shr->parsed()) return cmd_shrink(o);
    if (c_loc->parsed()) return cmd_localize(o);
    if (c_mie->parsed()) return cmd_mie(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
