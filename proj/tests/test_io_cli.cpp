#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "monoscat/io.hpp"

using namespace monoscat;
namespace fs = std::filesystem;

namespace {

FarFieldMatrix random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  FarFieldMatrix f;
  f.k = 2.0;
  f.n_dirs = n;
  f.entries.resize(n, n);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      f.entries(l, m) = cdouble(gauss(rng), gauss(rng)) * std::pow(10.0, l - n / 2);
  return f;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MONOSCAT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("matrix files round-trip bit-exactly") {
  TempDir dir("monoscat_io_test");
  const FarFieldMatrix f = random_matrix(12, 3);
  const std::string path = dir.file("m.csv");
  write_matrix(f, path);
  const FarFieldMatrix g = read_matrix(path);
  CHECK(g.k == f.k);
  REQUIRE(g.n_dirs == 12);
  for (int l = 0; l < 12; ++l)
    for (int m = 0; m < 12; ++m) CHECK(g.entries(l, m) == f.entries(l, m));
}

TEST_CASE("matrix parse errors name the line") {
  TempDir dir("monoscat_io_parse");
  const std::string path = dir.file("bad.csv");
  {
    std::ofstream out(path);
    out << "4,2.0\n1,1,0.5,0.5\n1,2,not_a_number,0\n";
  }
  CHECK_THROWS_WITH_AS(read_matrix(path), doctest::Contains(":3:"),
                       std::invalid_argument);
  {
    std::ofstream out(path);
    out << "garbage\n";
  }
  CHECK_THROWS_WITH_AS(read_matrix(path), doctest::Contains(":1:"),
                       std::invalid_argument);
}

TEST_CASE("truncated matrix file is rejected") {
  TempDir dir("monoscat_io_trunc");
  const std::string path = dir.file("trunc.csv");
  {
    std::ofstream out(path);
    out << "2,1.0\n1,1,1,0\n";
  }
  CHECK_THROWS_AS(read_matrix(path), std::invalid_argument);
}

TEST_CASE("indicator PGM is valid P2 with max gray = max count") {
  IndicatorMap map;
  map.grid = make_pixel_grid(1.0, 3);
  map.values = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  TempDir dir("monoscat_io_pgm");
  const std::string path = dir.file("map.pgm");
  write_indicator_pgm(map, path);
  std::ifstream in(path);
  std::string magic;
  int w, h, maxval;
  in >> magic >> w >> h >> maxval;
  CHECK(magic == "P2");
  CHECK(w == 3);
  CHECK(h == 3);
  CHECK(maxval == 8);
  int count = 0, v, sum = 0;
  while (in >> v) { ++count; sum += v; }
  CHECK(count == 9);
  CHECK(sum == 36);
}

TEST_CASE("noise is deterministic per seed and multiplicative") {
  FarFieldMatrix a = random_matrix(8, 1);
  FarFieldMatrix b = a;
  FarFieldMatrix c = a;
  add_noise(a, 0.05, 123);
  add_noise(b, 0.05, 123);
  add_noise(c, 0.05, 124);
  CHECK((a.entries - b.entries).norm() == 0.0);
  CHECK((a.entries - c.entries).norm() > 0.0);
  FarFieldMatrix zero;
  zero.k = 1.0;
  zero.n_dirs = 4;
  zero.entries = MatrixXcd::Zero(4, 4);
  add_noise(zero, 0.5, 9);
  CHECK(zero.entries.norm() == 0.0);  // multiplicative noise keeps zeros
  CHECK_THROWS_AS(add_noise(a, 1.5, 0), std::invalid_argument);
}

TEST_CASE("cli exit codes: 0 success, 2 config error, 3 numerical failure") {
  TempDir dir("monoscat_cli_test");
  const std::string scene = dir.file("scene.json");
  {
    std::ofstream out(scene);
    out << R"({"k": 2.0, "R": 1.5, "shapes": [{"kind":"disc","center":[0,0],"radius":1.0,"q":1.0}]})";
  }

  SUBCASE("success on a small simulate run") {
    CHECK(run_cli("simulate --scene " + scene + " --n-dirs 8 --grid 32 --out " +
                  dir.file("out")) == 0);
    CHECK(fs::exists(dir.file("out") + "/farfield.csv"));
    CHECK(fs::exists(dir.file("out") + "/manifest.json"));
  }
  SUBCASE("missing scene file is a config error") {
    CHECK(run_cli("simulate --scene /nonexistent.json --n-dirs 8 --out " +
                  dir.file("out")) == 2);
  }
  SUBCASE("odd N is a config error") {
    CHECK(run_cli("simulate --scene " + scene + " --n-dirs 7 --out " +
                  dir.file("out")) == 2);
  }
  SUBCASE("malformed matrix file is a config error with a line number") {
    const std::string bad = dir.file("bad.csv");
    {
      std::ofstream out(bad);
      out << "oops\n";
    }
    CHECK(run_cli("spectrum --matrix " + bad + " --out " + dir.file("out")) == 2);
  }
  SUBCASE("non-convergence is a numerical failure") {
    CHECK(run_cli("simulate --scene " + scene +
                  " --n-dirs 8 --grid 32 --max-iters 1 --out " +
                  dir.file("out")) == 3);
  }
}

TEST_CASE("cli determinism: identical runs produce identical checksums") {
  TempDir dir("monoscat_cli_det");
  const std::string scene = dir.file("scene.json");
  {
    std::ofstream out(scene);
    out << R"({"k": 2.0, "R": 1.5, "shapes": [{"kind":"disc","center":[0,0],"radius":1.0,"q":1.0}]})";
  }
  REQUIRE(run_cli("simulate --scene " + scene + " --n-dirs 8 --grid 32 --out " +
                  dir.file("a")) == 0);
  REQUIRE(run_cli("simulate --scene " + scene + " --n-dirs 8 --grid 32 --out " +
                  dir.file("b")) == 0);
  CHECK(file_checksum(dir.file("a") + "/farfield.csv") ==
        file_checksum(dir.file("b") + "/farfield.csv"));
}

TEST_CASE("cli mie and simulate agree for the disc scene") {
  TempDir dir("monoscat_cli_mie");
  const std::string scene = dir.file("scene.json");
  {
    std::ofstream out(scene);
    out << R"({"k": 2.0, "R": 1.5, "shapes": [{"kind":"disc","center":[0,0],"radius":1.0,"q":1.0}]})";
  }
  REQUIRE(run_cli("mie --scene " + scene + " --n-dirs 16 --out " + dir.file("m")) == 0);
  REQUIRE(run_cli("simulate --scene " + scene + " --n-dirs 16 --grid 128 --out " +
                  dir.file("s")) == 0);
  const FarFieldMatrix mie = read_matrix(dir.file("m") + "/mie_farfield.csv");
  const FarFieldMatrix sim = read_matrix(dir.file("s") + "/farfield.csv");
  CHECK((mie.entries - sim.entries).norm() / mie.entries.norm() < 2e-2);
}
