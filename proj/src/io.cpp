#include "monoscat/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace monoscat {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string temp_path_for(const std::string& path) { return path + ".tmp"; }

void commit(const std::string& path) {
  std::filesystem::rename(temp_path_for(path), path);
}

std::ofstream open_temp(const std::string& path) {
  std::ofstream out(temp_path_for(path));
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(const FarFieldMatrix& f, const std::string& path) {
  auto out = open_temp(path);
  const int n = static_cast<int>(f.entries.rows());
  out << n << "," << format_double(f.k) << "\n";
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      out << (l + 1) << "," << (m + 1) << ","
          << format_double(f.entries(l, m).real()) << ","
          << format_double(f.entries(l, m).imag()) << "\n";
  out.close();
  commit(path);
}

FarFieldMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read matrix file: " + path);
  auto fail = [&](int line, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line << ": " << what;
    throw std::invalid_argument(os.str());
  };

  std::string line;
  int lineno = 1;
  if (!std::getline(in, line)) fail(1, "missing header");
  FarFieldMatrix f;
  int n = 0;
  {
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      fail(1, "header must be 'N,k'");
    try {
      n = std::stoi(a);
      f.k = std::stod(b);
    } catch (...) { fail(1, "header must be 'N,k'"); }
    if (n < 2 || !(f.k > 0)) fail(1, "header requires N >= 2 and k > 0");
  }
  f.n_dirs = n;
  f.entries = MatrixXcd::Zero(n, n);
  std::vector<bool> seen(static_cast<size_t>(n) * n, false);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok[4];
    for (int i = 0; i < 4; ++i)
      if (!std::getline(ss, tok[i], ',')) fail(lineno, "expected 'l,m,re,im'");
    int l, m;
    double re, im;
    try {
      l = std::stoi(tok[0]);
      m = std::stoi(tok[1]);
      re = std::stod(tok[2]);
      im = std::stod(tok[3]);
    } catch (...) { fail(lineno, "expected 'l,m,re,im'"); return {}; }
    if (l < 1 || l > n || m < 1 || m > n) fail(lineno, "index out of range");
    f.entries(l - 1, m - 1) = {re, im};
    seen[static_cast<size_t>(l - 1) * n + (m - 1)] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) fail(lineno, "matrix entries missing (file truncated?)");
  return f;
}

void write_field(const TotalField& u, const std::string& path) {
  auto out = open_temp(path);
  for (int i = 0; i < u.resolution; ++i)
    for (int j = 0; j < u.resolution; ++j)
      out << i << "," << j << "," << format_double(u.values(i, j).real()) << ","
          << format_double(u.values(i, j).imag()) << "\n";
  out.close();
  commit(path);
}

void write_indicator_csv(const IndicatorMap& map, const std::string& path) {
  auto out = open_temp(path);
  const int per_axis = map.grid.pixels_per_axis;
  for (int j = 0; j < map.grid.count(); ++j) {
    const Point z = map.grid.center(j);
    out << j << "," << j / per_axis << "," << j % per_axis << ","
        << format_double(z.x()) << "," << format_double(z.y()) << ","
        << map.values[j] << "\n";
  }
  out.close();
  commit(path);
}

void write_indicator_pgm(const IndicatorMap& map, const std::string& path) {
  auto out = open_temp(path);
  int maxval = 0;
  for (int v : map.values) maxval = std::max(maxval, v);
  const int per_axis = map.grid.pixels_per_axis;
  out << "P2\n" << per_axis << " " << per_axis << "\n" << std::max(maxval, 1) << "\n";
  // PGM rows top-down; pixel row 0 is at y = -R, so flip vertically.
  for (int row = per_axis - 1; row >= 0; --row) {
    for (int col = 0; col < per_axis; ++col) {
      if (col) out << " ";
      out << map.values[row * per_axis + col];
    }
    out << "\n";
  }
  out.close();
  commit(path);
}

void write_spectrum_csv(const Eigen::VectorXcd& eigs_f,
                        const Eigen::VectorXd& eigs_re_f, double k,
                        const std::string& path) {
  auto out = open_temp(path);
  out << "block,index,re,im,circle_residual\n";
  const double r = eigenvalue_circle_radius(k);
  const cdouble center(0.0, r);
  for (int i = 0; i < eigs_f.size(); ++i) {
    const double resid = std::abs(std::abs(eigs_f[i] - center) - r) / r;
    out << "F," << i << "," << format_double(eigs_f[i].real()) << ","
        << format_double(eigs_f[i].imag()) << "," << format_double(resid) << "\n";
  }
  for (int i = 0; i < eigs_re_f.size(); ++i)
    out << "ReF," << i << "," << format_double(eigs_re_f[i]) << ",0,\n";
  out.close();
  commit(path);
}

void write_mask_csv(const PixelGrid& grid, const std::vector<bool>& mask,
                    const std::string& path) {
  auto out = open_temp(path);
  const int per_axis = grid.pixels_per_axis;
  for (int j = 0; j < grid.count(); ++j) {
    const Point z = grid.center(j);
    out << j << "," << j / per_axis << "," << j % per_axis << ","
        << format_double(z.x()) << "," << format_double(z.y()) << ","
        << (mask[j] ? 1 : 0) << "\n";
  }
  out.close();
  commit(path);
}

void write_ratios_csv(const std::vector<double>& eps,
                      const std::vector<double>& ratios, const std::string& path) {
  auto out = open_temp(path);
  out << "eps,ratio\n";
  for (size_t i = 0; i < eps.size(); ++i)
    out << format_double(eps[i]) << "," << format_double(ratios[i]) << "\n";
  out.close();
  commit(path);
}

void add_noise(FarFieldMatrix& f, double level, unsigned long long seed) {
  if (level == 0.0) return;
  if (!(level >= 0.0 && level < 1.0))
    throw std::invalid_argument("noise level must be in [0,1)");
  std::mt19937_64 rng(seed);
  auto uniform = [&] {
    return (rng() >> 11) * 0x1.0p-53;  // [0,1) with 53 bits
  };
  const int n = static_cast<int>(f.entries.rows());
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      // Box-Muller; explicit so the stream is platform-independent.
      double u1 = uniform();
      while (u1 == 0.0) u1 = uniform();
      const double u2 = uniform();
      const double mag = std::sqrt(-2.0 * std::log(u1));
      const cdouble z(mag * std::cos(2.0 * kPi * u2), mag * std::sin(2.0 * kPi * u2));
      f.entries(l, m) *= 1.0 + level * z / std::sqrt(2.0);
    }
}

unsigned long long file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot checksum file: " + path);
  unsigned long long h = 1469598103934665603ull;  // FNV-1a 64
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::json j;
  j["tool"] = "monoscat";
  j["version"] = "1.0.0";
  j["command"] = m.command;
  for (const auto& [key, value] : m.config) j["config"][key] = value;
  for (const auto& [stage, secs] : m.timings) j["timings"][stage] = secs;
  j["outputs"] = nlohmann::json::array();
  for (const auto& file : m.outputs) {
    nlohmann::json jo;
    jo["path"] = file;
    std::ostringstream os;
    os << std::hex << file_checksum(file);
    jo["fnv1a64"] = os.str();
    j["outputs"].push_back(std::move(jo));
  }
  auto out = open_temp(path);
  out << j.dump(2) << "\n";
  out.close();
  commit(path);
}

} // namespace monoscat
