#pragma once

#include <string>
#include <vector>

#include "monoscat/monotonicity.hpp"
#include "monoscat/operators.hpp"

namespace monoscat {

// All writers emit floats with 17 significant digits (round-trip exact)
// and write atomically (temp file + rename).

// Far-field matrix file: header "N,k", then rows "l,m,re,im" (1-based l,m).
void write_matrix(const FarFieldMatrix& f, const std::string& path);
// Throws std::invalid_argument naming the offending line on parse errors.
FarFieldMatrix read_matrix(const std::string& path);

// Total field export: rows "row,col,re,im".
void write_field(const TotalField& u, const std::string& path);

// Indicator map: rows "j,row,col,z_x,z_y,I_alpha".
void write_indicator_csv(const IndicatorMap& map, const std::string& path);
// ASCII PGM (P2) heatmap, max gray value = max count.
void write_indicator_pgm(const IndicatorMap& map, const std::string& path);

// Eigenvalue spectrum: header, then "index,re,im,circle_residual" where the
// residual is the relative distance of the eigenvalue to the circle of
// radius 4pi centered at 4pi i (blank for the Re F block).
void write_spectrum_csv(const Eigen::VectorXcd& eigs_f,
                        const Eigen::VectorXd& eigs_re_f, double k,
                        const std::string& path);

// Pixel mask (shrink output): rows "j,row,col,z_x,z_y,kept".
void write_mask_csv(const PixelGrid& grid, const std::vector<bool>& mask,
                    const std::string& path);

// Localization ratios: rows "eps,ratio".
void write_ratios_csv(const std::vector<double>& eps,
                      const std::vector<double>& ratios, const std::string& path);

// Multiplicative complex Gaussian noise, entrywise:
//   entry *= 1 + level * (z / sqrt(2)),  z standard complex Gaussian,
// generated by a seeded xorshift-free mt19937_64 with an explicit
// Box-Muller transform so the stream is reproducible across platforms.
void add_noise(FarFieldMatrix& f, double level, unsigned long long seed);

// Run manifest: JSON with config echo, tool version, per-stage timings in
// seconds, and FNV-1a 64-bit checksums of the output files.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, double>> timings;
  std::vector<std::string> outputs;  // file paths, checksummed at write time
};
void write_manifest(const RunManifest& m, const std::string& path);

std::string format_double(double v);  // 17 significant digits
unsigned long long file_checksum(const std::string& path);  // FNV-1a 64

} // namespace monoscat
