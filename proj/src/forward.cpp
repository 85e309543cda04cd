#include "monoscat/forward.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fftw3.h>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace monoscat {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW's planner is not thread-safe; plan creation/destruction is serialized.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Measured plans are much faster than estimated ones, but the measurement
// outcome can differ between processes, which would break bit-for-bit
// reproducibility of output files. A wisdom cache file pins the plan
// choice: the first process measures and records it, later processes
// replay it. Override the location with MONOSCAT_WISDOM; with no writable
// location the cache is skipped (plans then stay stable only within one
// process).
const std::string& wisdom_path() {
  static const std::string path = [] {
    if (const char* env = std::getenv("MONOSCAT_WISDOM")) return std::string(env);
    if (const char* home = std::getenv("HOME"))
      return std::string(home) + "/.cache/monoscat/fftw_wisdom";
    return std::string();
  }();
  return path;
}

// Caller must hold fftw_mutex().
void plan_with_wisdom(int p, fftw_complex* buf, fftw_plan* fwd, fftw_plan* bwd) {
  static bool imported = false;
  static std::set<int> exported_sizes;
  if (!imported) {
    imported = true;
    if (!wisdom_path().empty())
      fftw_import_wisdom_from_filename(wisdom_path().c_str());
  }
  *fwd = fftw_plan_dft_2d(p, p, buf, buf, FFTW_FORWARD, FFTW_MEASURE);
  *bwd = fftw_plan_dft_2d(p, p, buf, buf, FFTW_BACKWARD, FFTW_MEASURE);
  if (!wisdom_path().empty() && exported_sizes.insert(p).second) {
    std::error_code ec;
    const std::filesystem::path file(wisdom_path());
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
    const std::string tmp = wisdom_path() + ".tmp";
    if (fftw_export_wisdom_to_filename(tmp.c_str()))
      std::filesystem::rename(tmp, file, ec);
  }
}

// Discrete volume potential u -> conv(G, q .* u) on the M x M grid,
// applied via a zero-padded FFT on the 2M x 2M circulant embedding of the
// kernel table G. The self-cell weight is the exact integral of the
// kernel over a disc of the same area as one cell.
class VolumePotential {
 public:
  VolumePotential(const ContrastField& q, double k)
      : m_(q.resolution), p_(2 * q.resolution), q_(q.values), k_(k) {
    const double h = q.cell_size();
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * p_ * p_));
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      plan_with_wisdom(p_, buf_, &fwd_, &bwd_);
    }

    // Kernel table on the difference grid, circulantly embedded. The table
    // only depends on (M, h, k), so its transform is cached and shared by
    // all solves on the same grid (one per incident direction otherwise).
    static std::mutex cache_mutex;
    static std::map<std::array<std::uint64_t, 3>,
                    std::shared_ptr<const std::vector<cdouble>>> cache;
    const std::array<std::uint64_t, 3> key{static_cast<std::uint64_t>(m_),
                                           std::bit_cast<std::uint64_t>(h),
                                           std::bit_cast<std::uint64_t>(k)};
    std::lock_guard<std::mutex> cache_lock(cache_mutex);
    if (auto it = cache.find(key); it != cache.end()) {
      khat_ = it->second;
      return;
    }
    const double rho = h / std::sqrt(kPi);
    const cdouble self = kernel_disc_integral(k, rho);
    for (int a = 0; a < p_; ++a) {
      const int di = a < m_ ? a : a - p_;
      for (int b = 0; b < p_; ++b) {
        const int dj = b < m_ ? b : b - p_;
        cdouble g;
        if (di == 0 && dj == 0) {
          g = self;
        } else {
          const double r = h * std::sqrt(double(di) * di + double(dj) * dj);
          g = h * h * helmholtz_kernel(k, r);
        }
        buf_[a * p_ + b][0] = g.real();
        buf_[a * p_ + b][1] = g.imag();
      }
    }
    fftw_execute(fwd_);
    auto table = std::make_shared<std::vector<cdouble>>(p_ * p_);
    for (int i = 0; i < p_ * p_; ++i) (*table)[i] = {buf_[i][0], buf_[i][1]};
    khat_ = std::move(table);
    cache[key] = khat_;
  }

  ~VolumePotential() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  VolumePotential(const VolumePotential&) = delete;
  VolumePotential& operator=(const VolumePotential&) = delete;

  int size() const { return m_ * m_; }

  // w = conv(G, q .* u), flattened row-major M x M.
  VectorXcd apply(const VectorXcd& u) const {
    for (int i = 0; i < p_ * p_; ++i) buf_[i][0] = buf_[i][1] = 0.0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) {
        const cdouble v = q_(i, j) * u[i * m_ + j];
        buf_[i * p_ + j][0] = v.real();
        buf_[i * p_ + j][1] = v.imag();
      }
    fftw_execute(fwd_);
    const double scale = 1.0 / (double(p_) * p_);
    for (int i = 0; i < p_ * p_; ++i) {
      const cdouble v = cdouble(buf_[i][0], buf_[i][1]) * (*khat_)[i] * scale;
      buf_[i][0] = v.real();
      buf_[i][1] = v.imag();
    }
    fftw_execute(bwd_);
    VectorXcd out(m_ * m_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        out[i * m_ + j] = {buf_[i * p_ + j][0], buf_[i * p_ + j][1]};
    return out;
  }

 private:
  int m_, p_;
  Eigen::MatrixXd q_;
  double k_;
  std::shared_ptr<const std::vector<cdouble>> khat_;
  mutable fftw_complex* buf_ = nullptr;
  fftw_plan fwd_{}, bwd_{};
};

// Restarted GMRES for A x = b with A given as a matvec callable.
// Returns the final relative residual; throws on non-convergence.
template <typename MatVec>
VectorXcd gmres(const MatVec& apply, const VectorXcd& b, const SolverConfig& cfg) {
  const int n = static_cast<int>(b.size());
  const double bnorm = b.norm();
  VectorXcd x = VectorXcd::Zero(n);
  if (bnorm == 0.0) return x;

  const int restart = std::max(1, cfg.restart);
  int total_iters = 0;
  double rel_res = 1.0;

  while (total_iters < cfg.max_iterations) {
    VectorXcd r = b - apply(x);
    double beta = r.norm();
    rel_res = beta / bnorm;
    if (rel_res <= cfg.gmres_tolerance) return x;

    std::vector<VectorXcd> basis;
    basis.reserve(restart + 1);
    basis.push_back(r / beta);
    Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(restart + 1, restart);
    VectorXcd gs = VectorXcd::Zero(restart + 1);
    gs[0] = beta;
    std::vector<cdouble> cs(restart), sn(restart);

    int j = 0;
    for (; j < restart && total_iters < cfg.max_iterations; ++j, ++total_iters) {
      VectorXcd w = apply(basis[j]);
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        hess(i, j) = basis[i].dot(w);
        w -= hess(i, j) * basis[i];
      }
      hess(j + 1, j) = w.norm();
      if (std::abs(hess(j + 1, j)) > 0.0) basis.push_back(w / hess(j + 1, j));

      for (int i = 0; i < j; ++i) {  // apply previous Givens rotations
        const cdouble t = cs[i] * hess(i, j) + std::conj(sn[i]) * hess(i + 1, j);
        hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      // New rotation annihilating hess(j+1, j); c real, s complex.
      {
        const cdouble h0 = hess(j, j), h1 = hess(j + 1, j);
        const double a0 = std::abs(h0), a1 = std::abs(h1);
        double c;
        cdouble s;
        if (a1 == 0.0) { c = 1.0; s = 0.0; }
        else if (a0 == 0.0) { c = 0.0; s = 1.0; }
        else {
          const double denom = std::hypot(a0, a1);
          c = a0 / denom;
          s = h1 * std::conj(h0) / (a0 * denom);
        }
        cs[j] = c;
        sn[j] = s;
        hess(j, j) = c * h0 + std::conj(s) * h1;
        hess(j + 1, j) = 0.0;
        gs[j + 1] = -s * gs[j];
        gs[j] = c * gs[j];
      }

      rel_res = std::abs(gs[j + 1]) / bnorm;
      if (rel_res <= cfg.gmres_tolerance) { ++j; ++total_iters; break; }
      if (static_cast<int>(basis.size()) == j + 1) { ++j; ++total_iters; break; }  // breakdown
    }

    // Solve the triangular system and update x.
    VectorXcd y = VectorXcd::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      cdouble s = gs[i];
      for (int l = i + 1; l < j; ++l) s -= hess(i, l) * y[l];
      y[i] = s / hess(i, i);
    }
    for (int i = 0; i < j; ++i) x += y[i] * basis[i];

    if (rel_res <= cfg.gmres_tolerance) return x;
  }

  std::ostringstream os;
  os << "GMRES did not converge within " << cfg.max_iterations
     << " iterations (relative residual " << rel_res << ")";
  throw std::runtime_error(os.str());
}

} // namespace

DirectionGrid::DirectionGrid(int count) : n(count) {
  if (count < 2) throw std::invalid_argument("direction grid needs N >= 2");
}

MatrixXcd incident_on_grid(const IncidentField& inc, const ContrastField& q, double k) {
  const int m = q.resolution;
  MatrixXcd out(m, m);
  if (const auto* pw = std::get_if<PlaneWave>(&inc)) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Point x = q.cell_center(i, j);
        out(i, j) = std::exp(cdouble(0.0, k * pw->direction.dot(x)));
      }
  } else {
    const auto& hg = std::get<HerglotzWave>(inc);
    std::vector<Point> pts;
    pts.reserve(m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) pts.push_back(q.cell_center(i, j));
    const VectorXcd v = evaluate_herglotz(hg, k, pts);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out(i, j) = v[i * m + j];
  }
  return out;
}

VectorXcd evaluate_herglotz(const HerglotzWave& g, double k,
                            const std::vector<Point>& points) {
  if (g.density.size() != g.grid.n)
    throw std::invalid_argument("herglotz density length does not match its grid");
  VectorXcd out(points.size());
  const double w = g.grid.weight();
  for (size_t p = 0; p < points.size(); ++p) {
    cdouble s = 0.0;
    for (int m = 0; m < g.grid.n; ++m)
      s += std::exp(cdouble(0.0, k * g.grid.direction(m).dot(points[p]))) * g.density[m];
    out[p] = w * s;
  }
  return out;
}

TotalField solve_total_field(const ContrastField& q, const IncidentField& inc,
                             double k, const SolverConfig& cfg) {
  if (!(k > 0.0)) throw std::invalid_argument("solve_total_field: k must be > 0");
  const int m = q.resolution;
  const double wavelength = 2.0 * kPi / k;
  if (wavelength / q.cell_size() < cfg.points_per_wavelength_min) {
    // Warning only; accuracy degrades but the discrete problem is well posed.
  }

  const MatrixXcd ui = incident_on_grid(inc, q, k);
  VectorXcd rhs(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) rhs[i * m + j] = ui(i, j);

  TotalField out;
  out.box_halfwidth = q.box_halfwidth;
  out.resolution = m;
  out.k = k;

  if (q.values.cwiseAbs().maxCoeff() == 0.0) {  // no scatterer
    out.values = ui;
    return out;
  }

  VolumePotential pot(q, k);
  const double k2 = k * k;
  auto apply = [&](const VectorXcd& u) -> VectorXcd { return u - k2 * pot.apply(u); };
  const VectorXcd u = gmres(apply, rhs, cfg);

  out.values.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.values(i, j) = u[i * m + j];
  return out;
}

VectorXcd far_field(const ContrastField& q, const TotalField& u,
                    const DirectionGrid& dirs) {
  if (u.resolution != q.resolution || u.box_halfwidth != q.box_halfwidth)
    throw std::invalid_argument("far_field: total field grid does not match contrast grid");
  const int m = q.resolution;
  const double k = u.k;
  const double da = q.cell_area();
  VectorXcd out(dirs.n);
  for (int l = 0; l < dirs.n; ++l) {
    const Point d = dirs.direction(l);
    cdouble s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (q.values(i, j) == 0.0) continue;
        const Point y = q.cell_center(i, j);
        s += q.values(i, j) * u.values(i, j) * std::exp(cdouble(0.0, -k * d.dot(y)));
      }
    out[l] = k * k * da * s;
  }
  return out;
}

MatrixXcd born_first_order(const ContrastField& q, const IncidentField& inc, double k) {
  const int m = q.resolution;
  const MatrixXcd ui = incident_on_grid(inc, q, k);
  VolumePotential pot(q, k);
  VectorXcd v(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v[i * m + j] = ui(i, j);
  const VectorXcd w = pot.apply(v);
  MatrixXcd out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = ui(i, j) + k * k * w[i * m + j];
  return out;
}

} // namespace monoscat
