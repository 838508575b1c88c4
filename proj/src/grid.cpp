#include "mslab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace mslab {

Grid make_grid(double half_width, std::size_t n) {
  if (half_width <= 0.0) throw std::invalid_argument("make_grid: half_width must be positive");
  if (n < 64 || (n & (n - 1)) != 0)
    throw std::invalid_argument("make_grid: n must be a power of two, n >= 64");
  Grid g;
  g.half_width = half_width;
  g.n = n;
  g.dx = 2.0 * half_width / static_cast<double>(n);
  g.x.resize(n);
  g.xi.resize(n);
  const double L = 2.0 * half_width;
  const double dxi = 2.0 * M_PI / L;
  for (std::size_t j = 0; j < n; ++j) {
    g.x[j] = -half_width + g.dx * static_cast<double>(j);
    const long k = (j < n / 2) ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
    g.xi[j] = dxi * static_cast<double>(k);
  }
  return g;
}

namespace {

// FFTW planner is not thread-safe; plan creation is serialized and cached per
// size. Plans are created FFTW_UNALIGNED so they can execute on any buffer.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair& plans_for(std::size_t n) {
  static std::mutex mtx;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<fftw_complex> buf(n);
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf.data(), buf.data(), FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf.data(), buf.data(), FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, p).first->second;
}

}  // namespace

void fft_forward(cd* data, std::size_t n) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(n).fwd, p, p);
}

void fft_backward(cd* data, std::size_t n) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(n).bwd, p, p);
}

void fft_forward(cvec& a) { fft_forward(a.data(), a.size()); }
void fft_backward(cvec& a) { fft_backward(a.data(), a.size()); }

cvec fourier_coefficients(const Grid& g, const cvec& f) {
  cvec out = f;
  fft_forward(out);
  const double s = g.dx / std::sqrt(2.0 * M_PI);
  for (std::size_t k = 0; k < g.n; ++k) {
    const double sign = (k & 1) ? -s : s;  // e^{-i xi_k x_0} = (-1)^k
    out[k] *= sign;
  }
  return out;
}

cvec inverse_fourier(const Grid& g, const cvec& fhat) {
  cvec out = fhat;
  const double s = std::sqrt(2.0 * M_PI) / (g.dx * static_cast<double>(g.n));
  for (std::size_t k = 0; k < g.n; ++k) {
    const double sign = (k & 1) ? -s : s;
    out[k] *= sign;
  }
  fft_backward(out);
  return out;
}

cvec spectral_derivative(const Grid& g, const cvec& f, int order, bool* boundary_warning,
                         double rel_floor) {
  if (order < 1 || order > 8)
    throw std::invalid_argument("spectral_derivative: order must be in 1..8");
  if (f.size() != g.n) throw std::invalid_argument("spectral_derivative: size mismatch");
  if (boundary_warning)
    *boundary_warning = std::max(std::abs(f.front()), std::abs(f.back())) > 1e-6;

  cvec fh = f;
  fft_forward(fh);
  double peak = 0.0;
  for (const cd& c : fh) peak = std::max(peak, std::abs(c));
  const double floor = rel_floor * peak;
  for (std::size_t k = 0; k < g.n; ++k) {
    if (std::abs(fh[k]) < floor) {
      fh[k] = cd{0.0, 0.0};
      continue;
    }
    fh[k] *= std::pow(iu * g.xi[k], order);
  }
  // Nyquist mode has no conjugate partner; odd derivatives of real data would
  // pick up a spurious imaginary part from it.
  if (order & 1) fh[g.n / 2] = cd{0.0, 0.0};
  fft_backward(fh);
  const double inv_n = 1.0 / static_cast<double>(g.n);
  for (cd& c : fh) c *= inv_n;
  return fh;
}

cd integrate(const Grid& g, const cvec& f) {
  cd s{0.0, 0.0};
  for (const cd& c : f) s += c;
  return s * g.dx;
}

double integrate(const Grid& g, const rvec& f) {
  double s = 0.0;
  for (double c : f) s += c;
  return s * g.dx;
}

double weighted_sup_norm(const Grid& g, const Field2& f, double sigma) {
  double m = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double w = std::pow(1.0 + g.x[j] * g.x[j], -0.5 * sigma);
    m = std::max(m, w * std::max(std::abs(f.v[j]), std::abs(f.v[j + g.n])));
  }
  return m;
}

double sup_norm(const Field2& f) {
  double m = 0.0;
  for (const cd& c : f.v) m = std::max(m, std::abs(c));
  return m;
}

double sup_norm(const cvec& f) {
  double m = 0.0;
  for (const cd& c : f) m = std::max(m, std::abs(c));
  return m;
}

cd inner(const Grid& g, const cvec& a, const cvec& b) {
  cd s{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
  return s * g.dx;
}

cd inner(const Grid& g, const Field2& a, const Field2& b) {
  cd s{0.0, 0.0};
  for (std::size_t j = 0; j < a.v.size(); ++j) s += std::conj(a.v[j]) * b.v[j];
  return s * g.dx;
}

double l2_norm(const Grid& g, const Field2& a) { return std::sqrt(std::abs(inner(g, a, a))); }

}  // namespace mslab
