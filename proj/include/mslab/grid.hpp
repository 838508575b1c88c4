// Uniform periodic grid on [-half_width, half_width), FFT plumbing, spectral
// derivatives and quadrature. Conventions used across the project:
//   nodes        x_j = -half_width + j*dx, j = 0..n-1, dx = 2*half_width/n
//   frequencies  xi_k = 2*pi*k/L in FFTW order (0..n/2-1, -n/2..-1), L = 2*half_width
//   transform    fhat(xi) = (2*pi)^{-1/2} * integral e^{-i x xi} f(x) dx
// Discretely fhat_k = dx/sqrt(2*pi) * DFT_k[f] * (-1)^k (the (-1)^k is the
// e^{-i xi_k x_0} phase with x_0 = -half_width). Parseval then reads
// dx*sum|f|^2 = (2*pi/L)*sum|fhat|^2.
#pragma once
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mslab {

using cd = std::complex<double>;
using cvec = std::vector<cd>;
using rvec = std::vector<double>;

inline constexpr cd iu{0.0, 1.0};

struct Grid {
  double half_width = 0.0;
  std::size_t n = 0;
  double dx = 0.0;
  rvec x;   // node coordinates
  rvec xi;  // FFT-ordered angular frequencies
  double length() const { return 2.0 * half_width; }
};

// n must be a power of two, n >= 64; half_width > 0. Throws std::invalid_argument.
Grid make_grid(double half_width, std::size_t n);

// In-place c2c FFT, FFTW sign convention (forward kernel e^{-i 2 pi j k / n}).
// Backward is unnormalized: backward(forward(f)) = n*f.
void fft_forward(cd* data, std::size_t n);
void fft_backward(cd* data, std::size_t n);
void fft_forward(cvec& a);
void fft_backward(cvec& a);

// Continuous-convention transform samples at grid.xi (FFT order).
cvec fourier_coefficients(const Grid& g, const cvec& f);
cvec inverse_fourier(const Grid& g, const cvec& fhat);

// d^order/dx^order via (i xi)^order multiplier, order in 1..8.
// Coefficients with |fhat| < rel_floor * max|fhat| are zeroed first: the raw
// float64 coefficient floor is otherwise amplified by xi^order (fatal at
// order 8). Fields must decay below ~1e-12 at the ends for the result to be
// trustworthy; *boundary_warning (if given) is set when max(|f_0|,|f_{n-1}|)
// exceeds 1e-6.
cvec spectral_derivative(const Grid& g, const cvec& f, int order,
                         bool* boundary_warning = nullptr,
                         double rel_floor = 1e-15);

// Periodic trapezoid = dx * sum. Exact for smooth periodic data; for decaying
// data the boundary terms are below the decay floor.
cd integrate(const Grid& g, const cvec& f);
double integrate(const Grid& g, const rvec& f);

// Two-component field stored stacked: v[0..n) first component, v[n..2n) second.
struct Field2 {
  std::size_t n = 0;
  cvec v;
  Field2() = default;
  explicit Field2(std::size_t n_) : n(n_), v(2 * n_, cd{0.0, 0.0}) {}
  cd* c1() { return v.data(); }
  cd* c2() { return v.data() + n; }
  const cd* c1() const { return v.data(); }
  const cd* c2() const { return v.data() + n; }
};

// max over nodes of <x>^{-sigma} * max(|f1(x)|, |f2(x)|), <x> = sqrt(1+x^2).
double weighted_sup_norm(const Grid& g, const Field2& f, double sigma);
double sup_norm(const Field2& f);
double sup_norm(const cvec& f);

// L2 inner products with the quadrature weight, first argument conjugated.
cd inner(const Grid& g, const cvec& a, const cvec& b);
cd inner(const Grid& g, const Field2& a, const Field2& b);
double l2_norm(const Grid& g, const Field2& a);

}  // namespace mslab
