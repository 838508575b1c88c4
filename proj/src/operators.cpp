#include "mslab/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mslab {

MatrixPotential build_power_nls_potential(const Grid& g, double sigma) {
  const double margin = 2.0 * sigma - std::sqrt(2.0);
  if (sigma <= 0.0 || margin <= 0.0)
    throw std::invalid_argument(
        "build_power_nls_potential: need 2*sigma > sqrt(2) for the decay assumption");
  MatrixPotential mp;
  mp.mu = 1.0;
  mp.beta = 0.5 * margin;  // sech^2(sigma x) ~ 4 e^{-2 sigma |x|}
  mp.V1.resize(g.n);
  mp.V2.resize(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double s = 1.0 / std::cosh(sigma * g.x[j]);
    const double s2 = s * s;
    mp.V1[j] = (sigma + 1.0) * (sigma + 1.0) * s2;
    mp.V2[j] = sigma * (sigma + 1.0) * s2;
  }
  return mp;
}

void validate_potential(const Grid& g, const MatrixPotential& mp) {
  for (std::size_t j = 0; j < g.n; ++j) {
    if (mp.V1[j] < std::abs(mp.V2[j]) - 1e-12)
      throw std::domain_error("potential: V1 < |V2| at node " + std::to_string(j) +
                              " (x = " + std::to_string(g.x[j]) + ")");
  }
  // Decay bound at the outermost 10% of nodes; C calibrated from the largest
  // interior sample so the check is scale-free.
  double c_cal = 0.0;
  const double rate = std::sqrt(2.0 * mp.mu) + mp.beta;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double bound = std::exp(-rate * std::abs(g.x[j]));
    c_cal = std::max(c_cal, (std::abs(mp.V1[j]) + std::abs(mp.V2[j])) / bound);
  }
  const std::size_t tail = g.n / 10;
  for (std::size_t j = 0; j < g.n; ++j) {
    const bool outer = (j < tail / 2) || (j + tail / 2 >= g.n);
    if (!outer) continue;
    const double lhs = std::abs(mp.V1[j]) + std::abs(mp.V2[j]);
    if (lhs > 10.0 * c_cal * std::exp(-rate * std::abs(g.x[j])))
      throw std::domain_error("potential: decay margin beta violated at node " +
                              std::to_string(j));
  }
}

FactoredPotential factorize(const Grid& g, const MatrixPotential& mp) {
  FactoredPotential fp;
  fp.mu = mp.mu;
  fp.a.resize(g.n);
  fp.b.resize(g.n);
  double l1 = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double sum = mp.V1[j] + mp.V2[j];
    double diff = mp.V1[j] - mp.V2[j];
    if (sum < -1e-12 || diff < -1e-12)
      throw std::domain_error("factorize: V1 < |V2| at node " + std::to_string(j) +
                              " (x = " + std::to_string(g.x[j]) + ")");
    diff = std::max(diff, 0.0);
    const double sp = std::sqrt(std::max(sum, 0.0));
    const double sm = std::sqrt(diff);
    fp.a[j] = 0.5 * (sp + sm);
    fp.b[j] = 0.5 * (sp - sm);
    l1 += std::abs(mp.V1[j]);
  }
  fp.v1_l1 = l1 * g.dx;
  return fp;
}

Field2 apply_H0(const Grid& g, double mu, const Field2& f) {
  // Route through the floor-filtered derivative: a raw xi^2 multiply lifts the
  // FFT noise floor to eps * xi_max^2 relative, which poisons any operator
  // composed downstream (the conjugation stack reaches sixth order).
  Field2 out(g.n);
  cvec c1(f.c1(), f.c1() + g.n);
  cvec c2(f.c2(), f.c2() + g.n);
  cvec d1 = spectral_derivative(g, c1, 2);
  cvec d2 = spectral_derivative(g, c2, 2);
  for (std::size_t j = 0; j < g.n; ++j) {
    out.v[j] = -d1[j] + mu * c1[j];
    out.v[j + g.n] = d2[j] - mu * c2[j];
  }
  return out;
}

Field2 apply_V(const Grid& g, const MatrixPotential& mp, const Field2& f) {
  Field2 out(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    out.v[j] = -mp.V1[j] * f.v[j] - mp.V2[j] * f.v[j + g.n];
    out.v[j + g.n] = mp.V2[j] * f.v[j] + mp.V1[j] * f.v[j + g.n];
  }
  return out;
}

Field2 apply_H(const Grid& g, const MatrixPotential& mp, const Field2& f) {
  Field2 out = apply_H0(g, mp.mu, f);
  for (std::size_t j = 0; j < g.n; ++j) {
    out.v[j] += -mp.V1[j] * f.v[j] - mp.V2[j] * f.v[j + g.n];
    out.v[j + g.n] += mp.V2[j] * f.v[j] + mp.V1[j] * f.v[j + g.n];
  }
  return out;
}

Field2 apply_sigma1(const Field2& f) {
  Field2 out(f.n);
  for (std::size_t j = 0; j < f.n; ++j) {
    out.v[j] = f.v[j + f.n];
    out.v[j + f.n] = f.v[j];
  }
  return out;
}

Field2 apply_sigma3(const Field2& f) {
  Field2 out = f;
  for (std::size_t j = 0; j < f.n; ++j) out.v[j + f.n] = -out.v[j + f.n];
  return out;
}

Field2 conj_field(const Field2& f) {
  Field2 out = f;
  for (cd& c : out.v) c = std::conj(c);
  return out;
}

Eigen::MatrixXd dense_second_derivative(const Grid& g) {
  // Circulant: first row from the inverse DFT of the -xi^2 symbol, symmetrized
  // so the matrix is exactly symmetric.
  const std::size_t n = g.n;
  cvec sym(n);
  for (std::size_t k = 0; k < n; ++k) sym[k] = cd{-g.xi[k] * g.xi[k], 0.0};
  fft_backward(sym);
  rvec row(n);
  for (std::size_t m = 0; m < n; ++m) row[m] = sym[m].real() / static_cast<double>(n);
  for (std::size_t m = 1; m < n / 2; ++m) {
    const double avg = 0.5 * (row[m] + row[n - m]);
    row[m] = avg;
    row[n - m] = avg;
  }
  Eigen::MatrixXd D2(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) D2(i, j) = row[(i + n - j) % n];
  return D2;
}

Eigen::MatrixXd dense_H(const Grid& g, const MatrixPotential* mp, double mu) {
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::MatrixXd D2 = dense_second_derivative(g);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  H.topLeftCorner(n, n) = -D2;
  H.bottomRightCorner(n, n) = D2;
  for (Eigen::Index j = 0; j < n; ++j) {
    H(j, j) += mu;
    H(n + j, n + j) -= mu;
  }
  if (mp) {
    for (Eigen::Index j = 0; j < n; ++j) {
      H(j, j) -= mp->V1[j];
      H(j, n + j) -= mp->V2[j];
      H(n + j, j) += mp->V2[j];
      H(n + j, n + j) += mp->V1[j];
    }
  }
  return H;
}

std::pair<double, double> symmetry_residuals(const Grid& g, const MatrixPotential& mp) {
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::MatrixXd H = dense_H(g, &mp, mp.mu);
  Eigen::MatrixXd S3H = H, S1H(2 * n, 2 * n);
  // sigma3 H sigma3 flips the sign of the off-diagonal blocks.
  S3H.topRightCorner(n, n) *= -1.0;
  S3H.bottomLeftCorner(n, n) *= -1.0;
  const double r1 = (S3H - H.transpose()).cwiseAbs().maxCoeff();
  // sigma1 H sigma1 swaps components on both sides.
  S1H.topLeftCorner(n, n) = H.bottomRightCorner(n, n);
  S1H.bottomRightCorner(n, n) = H.topLeftCorner(n, n);
  S1H.topRightCorner(n, n) = H.bottomLeftCorner(n, n);
  S1H.bottomLeftCorner(n, n) = H.topRightCorner(n, n);
  const double r2 = (S1H + H).cwiseAbs().maxCoeff();
  return {r1, r2};
}

double rayleigh_margin(const Grid& g, const MatrixPotential& mp) {
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::MatrixXd Lm = -dense_second_derivative(g);
  for (Eigen::Index j = 0; j < n; ++j) Lm(j, j) += mp.mu - mp.V1[j] + mp.V2[j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace mslab
