#include "mslab/resolvent.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mslab {

KernelOp free_resolvent(const Grid& g, double mu, double z, Side side, double z_floor) {
  if (std::abs(z) < z_floor)
    throw std::domain_error("free_resolvent: |z| below z_floor, use the threshold expansion");
  const double w = std::sqrt(z * z + 2.0 * mu);
  // plus side profiles; kink slopes at r=0+: d/dr [i e^{izr}/(2z)] = -1/2,
  // d/dr [-e^{-wr}/(2w)] = +1/2.
  auto p11 = [z](double r) { return iu * std::exp(iu * z * r) / (2.0 * z); };
  auto p22 = [w](double r) { return cd{-std::exp(-w * r) / (2.0 * w), 0.0}; };
  KernelOp K = diagonal_profile_kernel(g, p11, cd{-0.5, 0.0}, p22, cd{0.5, 0.0});
  if (side == Side::Minus) {
    K.m = K.m.conjugate();
    for (cd& c : K.diag_correction) c = std::conj(c);
  }
  return K;
}

KernelOp g0_kernel(const Grid& g, double mu) {
  const double s0 = std::sqrt(2.0 * mu);
  auto p11 = [](double r) { return cd{-0.5 * r, 0.0}; };
  auto p22 = [s0](double r) { return cd{-std::exp(-s0 * r) / (2.0 * s0), 0.0}; };
  return diagonal_profile_kernel(g, p11, cd{-0.5, 0.0}, p22, cd{0.5, 0.0});
}

KernelOp g1_kernel(const Grid& g) {
  auto p11 = [](double r) { return r * r / (4.0 * iu); };
  auto p22 = [](double) { return cd{0.0, 0.0}; };
  return diagonal_profile_kernel(g, p11, cd{0.0, 0.0}, p22, cd{0.0, 0.0});
}

double expansion_residual(const Grid& g, double mu, double z) {
  if (std::abs(z) <= 0.0 || std::abs(z) >= std::min(1.0, std::sqrt(2.0 * mu)))
    throw std::domain_error("expansion_residual: need 0 < |z| < min(1, sqrt(2 mu))");
  const double w = std::sqrt(z * z + 2.0 * mu);
  const double s0 = std::sqrt(2.0 * mu);
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::size_t i = 0; i < g.n; ++i) {
    if (std::abs(g.x[i]) > 10.0) continue;
    const double wx = std::pow(1.0 + g.x[i] * g.x[i], 1.5);
    for (std::size_t j = 0; j < g.n; ++j) {
      if (std::abs(g.x[j]) > 10.0) continue;
      const double r = std::abs(g.x[i] - g.x[j]);
      const double wy = std::pow(1.0 + g.x[j] * g.x[j], 1.5);
      const cd r11 = iu * std::exp(iu * z * r) / (2.0 * z) - iu / (2.0 * z) - cd{-0.5 * r, 0.0} -
                     z * (r * r / (4.0 * iu));
      const cd r22 = cd{-std::exp(-w * r) / (2.0 * w) + std::exp(-s0 * r) / (2.0 * s0), 0.0};
      const double num = std::max(std::abs(r11), std::abs(r22));
      worst = std::max(worst, num / (z * z * wx * wy));
    }
  }
  return worst;
}

KernelOp build_M(const FactoredPotential& fp, const Grid& g, double mu, double z, Side side) {
  KernelOp R0 = free_resolvent(g, mu, z, side);
  KernelOp S = sandwich(v_matrix(g, fp), R0, v1_matrix(g, fp));
  S.m += Eigen::MatrixXcd::Identity(S.m.rows(), S.m.cols());
  return S;
}

KernelOp perturbed_resolvent(const FactoredPotential& fp, const Grid& g, double mu, double z,
                             Side side, double cond_guard) {
  KernelOp R0 = free_resolvent(g, mu, z, side);
  KernelOp M = build_M(fp, g, mu, z, side);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M.m);
  const double rc = lu.rcond();
  if (rc <= 0.0 || 1.0 / rc > cond_guard)
    throw std::runtime_error("perturbed_resolvent: M(z) near-singular at z = " +
                             std::to_string(z) + " (near-eigenvalue)");
  Eigen::MatrixXcd Minv = lu.solve(Eigen::MatrixXcd::Identity(M.m.rows(), M.m.cols()));
  KernelOp mid;
  mid.grid = g;
  mid.m = std::move(Minv);
  KernelOp v1Mv2 = sandwich(v1_matrix(g, fp), mid, v_matrix(g, fp));
  KernelOp out;
  out.grid = g;
  out.m = R0.m - R0.m * v1Mv2.m * R0.m;
  return out;
}

NeumannResult neumann_inverse(const KernelOp& M, double tail_tol, int max_terms) {
  const Eigen::Index d = M.m.rows();
  Eigen::MatrixXcd B = M.m - Eigen::MatrixXcd::Identity(d, d);
  NeumannResult r;
  r.b_norm = spectral_norm(B);
  if (r.b_norm >= 1.0)
    throw std::domain_error("neumann_inverse: ||M - I|| >= 1, series diverges");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
  for (int k = 1; k <= max_terms; ++k) {
    term = -(term * B).eval();
    acc += term;
    r.terms = k;
    if (term.norm() < tail_tol) break;
  }
  r.inv = std::move(acc);
  return r;
}

void dump_kernel_csv(const KernelOp& K, const std::string& path, const std::string& header_note) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("dump_kernel_csv: cannot open " + path);
  // schema v1
  f << "# kernel dump v1; " << header_note << "\n";
  f << "x_index,y_index,block,re,im\n";
  const Eigen::Index n = K.n();
  const char* names[4] = {"11", "12", "21", "22"};
  for (int b = 0; b < 4; ++b) {
    const int bi = b / 2, bj = b % 2;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const cd e = K.m(bi * n + i, bj * n + j);
        f << i << ',' << j << ',' << names[b] << ',' << e.real() << ',' << e.imag() << '\n';
      }
  }
}

}  // namespace mslab
