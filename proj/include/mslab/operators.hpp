// The 2x2 matrix Schrodinger operator on the grid:
//   H0 = [[-d^2+mu, 0], [0, d^2-mu]],  V = [[-V1, -V2], [V2, V1]],  H = H0 + V
// with real V1 >= |V2|. The factorization V = v1*v2 with v = [[a,b],[b,a]],
// v1 = -sigma3*v, v2 = v underlies the resolvent and threshold modules.
// Matrix-free applications go through the FFT; dense materializations (for
// symmetry checks, eigenvalue guards and small-grid oracles) assemble the
// spectral differentiation matrix.
#pragma once
#include <Eigen/Dense>
#include <utility>

#include "mslab/grid.hpp"

namespace mslab {

struct MatrixPotential {
  rvec V1, V2;   // node samples, real
  double mu = 1.0;
  double beta = 0.5;  // decay margin in |V1|+|V2| <= C e^{-(sqrt(2 mu)+beta)|x|}
};

// V1 = (sigma+1)^2 sech^2(sigma x), V2 = sigma(sigma+1) sech^2(sigma x), mu = 1.
// The decay margin requires 2*sigma > sqrt(2); smaller sigma violates the
// exponential-decay assumption relative to mu = 1 and throws.
MatrixPotential build_power_nls_potential(const Grid& g, double sigma);

// Checks V1 >= |V2| everywhere and the beta-decay bound at the outermost 10%
// of nodes. Throws std::domain_error naming the first offending node.
void validate_potential(const Grid& g, const MatrixPotential& mp);

struct FactoredPotential {
  rvec a, b;  // v = [[a,b],[b,a]], a,b >= 0, a^2+b^2 = V1, 2ab = V2
  double mu = 1.0;
  double v1_l1 = 0.0;  // ||V1||_{L^1}, reused by the threshold projections
};

// a = (sqrt(V1+V2)+sqrt(V1-V2))/2, b = (sqrt(V1+V2)-sqrt(V1-V2))/2.
// Throws std::domain_error naming the node where V1 - |V2| < 0.
FactoredPotential factorize(const Grid& g, const MatrixPotential& mp);

// Matrix-free applications (FFT for the second derivative).
Field2 apply_H0(const Grid& g, double mu, const Field2& f);
Field2 apply_H(const Grid& g, const MatrixPotential& mp, const Field2& f);
Field2 apply_V(const Grid& g, const MatrixPotential& mp, const Field2& f);

// Pauli conjugations on fields: sigma1 swaps components, sigma3 flips the sign
// of the second.
Field2 apply_sigma1(const Field2& f);
Field2 apply_sigma3(const Field2& f);
Field2 conj_field(const Field2& f);

// Dense n x n spectral second-derivative matrix (circulant, real symmetric).
Eigen::MatrixXd dense_second_derivative(const Grid& g);
// Dense 2n x 2n H = H0 + V (real entries; mp may be null for the free case).
Eigen::MatrixXd dense_H(const Grid& g, const MatrixPotential* mp, double mu);

// (max-abs entry of sigma3*H*sigma3 - H^adj, max-abs entry of sigma1*H*sigma1 + H)
// on the dense materialization.
std::pair<double, double> symmetry_residuals(const Grid& g, const MatrixPotential& mp);

// Smallest eigenvalue of -d^2 + mu - V1 + V2 (assumed non-negative for
// admissible potentials; ~0 for the power-NLS family).
double rayleigh_margin(const Grid& g, const MatrixPotential& mp);

}  // namespace mslab
