// Spectral projections and the conjugation machinery for the cubic case
// (sigma = 1, mu = 1, ground state Q = sqrt(2) sech). Scalar building blocks:
//   S  = d/dx + tanh(x)          (annihilates Q)
//   L+ = -d^2 + 1 - 6 sech^2     (annihilates Q')
//   L- = -d^2 + 1 - 2 sech^2     (annihilates Q)
//   D1 = (-d^2 + 1) S^2,  D2 = S^2 L+
// The conjugation operator acting on two-component fields is
//   Dt = (i/2) [[-D1-D2, D1-D2], [-D1+D2, D1+D2]]
// and satisfies Dt H1 = H0 Dt, annihilates the generalized kernel of H1, and
// anticommutes with sigma1. The generalized kernel basis used throughout:
//   eta1 = (Q, -Q), eta2 = ((1+x d/dx)Q, (1+x d/dx)Q),
//   eta3 = (Q', Q'), eta4 = (xQ, -xQ)
// with the sigma3-pairing Gram matrix exactly [[0,4],[4,0]] (+) [[0,-4],[-4,0]].
// P_d f = sum_jk eta_j (G^{-1})_jk <sigma3 eta_k, f>, P_s = I - P_d.
#pragma once
#include <Eigen/Dense>
#include <array>

#include "mslab/grid.hpp"

namespace mslab {

cvec apply_S(const Grid& g, const cvec& f);
cvec apply_Lplus(const Grid& g, const cvec& f);
cvec apply_Lminus(const Grid& g, const cvec& f);
cvec apply_D1(const Grid& g, const cvec& f);
cvec apply_D2(const Grid& g, const cvec& f);

Field2 apply_Dtilde(const Grid& g, const Field2& f);

// [[0, L-], [-L+, 0]] and the same operator reached through -i J^{-1} H1 J
// with J = (1/sqrt2) [[1, i], [1, -i]] and H1 the cubic matrix operator.
Field2 apply_L1(const Grid& g, const Field2& f);
Field2 apply_L1_via_conjugation(const Grid& g, const Field2& f);

struct GeneralizedKernel {
  std::array<Field2, 4> eta;
  Eigen::Matrix4d gram_numeric;     // <sigma3 eta_j, eta_k> by quadrature
  Eigen::Matrix4d gram_exact;       // the closed-form antidiagonal blocks
  Eigen::Matrix4d gram_inv;         // inverse of gram_numeric (used by apply_Pd)
};

GeneralizedKernel cubic_generalized_kernel(const Grid& g);

Field2 apply_Pd(const Grid& g, const GeneralizedKernel& gk, const Field2& f);
Field2 apply_Ps(const Grid& g, const GeneralizedKernel& gk, const Field2& f);

// Trace of the discretized P_d computed with the EXACT Gram inverse against
// the numeric pairings (tr(G_exact^{-1} G_numeric^T)); equals the dimension 4
// up to quadrature error. Using the numeric inverse here would be an
// identity by construction.
double pd_trace(const GeneralizedKernel& gk);

}  // namespace mslab
