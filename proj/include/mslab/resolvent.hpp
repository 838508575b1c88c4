// Free resolvent kernels on both limiting sides, the small-z expansion
// kernels G0/G1, M(z) = I + v2 R0(z) v1, and the perturbed resolvent
// R(z) = R0 - R0 v1 M^{-1} v2 R0. Plus-side block kernels (r = |x-y|):
//   R0_11 = i e^{i z r} / (2 z),  R0_22 = -e^{-sqrt(z^2+2mu) r} / (2 sqrt(z^2+2mu))
//   G0_11 = -r/2,                 G0_22 = -e^{-sqrt(2mu) r} / (2 sqrt(2mu))
//   G1_11 = r^2 / (4i),           G1_22 = 0
// The minus side is the entrywise conjugate. z = 0 belongs to the threshold
// module; this one refuses |z| < z_floor.
#pragma once
#include <string>

#include "mslab/kernelop.hpp"

namespace mslab {

enum class Side { Plus, Minus };

inline constexpr double kZFloor = 1e-6;
inline constexpr double kConditionGuard = 1e12;

// Throws std::domain_error when |z| < z_floor (caller must use the expansion).
KernelOp free_resolvent(const Grid& g, double mu, double z, Side side,
                        double z_floor = kZFloor);

KernelOp g0_kernel(const Grid& g, double mu);
KernelOp g1_kernel(const Grid& g);

// max over |x|,|y| <= 10 of |R0(z) - (i/2z) e11 - G0 - z G1| / (z^2 <x>^3 <y>^3),
// evaluated on raw kernel values. Requires 0 < |z| < min(1, sqrt(2 mu)).
double expansion_residual(const Grid& g, double mu, double z);

// M(z) = I + v2 R0(z) v1. For a zero potential this is exactly the identity.
KernelOp build_M(const FactoredPotential& fp, const Grid& g, double mu, double z, Side side);

// R(z) = R0 - R0 v1 M^{-1} v2 R0. Throws std::runtime_error naming z when the
// estimated condition number of M exceeds cond_guard (near-eigenvalue).
KernelOp perturbed_resolvent(const FactoredPotential& fp, const Grid& g, double mu, double z,
                             Side side, double cond_guard = kConditionGuard);

// Truncated Neumann series sum_k (-B)^k, B = M - I, stopping when the term's
// Frobenius norm drops under tail_tol. Throws std::domain_error when the
// spectral-norm estimate of B reaches 1 (series diverges, small z).
struct NeumannResult {
  Eigen::MatrixXcd inv;
  int terms = 0;
  double b_norm = 0.0;  // spectral-norm estimate of B
};
NeumannResult neumann_inverse(const KernelOp& M, double tail_tol = 1e-14, int max_terms = 64);

// CSV dump, columns: x_index,y_index,block,re,im (block in {11,12,21,22}).
void dump_kernel_csv(const KernelOp& K, const std::string& path, const std::string& header_note);

}  // namespace mslab
