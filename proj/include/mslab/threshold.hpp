// Threshold machinery: the transfer operator T = I + v2 G0 v1, the rank-one
// projection P onto span{(a,b)} with Q = I - P, kernel detection for QTQ
// (threshold classification), construction of the resonance pair (Phi, Psi)
// with the constants c0, c1, c2+-, eta = ||Phi||^{-2}, d = -2i(|c0|^2+|c1|^2) eta,
// and the small-z expansion checks for M(z)^{-1}.
//
// Everything here is real-symmetric linear algebra at heart: T is real and
// symmetric, QTQ inherits that, and the kernel search runs a dense symmetric
// eigendecomposition with the structural P-direction null vector excluded.
#pragma once
#include <functional>
#include <optional>

#include "mslab/resolvent.hpp"

namespace mslab {

// Throws std::domain_error for a vanishing potential (degenerate projection).
KernelOp build_P(const Grid& g, const FactoredPotential& fp);
KernelOp build_Q(const Grid& g, const FactoredPotential& fp);

// T = I + v2 G0 v1 (real symmetric up to quadrature rounding).
KernelOp build_T(const FactoredPotential& fp, const Grid& g, double mu);

enum class ThresholdKind { Regular, Irregular };

struct ThresholdClass {
  ThresholdKind kind = ThresholdKind::Regular;
  int rank = 0;          // dim of the detected QTQ kernel (P-direction excluded)
  double singular_gap = 0.0;  // smallest retained / largest discarded |eigenvalue|;
                              // for rank 0: smallest retained / (tol * largest)
};

struct S1Result {
  ThresholdClass cls;
  std::optional<Eigen::VectorXd> phi;  // L2-normalized kernel vector, stacked 2n
  double kernel_eigenvalue = 0.0;      // |lambda| of the detected kernel direction
};

// Kernel detection on |eigenvalue| < tol * max|eigenvalue| restricted to the
// Q range (the structural QTQ null vector along (a,b) is excluded by its
// overlap with the P direction). rank >= 2 throws std::runtime_error: the
// admissible potential class forbids it.
S1Result find_S1(const KernelOp& T, const KernelOp& Q, double tol = 1e-5);

struct ResonanceData {
  Field2 phi;  // in S1, L2-normalized then rescaled by the c-normalization
  Field2 psi;  // bounded solution -G0[v1 Phi] + c0 e1
  cd c0{0.0, 0.0}, c1{0.0, 0.0};
  cd c2_plus{0.0, 0.0}, c2_minus{0.0, 0.0};
  double eta = 0.0;  // ||Phi||^{-2}
  cd d{0.0, 0.0};    // -2i(|c0|^2+|c1|^2) eta
  bool normalized = false;  // |c0|^2 + |c1|^2 == 1 applied
};

// Optional evaluator for potential values beyond the grid: V1, V2 at x. The
// c2 integrals weight the integrand by e^{+-sqrt(2mu) y} and need the tail
// 20 < |y| <= 60; without the evaluator the tail is dropped (documented
// accuracy loss ~1e-4 for sech^2-class potentials).
using PotentialEval = std::function<void(double x, double& V1, double& V2)>;

// Throws std::runtime_error when |c0| and |c1| both vanish (the bounded
// solution cannot be trivial).
ResonanceData resonance_from_phi(Eigen::VectorXd phi, const FactoredPotential& fp, const Grid& g,
                                 double mu, const PotentialEval& vtail = nullptr);

// ||<x>^{-1} (H - lambda) psi||_sup; adjoint=true checks H^adj psi = lambda psi
// via the sigma3 conjugation.
double verify_resonance(const Grid& g, const MatrixPotential& mp, const Field2& psi,
                        double lambda, bool adjoint = false);

// Psi evaluated on another (typically much wider) grid through its kernel
// representation Psi = -G0[v1 Phi] + c0 e1 against the source-grid Phi. The
// evolution experiments need Psi on the propagation grid while the threshold
// pipeline runs on a narrow one.
Field2 resonance_on_grid(const Grid& target, const Grid& source,
                         const FactoredPotential& fp, const ResonanceData& rd,
                         double mu);

// S1 = eta * dx * phi phi^T (projection onto Phi as an absorbed kernel matrix).
Eigen::MatrixXcd s1_matrix(const Grid& g, const ResonanceData& rd);

// Spectral norm of M(z)^{-1} minus the explicit singular part
//   (1/d)((1/z) S1 - PTS1/kappa - S1TP/kappa) + (1/kappa + |c0|^2 eta ||V1||_1/(d kappa^2)) z P
// with kappa = ||V1||_1/(2i). Stays O(1) as z -> 0 at an irregular threshold.
double m_inverse_expansion_check(const FactoredPotential& fp, const Grid& g, double mu,
                                 const ResonanceData& rd, double z);

struct RankOneResiduals {
  double stpts = 0.0;   // ||S1 T P T S1 - |c0|^2 eta ||V1||_1 S1||_maxabs
  double ptstp = 0.0;   // ||P T S1 T P  - |c0|^2 eta ||V1||_1 P ||_maxabs
  double s1m1s1 = 0.0;  // ||S1 M1 S1 + 2i |c1|^2 eta S1||_maxabs, M1 = v2 G1 v1
};
RankOneResiduals rank_one_identity_residuals(const FactoredPotential& fp, const Grid& g,
                                             double mu, const ResonanceData& rd);

// Richardson extraction of the 1/z coefficient of M(z)^{-1} from two samples:
// (Minv(z1) - Minv(z2)) * z1 z2 / (z2 - z1); relative spectral-norm distance
// to S1/d.
double minv_leading_coefficient_error(const FactoredPotential& fp, const Grid& g, double mu,
                                      const ResonanceData& rd, double z1, double z2);

}  // namespace mslab
