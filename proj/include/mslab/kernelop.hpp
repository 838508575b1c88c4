// Dense discretization of 2x2-block integral operators. A KernelOp holds the
// full 2n x 2n matrix of the discretized operator acting on stacked fields
// (first component rows 0..n-1, second rows n..2n-1). Kernel entries carry
// the dx quadrature weight ("quadrature absorbed"), so composition is plain
// matrix multiplication and identity parts enter as the unweighted unit
// matrix. Kernel profiles with an |x-y| kink get the Euler-Maclaurin
// correction dx^2 * kappa'(0+)/6 added to their diagonal entries; plain
// trapezoid would cap every composition at O(dx^2).
//
// Assembly and sandwich loops are OpenMP-parallel; mslab::serialref keeps
// plain-loop versions used by the consistency tests and the benchmark.
#pragma once
#include <Eigen/Dense>
#include <array>
#include <functional>

#include "mslab/grid.hpp"
#include "mslab/operators.hpp"

namespace mslab {

struct KernelOp {
  Grid grid;
  bool quadrature_absorbed = true;
  Eigen::MatrixXcd m;  // 2n x 2n
  // Amount added to each diagonal entry of the four blocks (11,12,21,22) by
  // the kink correction; kernel_value removes it again.
  std::array<cd, 4> diag_correction{};

  Eigen::Index n() const { return static_cast<Eigen::Index>(grid.n); }
  auto block(int bi, int bj) { return m.block(bi * n(), bj * n(), n(), n()); }
  auto block(int bi, int bj) const { return m.block(bi * n(), bj * n(), n(), n()); }

  Field2 apply(const Field2& f) const;
  // Raw kernel value K_bibj(x_i, y_j): entry with dx and any diagonal
  // correction removed.
  cd kernel_value(int bi, int bj, Eigen::Index i, Eigen::Index j) const;
};

KernelOp kernel_identity(const Grid& g);

// C = A o B as operators (plain matrix product of the absorbed matrices).
KernelOp compose(const KernelOp& A, const KernelOp& B);

// Kernel depending on r = |x-y| separately per diagonal block; slope11/22 are
// d(profile)/dr at r = 0+ (the kink corrections). Off-diagonal blocks zero.
using KernelProfile = std::function<cd(double)>;
KernelOp diagonal_profile_kernel(const Grid& g, const KernelProfile& p11, cd slope11,
                                 const KernelProfile& p22, cd slope22);

// Node-diagonal 2x2 matrix multiplier (potential factors and Pauli matrices).
struct NodeMat2 {
  rvec m11, m12, m21, m22;
};
NodeMat2 v_matrix(const Grid& g, const FactoredPotential& fp);   // v2 = v = [[a,b],[b,a]]
NodeMat2 v1_matrix(const Grid& g, const FactoredPotential& fp);  // v1 = -sigma3 v

// left(x) * K(x,y) * right(y), entrywise in the nodes.
KernelOp sandwich(const NodeMat2& left, const KernelOp& K, const NodeMat2& right);

// Largest singular value by power iteration on A^H A (deterministic start).
double spectral_norm(const Eigen::MatrixXcd& A, int iters = 60);

namespace serialref {
KernelOp diagonal_profile_kernel(const Grid& g, const KernelProfile& p11, cd slope11,
                                 const KernelProfile& p22, cd slope22);
KernelOp sandwich(const NodeMat2& left, const KernelOp& K, const NodeMat2& right);
Field2 apply(const KernelOp& K, const Field2& f);
}  // namespace serialref

}  // namespace mslab
