#include "mslab/kernelop.hpp"

#include <cmath>

namespace mslab {

Field2 KernelOp::apply(const Field2& f) const {
  Field2 out(grid.n);
  Eigen::Map<const Eigen::VectorXcd> fv(f.v.data(), static_cast<Eigen::Index>(f.v.size()));
  Eigen::Map<Eigen::VectorXcd> ov(out.v.data(), static_cast<Eigen::Index>(out.v.size()));
  ov = m * fv;
  if (!quadrature_absorbed) ov *= grid.dx;
  return out;
}

cd KernelOp::kernel_value(int bi, int bj, Eigen::Index i, Eigen::Index j) const {
  cd e = m(bi * n() + i, bj * n() + j);
  if (i == j) e -= diag_correction[bi * 2 + bj];
  return quadrature_absorbed ? e / grid.dx : e;
}

KernelOp kernel_identity(const Grid& g) {
  KernelOp K;
  K.grid = g;
  K.m = Eigen::MatrixXcd::Identity(2 * static_cast<Eigen::Index>(g.n),
                                   2 * static_cast<Eigen::Index>(g.n));
  return K;
}

KernelOp compose(const KernelOp& A, const KernelOp& B) {
  KernelOp C;
  C.grid = A.grid;
  C.m = A.m * B.m;
  return C;
}

KernelOp diagonal_profile_kernel(const Grid& g, const KernelProfile& p11, cd slope11,
                                 const KernelProfile& p22, cd slope22) {
  const auto n = static_cast<Eigen::Index>(g.n);
  KernelOp K;
  K.grid = g;
  K.m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const double dx = g.dx;
  // Profiles depend on |x_i - x_j| = dx * |i - j| only; evaluate each distance
  // once instead of n^2 times.
  cvec prof11(g.n), prof22(g.n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index d = 0; d < n; ++d) {
    const double r = dx * static_cast<double>(d);
    prof11[d] = p11(r) * dx;
    prof22[d] = p22(r) * dx;
  }
  const cd corr11 = dx * dx / 6.0 * slope11;
  const cd corr22 = dx * dx / 6.0 * slope22;
  K.diag_correction = {corr11, cd{0, 0}, cd{0, 0}, corr22};
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index d = (i >= j) ? i - j : j - i;
      K.m(i, j) = prof11[d];
      K.m(n + i, n + j) = prof22[d];
    }
    K.m(i, i) += corr11;
    K.m(n + i, n + i) += corr22;
  }
  return K;
}

NodeMat2 v_matrix(const Grid& g, const FactoredPotential& fp) {
  NodeMat2 v;
  v.m11 = fp.a;
  v.m12 = fp.b;
  v.m21 = fp.b;
  v.m22 = fp.a;
  (void)g;
  return v;
}

NodeMat2 v1_matrix(const Grid& g, const FactoredPotential& fp) {
  NodeMat2 v;
  v.m11.resize(g.n);
  v.m12.resize(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    v.m11[j] = -fp.a[j];
    v.m12[j] = -fp.b[j];
  }
  v.m21 = fp.b;
  v.m22 = fp.a;
  return v;
}

KernelOp sandwich(const NodeMat2& left, const KernelOp& K, const NodeMat2& right) {
  const Eigen::Index n = K.n();
  KernelOp C;
  C.grid = K.grid;
  C.quadrature_absorbed = K.quadrature_absorbed;
  C.m.resize(2 * n, 2 * n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cd k11 = K.m(i, j), k12 = K.m(i, n + j);
      const cd k21 = K.m(n + i, j), k22 = K.m(n + i, n + j);
      // rows scaled by left(x_i), columns by right(y_j)
      const cd t11 = left.m11[i] * k11 + left.m12[i] * k21;
      const cd t12 = left.m11[i] * k12 + left.m12[i] * k22;
      const cd t21 = left.m21[i] * k11 + left.m22[i] * k21;
      const cd t22 = left.m21[i] * k12 + left.m22[i] * k22;
      C.m(i, j) = t11 * right.m11[j] + t12 * right.m21[j];
      C.m(i, n + j) = t11 * right.m12[j] + t12 * right.m22[j];
      C.m(n + i, j) = t21 * right.m11[j] + t22 * right.m21[j];
      C.m(n + i, n + j) = t21 * right.m12[j] + t22 * right.m22[j];
    }
  }
  return C;
}

double spectral_norm(const Eigen::MatrixXcd& A, int iters) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(A.cols());
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v(k) += cd(0.0, 1e-3 * std::sin(0.7 * static_cast<double>(k + 1)));
  v.normalize();
  double s = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = A.adjoint() * (A * v);
    const double nn = w.norm();
    if (nn == 0.0) return 0.0;
    v = w / nn;
    s = std::sqrt(nn);
  }
  return s;
}

namespace serialref {

KernelOp diagonal_profile_kernel(const Grid& g, const KernelProfile& p11, cd slope11,
                                 const KernelProfile& p22, cd slope22) {
  const auto n = static_cast<Eigen::Index>(g.n);
  KernelOp K;
  K.grid = g;
  K.m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const double dx = g.dx;
  cvec prof11(g.n), prof22(g.n);
  for (Eigen::Index d = 0; d < n; ++d) {
    const double r = dx * static_cast<double>(d);
    prof11[d] = p11(r) * dx;
    prof22[d] = p22(r) * dx;
  }
  const cd corr11 = dx * dx / 6.0 * slope11;
  const cd corr22 = dx * dx / 6.0 * slope22;
  K.diag_correction = {corr11, cd{0, 0}, cd{0, 0}, corr22};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index d = (i >= j) ? i - j : j - i;
      K.m(i, j) = prof11[d];
      K.m(n + i, n + j) = prof22[d];
    }
    K.m(i, i) += corr11;
    K.m(n + i, n + i) += corr22;
  }
  return K;
}

KernelOp sandwich(const NodeMat2& left, const KernelOp& K, const NodeMat2& right) {
  const Eigen::Index n = K.n();
  KernelOp C;
  C.grid = K.grid;
  C.quadrature_absorbed = K.quadrature_absorbed;
  C.m.resize(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cd k11 = K.m(i, j), k12 = K.m(i, n + j);
      const cd k21 = K.m(n + i, j), k22 = K.m(n + i, n + j);
      const cd t11 = left.m11[i] * k11 + left.m12[i] * k21;
      const cd t12 = left.m11[i] * k12 + left.m12[i] * k22;
      const cd t21 = left.m21[i] * k11 + left.m22[i] * k21;
      const cd t22 = left.m21[i] * k12 + left.m22[i] * k22;
      C.m(i, j) = t11 * right.m11[j] + t12 * right.m21[j];
      C.m(i, n + j) = t11 * right.m12[j] + t12 * right.m22[j];
      C.m(n + i, j) = t21 * right.m11[j] + t22 * right.m21[j];
      C.m(n + i, n + j) = t21 * right.m12[j] + t22 * right.m22[j];
    }
  }
  return C;
}

Field2 apply(const KernelOp& K, const Field2& f) {
  const std::size_t n2 = f.v.size();
  Field2 out(f.n);
  for (std::size_t i = 0; i < n2; ++i) {
    cd s{0.0, 0.0};
    for (std::size_t j = 0; j < n2; ++j)
      s += K.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * f.v[j];
    out.v[i] = s;
  }
  if (!K.quadrature_absorbed)
    for (cd& c : out.v) c *= K.grid.dx;
  return out;
}

}  // namespace serialref
}  // namespace mslab
