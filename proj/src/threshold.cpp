#include "mslab/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mslab {

namespace {

Eigen::VectorXd stacked_ab(const Grid& g, const FactoredPotential& fp) {
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::VectorXd w(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    w(j) = fp.a[j];
    w(n + j) = fp.b[j];
  }
  return w;
}

}  // namespace

KernelOp build_P(const Grid& g, const FactoredPotential& fp) {
  if (fp.v1_l1 <= 0.0)
    throw std::domain_error("build_P: zero potential, projection degenerate");
  Eigen::VectorXd w = stacked_ab(g, fp);
  KernelOp P;
  P.grid = g;
  // P f = (a,b) <(a,b), f> / ||V1||_1; note ||(a,b)||_L2^2 = ||V1||_1, so P^2 = P.
  P.m = ((g.dx / fp.v1_l1) * (w * w.transpose())).cast<cd>();
  return P;
}

KernelOp build_Q(const Grid& g, const FactoredPotential& fp) {
  KernelOp Q = build_P(g, fp);
  Q.m = Eigen::MatrixXcd::Identity(Q.m.rows(), Q.m.cols()) - Q.m;
  return Q;
}

KernelOp build_T(const FactoredPotential& fp, const Grid& g, double mu) {
  KernelOp G0 = g0_kernel(g, mu);
  KernelOp T = sandwich(v_matrix(g, fp), G0, v1_matrix(g, fp));
  T.m += Eigen::MatrixXcd::Identity(T.m.rows(), T.m.cols());
  return T;
}

S1Result find_S1(const KernelOp& T, const KernelOp& Q, double tol) {
  if (tol <= 0.0 || tol >= 1.0) throw std::invalid_argument("find_S1: tol must be in (0,1)");
  const Eigen::Index d = T.m.rows();
  const double dx = T.grid.dx;
  Eigen::MatrixXd A = T.m.real();
  // Recover the P direction from Q = I - P; P is a rank-one orthogonal
  // projection, so its dominant column is the direction itself.
  Eigen::MatrixXd Pm = Eigen::MatrixXd::Identity(d, d) - Q.m.real();
  Eigen::Index jbest = 0;
  double cbest = -1.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double nj = Pm.col(j).norm();
    if (nj > cbest) {
      cbest = nj;
      jbest = j;
    }
  }
  Eigen::VectorXd u = Pm.col(jbest).normalized();
  if (u.sum() < 0.0) u = -u;  // (a,b) is entrywise nonnegative

  // QTQ = (I - uu^T) A (I - uu^T) via rank-one updates; keeps A real symmetric.
  Eigen::VectorXd Au = A * u;
  const double uAu = u.dot(Au);
  Eigen::MatrixXd Aq = A;
  Aq.noalias() -= u * Au.transpose();
  Aq.noalias() -= Au * u.transpose();
  Aq.noalias() += (uAu)*u * u.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Aq);
  if (es.info() != Eigen::Success) throw std::runtime_error("find_S1: eigensolver failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd& vec = es.eigenvectors();

  const double lmax = lam.cwiseAbs().maxCoeff();
  const double cut = tol * lmax;
  std::vector<Eigen::Index> kernel_idx;
  double smallest_retained = lmax;
  double largest_discarded = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double al = std::abs(lam(k));
    const bool p_dir = std::abs(u.dot(vec.col(k))) >= 0.5;  // structural null vector
    if (p_dir) continue;
    if (al < cut) {
      kernel_idx.push_back(k);
      largest_discarded = std::max(largest_discarded, al);
    } else {
      smallest_retained = std::min(smallest_retained, al);
    }
  }

  S1Result out;
  out.cls.rank = static_cast<int>(kernel_idx.size());
  if (out.cls.rank >= 2)
    throw std::runtime_error(
        "find_S1: QTQ kernel rank >= 2, inconsistent with the admissible potential class");
  if (kernel_idx.empty()) {
    out.cls.kind = ThresholdKind::Regular;
    out.cls.singular_gap = smallest_retained / cut;
    return out;
  }
  out.cls.kind = ThresholdKind::Irregular;
  out.cls.singular_gap = smallest_retained / std::max(largest_discarded, 1e-300);
  out.kernel_eigenvalue = largest_discarded;

  Eigen::VectorXd phi = vec.col(kernel_idx.front());
  phi -= u * u.dot(phi);  // re-project onto ran(Q)
  phi /= std::sqrt(dx) * phi.norm();
  // Sign convention: c0 >= 0. c0 is proportional to <(a,b), T phi> and the P
  // direction is a positive multiple of (a,b).
  if (u.dot(A * phi) < 0.0) phi = -phi;
  out.phi = std::move(phi);
  return out;
}

ResonanceData resonance_from_phi(Eigen::VectorXd phi, const FactoredPotential& fp, const Grid& g,
                                 double mu, const PotentialEval& vtail) {
  const auto n = static_cast<Eigen::Index>(g.n);
  const double dx = g.dx;
  KernelOp G0 = g0_kernel(g, mu);
  KernelOp T = build_T(fp, g, mu);
  Eigen::MatrixXd Tm = T.m.real();
  Eigen::MatrixXd G0m = G0.m.real();
  Eigen::VectorXd w = stacked_ab(g, fp);

  double c0 = dx * w.dot(Tm * phi) / fp.v1_l1;
  if (c0 < 0.0) {
    phi = -phi;
    c0 = -c0;
  }
  double c1 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    c1 += g.x[j] * (fp.a[j] * phi(j) + fp.b[j] * phi(n + j));
  c1 *= 0.5 * dx;

  const double scale = std::hypot(c0, c1);
  if (scale < 1e-8)
    throw std::runtime_error("resonance_from_phi: c0 and c1 both vanish, no bounded solution");

  // v1 phi, then Psi = -G0[v1 phi] + c0 e1 (e1 = constant first component).
  Eigen::VectorXd v1phi(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    v1phi(j) = -fp.a[j] * phi(j) - fp.b[j] * phi(n + j);
    v1phi(n + j) = fp.b[j] * phi(j) + fp.a[j] * phi(n + j);
  }
  Eigen::VectorXd Psi = -(G0m * v1phi);
  for (Eigen::Index j = 0; j < n; ++j) Psi(j) += c0;

  phi /= scale;
  Psi /= scale;
  v1phi /= scale;
  c0 /= scale;
  c1 /= scale;

  ResonanceData rd;
  rd.normalized = true;
  rd.c0 = cd{c0, 0.0};
  rd.c1 = cd{c1, 0.0};
  rd.eta = 1.0 / (dx * phi.squaredNorm());
  rd.d = -2.0 * iu * (c0 * c0 + c1 * c1) * rd.eta;
  rd.phi = Field2(g.n);
  rd.psi = Field2(g.n);
  for (Eigen::Index j = 0; j < 2 * n; ++j) {
    rd.phi.v[j] = cd{phi(j), 0.0};
    rd.psi.v[j] = cd{Psi(j), 0.0};
  }

  // c2+- composite quadrature: interior nodes use the pipeline Psi; exterior
  // nodes (grid-aligned, out to |x| = 60) evaluate Psi from its kernel
  // formula and the potential from the tail evaluator.
  const double s0 = std::sqrt(2.0 * mu);
  const double x_cut = 60.0;
  double c2p = 0.0, c2m = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double V1j, V2j;
    const double aj = fp.a[j], bj = fp.b[j];
    V1j = aj * aj + bj * bj;
    V2j = 2.0 * aj * bj;
    const double integ = V2j * Psi(j) + V1j * Psi(n + j);
    c2p += std::exp(+s0 * g.x[j]) * integ;
    c2m += std::exp(-s0 * g.x[j]) * integ;
  }
  if (vtail) {
    const auto ext = static_cast<Eigen::Index>(std::ceil((x_cut - g.half_width) / dx));
    for (int side = -1; side <= 1; side += 2) {
      for (Eigen::Index k = 1; k <= ext; ++k) {
        const double xq = (side < 0) ? g.x[0] - dx * static_cast<double>(k)
                                     : g.x[n - 1] + dx * static_cast<double>(k);
        double V1q = 0.0, V2q = 0.0;
        vtail(xq, V1q, V2q);
        // Psi at xq from the kernel formula against the interior sources.
        double P1 = c0, P2 = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          const double r = std::abs(xq - g.x[j]);
          P1 -= (-0.5 * r) * dx * v1phi(j);
          P2 -= (-std::exp(-s0 * r) / (2.0 * s0)) * dx * v1phi(n + j);
        }
        const double integ = V2q * P1 + V1q * P2;
        c2p += std::exp(+s0 * xq) * integ;
        c2m += std::exp(-s0 * xq) * integ;
      }
    }
  }
  rd.c2_plus = cd{dx * c2p / (2.0 * s0), 0.0};
  rd.c2_minus = cd{dx * c2m / (2.0 * s0), 0.0};
  return rd;
}

Field2 resonance_on_grid(const Grid& target, const Grid& source,
                         const FactoredPotential& fp, const ResonanceData& rd,
                         double mu) {
  const auto ns = static_cast<Eigen::Index>(source.n);
  const double dx = source.dx;
  const double s0 = std::sqrt(2.0 * mu);
  Eigen::VectorXd v1phi(2 * ns);
  for (Eigen::Index j = 0; j < ns; ++j) {
    const double p1 = rd.phi.v[j].real(), p2 = rd.phi.v[ns + j].real();
    v1phi(j) = -fp.a[j] * p1 - fp.b[j] * p2;
    v1phi(ns + j) = fp.b[j] * p1 + fp.a[j] * p2;
  }
  const double c0 = rd.c0.real();
  Field2 out(target.n);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < target.n; ++k) {
    const double xq = target.x[k];
    double P1 = c0, P2 = 0.0;
    for (Eigen::Index j = 0; j < ns; ++j) {
      const double r = std::abs(xq - source.x[j]);
      P1 += 0.5 * r * dx * v1phi(j);
      P2 += std::exp(-s0 * r) / (2.0 * s0) * dx * v1phi(ns + j);
    }
    out.v[k] = P1;
    out.v[target.n + k] = P2;
  }
  return out;
}

double verify_resonance(const Grid& g, const MatrixPotential& mp, const Field2& psi,
                        double lambda, bool adjoint) {
  Field2 Hpsi = adjoint ? apply_sigma3(apply_H(g, mp, apply_sigma3(psi)))
                        : apply_H(g, mp, psi);
  Field2 res(g.n);
  for (std::size_t j = 0; j < 2 * g.n; ++j) res.v[j] = Hpsi.v[j] - lambda * psi.v[j];
  return weighted_sup_norm(g, res, 1.0);
}

Eigen::MatrixXcd s1_matrix(const Grid& g, const ResonanceData& rd) {
  const auto d = static_cast<Eigen::Index>(2 * g.n);
  Eigen::VectorXcd phi(d);
  for (Eigen::Index j = 0; j < d; ++j) phi(j) = rd.phi.v[j];
  return (rd.eta * g.dx) * (phi * phi.transpose());
}

double m_inverse_expansion_check(const FactoredPotential& fp, const Grid& g, double mu,
                                 const ResonanceData& rd, double z) {
  KernelOp M = build_M(fp, g, mu, z, Side::Plus);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M.m);
  const double rc = lu.rcond();
  if (rc <= 0.0 || 1.0 / rc > kConditionGuard)
    throw std::runtime_error("m_inverse_expansion_check: M(z) near-singular at z = " +
                             std::to_string(z));
  Eigen::MatrixXcd Minv = lu.solve(Eigen::MatrixXcd::Identity(M.m.rows(), M.m.cols()));

  const cd kappa = fp.v1_l1 / (2.0 * iu);
  Eigen::MatrixXcd S1 = s1_matrix(g, rd);
  KernelOp P = build_P(g, fp);
  KernelOp T = build_T(fp, g, mu);
  Eigen::MatrixXcd PTS1 = P.m * (T.m * S1);
  Eigen::MatrixXcd S1TP = S1 * (T.m * P.m);
  const cd czz = 1.0 / kappa + std::norm(rd.c0) * rd.eta * fp.v1_l1 / (rd.d * kappa * kappa);
  Eigen::MatrixXcd expl =
      (1.0 / rd.d) * ((1.0 / z) * S1 - PTS1 / kappa - S1TP / kappa) + (czz * z) * P.m;
  return spectral_norm(Minv - expl);
}

RankOneResiduals rank_one_identity_residuals(const FactoredPotential& fp, const Grid& g,
                                             double mu, const ResonanceData& rd) {
  Eigen::MatrixXcd S1 = s1_matrix(g, rd);
  KernelOp P = build_P(g, fp);
  KernelOp T = build_T(fp, g, mu);
  KernelOp M1 = sandwich(v_matrix(g, fp), g1_kernel(g), v1_matrix(g, fp));
  const double n0 = std::norm(rd.c0) * rd.eta * fp.v1_l1;
  RankOneResiduals rr;
  Eigen::MatrixXcd lhs1 = S1 * T.m * P.m * T.m * S1 - n0 * S1;
  rr.stpts = lhs1.cwiseAbs().maxCoeff();
  Eigen::MatrixXcd lhs2 = P.m * T.m * S1 * T.m * P.m - n0 * P.m;
  rr.ptstp = lhs2.cwiseAbs().maxCoeff();
  Eigen::MatrixXcd lhs3 = S1 * M1.m * S1 + 2.0 * iu * std::norm(rd.c1) * rd.eta * S1;
  rr.s1m1s1 = lhs3.cwiseAbs().maxCoeff();
  return rr;
}

double minv_leading_coefficient_error(const FactoredPotential& fp, const Grid& g, double mu,
                                      const ResonanceData& rd, double z1, double z2) {
  KernelOp M1 = build_M(fp, g, mu, z1, Side::Plus);
  KernelOp M2 = build_M(fp, g, mu, z2, Side::Plus);
  Eigen::MatrixXcd A1 = M1.m.partialPivLu().solve(
      Eigen::MatrixXcd::Identity(M1.m.rows(), M1.m.cols()));
  Eigen::MatrixXcd A2 = M2.m.partialPivLu().solve(
      Eigen::MatrixXcd::Identity(M2.m.rows(), M2.m.cols()));
  Eigen::MatrixXcd C = (A1 - A2) * (z1 * z2 / (z2 - z1));
  Eigen::MatrixXcd target = s1_matrix(g, rd) / rd.d;
  return spectral_norm(C - target) / spectral_norm(target);
}

}  // namespace mslab
