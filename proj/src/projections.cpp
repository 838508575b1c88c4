#include "mslab/projections.hpp"

#include <cmath>
#include <stdexcept>

#include "mslab/operators.hpp"

namespace mslab {

namespace {

// All scalar ops run through filtered spectral derivatives with a floor well
// above the FFT round-trip noise (~1e-16 relative). D1, D2 stack up to six
// derivative orders; noise at the Nyquist frequency picks up xi_max^6, so a
// 1e-15 floor is not enough headroom. Each stage re-filters, which caps the
// carried noise at 1e-13 while the zeroed true content costs only
// ~1e-13 * xi*^6 where xi* is where the data's spectrum crosses the floor.
cvec d1(const Grid& g, const cvec& f) {
  return spectral_derivative(g, f, 1, nullptr, 1e-13);
}
cvec d2(const Grid& g, const cvec& f) {
  return spectral_derivative(g, f, 2, nullptr, 1e-13);
}

}  // namespace

cvec apply_S(const Grid& g, const cvec& f) {
  cvec r = d1(g, f);
  for (std::size_t k = 0; k < g.n; ++k) r[k] += std::tanh(g.x[k]) * f[k];
  return r;
}

cvec apply_Lplus(const Grid& g, const cvec& f) {
  cvec r = d2(g, f);
  for (std::size_t k = 0; k < g.n; ++k) {
    double s = 1.0 / std::cosh(g.x[k]);
    r[k] = -r[k] + (1.0 - 6.0 * s * s) * f[k];
  }
  return r;
}

cvec apply_Lminus(const Grid& g, const cvec& f) {
  cvec r = d2(g, f);
  for (std::size_t k = 0; k < g.n; ++k) {
    double s = 1.0 / std::cosh(g.x[k]);
    r[k] = -r[k] + (1.0 - 2.0 * s * s) * f[k];
  }
  return r;
}

cvec apply_D1(const Grid& g, const cvec& f) {
  cvec s2 = apply_S(g, apply_S(g, f));
  cvec r = d2(g, s2);
  for (std::size_t k = 0; k < g.n; ++k) r[k] = -r[k] + s2[k];
  return r;
}

cvec apply_D2(const Grid& g, const cvec& f) {
  return apply_S(g, apply_S(g, apply_Lplus(g, f)));
}

Field2 apply_Dtilde(const Grid& g, const Field2& f) {
  const std::size_t n = g.n;
  cvec f1(f.v.begin(), f.v.begin() + n);
  cvec f2(f.v.begin() + n, f.v.end());
  cvec a = apply_D1(g, f1);
  cvec b = apply_D2(g, f1);
  cvec c = apply_D1(g, f2);
  cvec d = apply_D2(g, f2);
  Field2 out(n);
  const cd half_i = cd(0.0, 0.5);
  for (std::size_t k = 0; k < n; ++k) {
    out.v[k] = half_i * (-a[k] - b[k] + c[k] - d[k]);
    out.v[n + k] = half_i * (-a[k] + b[k] + c[k] + d[k]);
  }
  return out;
}

Field2 apply_L1(const Grid& g, const Field2& f) {
  const std::size_t n = g.n;
  cvec f1(f.v.begin(), f.v.begin() + n);
  cvec f2(f.v.begin() + n, f.v.end());
  cvec top = apply_Lminus(g, f2);
  cvec bot = apply_Lplus(g, f1);
  Field2 out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.v[k] = top[k];
    out.v[n + k] = -bot[k];
  }
  return out;
}

Field2 apply_L1_via_conjugation(const Grid& g, const Field2& f) {
  // L1 = -i J^{-1} H1 J with J = (1/sqrt2) [[1, i], [1, -i]],
  // J^{-1} = (1/sqrt2) [[1, 1], [-i, i]].
  const std::size_t n = g.n;
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Field2 jf(n);
  for (std::size_t k = 0; k < n; ++k) {
    jf.v[k] = inv_sqrt2 * (f.v[k] + iu * f.v[n + k]);
    jf.v[n + k] = inv_sqrt2 * (f.v[k] - iu * f.v[n + k]);
  }
  Field2 hjf = apply_H(g, mp, jf);
  Field2 out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.v[k] = -iu * inv_sqrt2 * (hjf.v[k] + hjf.v[n + k]);
    out.v[n + k] = -iu * (-iu * inv_sqrt2) * (hjf.v[k] - hjf.v[n + k]);
  }
  return out;
}

GeneralizedKernel cubic_generalized_kernel(const Grid& g) {
  const std::size_t n = g.n;
  const double rt2 = std::sqrt(2.0);
  GeneralizedKernel gk;
  for (auto& e : gk.eta) e = Field2(n);
  for (std::size_t k = 0; k < n; ++k) {
    double x = g.x[k];
    double q = rt2 / std::cosh(x);
    double dq = -q * std::tanh(x);
    gk.eta[0].v[k] = q;
    gk.eta[0].v[n + k] = -q;
    gk.eta[1].v[k] = q + x * dq;
    gk.eta[1].v[n + k] = q + x * dq;
    gk.eta[2].v[k] = dq;
    gk.eta[2].v[n + k] = dq;
    gk.eta[3].v[k] = x * q;
    gk.eta[3].v[n + k] = -x * q;
  }
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      Field2 s3 = apply_sigma3(gk.eta[j]);
      gk.gram_numeric(j, k) = inner(g, s3, gk.eta[k]).real();
    }
  gk.gram_exact.setZero();
  gk.gram_exact(0, 1) = 4.0;
  gk.gram_exact(1, 0) = 4.0;
  gk.gram_exact(2, 3) = -4.0;
  gk.gram_exact(3, 2) = -4.0;
  gk.gram_inv = gk.gram_numeric.inverse();
  return gk;
}

Field2 apply_Pd(const Grid& g, const GeneralizedKernel& gk, const Field2& f) {
  const std::size_t n = g.n;
  std::array<cd, 4> pair;
  for (int k = 0; k < 4; ++k) {
    Field2 s3 = apply_sigma3(gk.eta[k]);
    pair[k] = inner(g, s3, f);
  }
  Field2 out(n);
  for (int j = 0; j < 4; ++j) {
    cd coeff = 0.0;
    for (int k = 0; k < 4; ++k) coeff += gk.gram_inv(j, k) * pair[k];
    for (std::size_t m = 0; m < 2 * n; ++m) out.v[m] += coeff * gk.eta[j].v[m];
  }
  return out;
}

Field2 apply_Ps(const Grid& g, const GeneralizedKernel& gk, const Field2& f) {
  Field2 pd = apply_Pd(g, gk, f);
  Field2 out(g.n);
  for (size_t m = 0; m < f.v.size(); ++m) out.v[m] = f.v[m] - pd.v[m];
  return out;
}

double pd_trace(const GeneralizedKernel& gk) {
  Eigen::Matrix4d exact_inv = Eigen::Matrix4d::Zero();
  exact_inv(0, 1) = 0.25;
  exact_inv(1, 0) = 0.25;
  exact_inv(2, 3) = -0.25;
  exact_inv(3, 2) = -0.25;
  // tr P_d = sum_jk (G^{-1})_jk <sigma3 eta_k, eta_j>
  return (exact_inv * gk.gram_numeric).trace();
}

}  // namespace mslab
