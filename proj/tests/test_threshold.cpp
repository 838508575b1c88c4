// Threshold classification and resonance pipeline. The cubic potential has
// exact reference values: eta = 5/24, c0 = 1, c1 = 0, d = -5i/12, and the
// resonance pair (tanh^2, -sech^2). sigma = 2 is on the regular side.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mslab/grid.hpp"
#include "mslab/operators.hpp"
#include "mslab/resolvent.hpp"
#include "mslab/threshold.hpp"

using namespace mslab;

namespace {

struct CubicSetup {
  Grid g;
  MatrixPotential mp;
  FactoredPotential fp;
  S1Result s1;
  ResonanceData rd;
};

CubicSetup make_cubic(std::size_t n) {
  CubicSetup s{make_grid(20.0, n), {}, {}, {}, {}};
  s.mp = build_power_nls_potential(s.g, 1.0);
  s.fp = factorize(s.g, s.mp);
  KernelOp T = build_T(s.fp, s.g, s.mp.mu);
  KernelOp Q = build_Q(s.g, s.fp);
  s.s1 = find_S1(T, Q);
  REQUIRE(s.s1.cls.kind == ThresholdKind::Irregular);
  double sg = 1.0;
  PotentialEval tail = [sg](double x, double& v1, double& v2) {
    const double sech = 1.0 / std::cosh(sg * x);
    v1 = (sg + 1.0) * (sg + 1.0) * sech * sech;
    v2 = sg * (sg + 1.0) * sech * sech;
  };
  s.rd = resonance_from_phi(*s.s1.phi, s.fp, s.g, s.mp.mu, tail);
  return s;
}

}  // namespace

TEST_CASE("cubic potential is irregular with a rank-one kernel") {
  CubicSetup s = make_cubic(1024);
  CHECK(s.s1.cls.rank == 1);
  CHECK(s.s1.kernel_eigenvalue < 1e-5);
  CHECK(s.s1.cls.singular_gap > 1e3);
}

TEST_CASE("cubic resonance constants against the closed forms") {
  CubicSetup s = make_cubic(1024);
  const ResonanceData& rd = s.rd;
  CHECK(std::abs(rd.c0 - 1.0) < 1e-6);
  CHECK(std::abs(rd.c1) < 1e-6);
  CHECK(std::abs(rd.c2_plus) < 1e-5);
  CHECK(std::abs(rd.c2_minus) < 1e-5);
  CHECK(std::abs(rd.eta - 5.0 / 24.0) < 1e-6);
  CHECK(std::abs(rd.d - cd(0.0, -5.0 / 12.0)) < 1e-6);

  // Psi equals (tanh^2, -sech^2) up to discretization error.
  double rel = 0.0;
  for (std::size_t k = 0; k < s.g.n; ++k) {
    double t = std::tanh(s.g.x[k]), sech = 1.0 / std::cosh(s.g.x[k]);
    rel = std::max(rel, std::abs(rd.psi.v[k] - cd(t * t)));
    rel = std::max(rel, std::abs(rd.psi.v[s.g.n + k] + cd(sech * sech)));
  }
  CHECK(rel < 1e-4);

  // d relation d = -2i (|c0|^2 + |c1|^2) eta with the normalized constants.
  cd want = -2.0 * iu * (std::norm(rd.c0) + std::norm(rd.c1)) * rd.eta;
  CHECK(std::abs(rd.d - want) < 1e-12);
}

TEST_CASE("resonance solves the eigenvalue problem at the threshold") {
  CubicSetup s = make_cubic(1024);
  CHECK(verify_resonance(s.g, s.mp, s.rd.psi, s.mp.mu) < 1e-4);
}

TEST_CASE("sigma = 2 is regular") {
  Grid g = make_grid(20.0, 512);
  MatrixPotential mp = build_power_nls_potential(g, 2.0);
  FactoredPotential fp = factorize(g, mp);
  KernelOp T = build_T(fp, g, mp.mu);
  KernelOp Q = build_Q(g, fp);
  S1Result s1 = find_S1(T, Q);
  CHECK(s1.cls.kind == ThresholdKind::Regular);
  CHECK(s1.cls.rank == 0);
  CHECK(s1.cls.singular_gap > 1e3);
}

TEST_CASE("projection algebra") {
  Grid g = make_grid(20.0, 512);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  FactoredPotential fp = factorize(g, mp);
  KernelOp P = build_P(g, fp);
  KernelOp Q = build_Q(g, fp);
  // P^2 = P, Q = I - P, PQ = 0.
  KernelOp PP = compose(P, P);
  CHECK((PP.m - P.m).cwiseAbs().maxCoeff() < 1e-12);
  KernelOp PQ = compose(P, Q);
  CHECK(PQ.m.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("inverse expansion of M matches the Laurent data") {
  CubicSetup s = make_cubic(512);
  // Richardson extrapolation of the 1/z coefficient from two small z.
  double rel = minv_leading_coefficient_error(s.fp, s.g, s.mp.mu, s.rd, 0.02, 0.01);
  CHECK(rel < 1e-3);
  RankOneResiduals rr = rank_one_identity_residuals(s.fp, s.g, s.mp.mu, s.rd);
  CHECK(rr.stpts < 1e-6);
  CHECK(rr.ptstp < 1e-6);
  CHECK(rr.s1m1s1 < 1e-6);
}

TEST_CASE("resonance transfers to a larger grid") {
  CubicSetup s = make_cubic(1024);
  Grid big = make_grid(60.0, 2048);
  Field2 psi_big = resonance_on_grid(big, s.g, s.fp, s.rd, s.mp.mu);
  double dev = 0.0;
  for (std::size_t k = 0; k < big.n; ++k) {
    double t = std::tanh(big.x[k]), sech = 1.0 / std::cosh(big.x[k]);
    dev = std::max(dev, std::abs(psi_big.v[k] - cd(t * t)));
    dev = std::max(dev, std::abs(psi_big.v[big.n + k] + cd(sech * sech)));
  }
  CHECK(dev < 1e-3);
}
