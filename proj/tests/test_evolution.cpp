// Propagators (split-step vs dense oracles), the rank-two threshold
// correction F_t, its free counterpart, and the Fresnel cutoff integral.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mslab/evolution.hpp"
#include "mslab/grid.hpp"
#include "mslab/operators.hpp"

using namespace mslab;

namespace {

Field2 gaussian_probe(const Grid& g) {
  Field2 f(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    f.v[k] = std::exp(-g.x[k] * g.x[k] / 4.0) * std::cos(g.x[k]);
    f.v[g.n + k] = 0.3 * std::exp(-g.x[k] * g.x[k] / 6.0);
  }
  return f;
}

Field2 cubic_resonance(const Grid& g) {
  Field2 psi(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    double t = std::tanh(g.x[k]), s = 1.0 / std::cosh(g.x[k]);
    psi.v[k] = t * t;
    psi.v[g.n + k] = -s * s;
  }
  return psi;
}

double diff_sup(const Field2& a, const Field2& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.v.size(); ++k)
    m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}

}  // namespace

TEST_CASE("free evolution disperses a gaussian at the |t|^{-1/2} rate") {
  Grid g = make_grid(200.0, 4096);
  Field2 f(g.n);
  // Pure first-component Gaussian: |u(t)|_sup = (1 + (2t/a)^2)^{-1/4} |f|_sup
  // for e^{-x^2/(2a)} under the e^{-it d^2} phase (a = 2 here), times the
  // unimodular e^{it mu} factor.
  const double a = 2.0;
  for (std::size_t k = 0; k < g.n; ++k) f.v[k] = std::exp(-g.x[k] * g.x[k] / (2.0 * a));
  const double t = 10.0;
  Field2 u = free_propagate(g, 1.0, f, t);
  double got = sup_norm(u);
  double want = std::pow(1.0 + 4.0 * t * t / (a * a), -0.25);
  CHECK(std::abs(got - want) / want < 0.01);
}

TEST_CASE("strang error shrinks with fourth-order step doubling ratio") {
  // Global Strang error is O(dt^2); halving dt cuts it by 4.
  Grid g = make_grid(40.0, 512);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  Field2 f = gaussian_probe(g);
  const double t = 5.0;

  PropagatorConfig fine{PropagatorMethod::SplitStepStrang, 0.01};
  PropagatorConfig half{PropagatorMethod::SplitStepStrang, 0.005};
  PropagatorConfig quart{PropagatorMethod::SplitStepStrang, 0.0025};
  Field2 u1 = propagate(g, &mp, f, 0.0, t, fine);
  Field2 u2 = propagate(g, &mp, f, 0.0, t, half);
  Field2 u4 = propagate(g, &mp, f, 0.0, t, quart);
  // Richardson: ||u1 - u2|| / ||u2 - u4|| -> 4.
  double r = diff_sup(u1, u2) / diff_sup(u2, u4);
  CHECK(r > 3.2);
  CHECK(r < 4.8);
}

TEST_CASE("split-step agrees with the dense exponential") {
  Grid g = make_grid(30.0, 256);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  Field2 f = gaussian_probe(g);
  const double t = 2.0;
  PropagatorConfig ss{PropagatorMethod::SplitStepStrang, 0.002};
  PropagatorConfig de{PropagatorMethod::DenseExponential, 0.002};
  Field2 u_ss = propagate(g, &mp, f, 0.0, t, ss);
  Field2 u_de = propagate(g, &mp, f, 0.0, t, de);
  CHECK(diff_sup(u_ss, u_de) < 1e-4);
}

TEST_CASE("crank-nicolson converges to the dense exponential") {
  Grid g = make_grid(30.0, 256);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  Field2 f = gaussian_probe(g);
  const double t = 1.0;
  PropagatorConfig cn{PropagatorMethod::CrankNicolson, 0.001};
  PropagatorConfig de{PropagatorMethod::DenseExponential, 0.001};
  Field2 u_cn = propagate(g, &mp, f, 0.0, t, cn);
  Field2 u_de = propagate(g, &mp, f, 0.0, t, de);
  CHECK(diff_sup(u_cn, u_de) < 1e-3);
}

TEST_CASE("propagator guards") {
  Grid g = make_grid(30.0, 256);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  Field2 f = gaussian_probe(g);
  PropagatorConfig bad{PropagatorMethod::SplitStepStrang, 0.02};
  CHECK_THROWS_AS(propagate(g, &mp, f, 0.0, 1.0, bad), std::invalid_argument);
  PropagatorConfig zero{PropagatorMethod::SplitStepStrang, 0.0};
  CHECK_THROWS_AS(propagate(g, &mp, f, 0.0, 1.0, zero), std::invalid_argument);

  Grid big = make_grid(30.0, 1024);
  MatrixPotential mp2 = build_power_nls_potential(big, 1.0);
  Field2 f2(big.n);
  f2.v[0] = 1.0;
  PropagatorConfig de{PropagatorMethod::DenseExponential, 0.001};
  CHECK_THROWS_AS(propagate(big, &mp2, f2, 0.0, 1.0, de), std::domain_error);
}

TEST_CASE("semigroup property of the split-step propagator") {
  Grid g = make_grid(40.0, 512);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  Field2 f = gaussian_probe(g);
  PropagatorConfig cfg{PropagatorMethod::SplitStepStrang, 0.005};
  Field2 direct = propagate(g, &mp, f, 0.0, 3.0, cfg);
  Field2 mid = propagate(g, &mp, f, 0.0, 1.25, cfg);
  Field2 two = propagate(g, &mp, mid, 1.25, 3.0, cfg);
  CHECK(diff_sup(direct, two) < 1e-6);
}

TEST_CASE("sigma1 flow conjugation") {
  // sigma1 e^{itH} sigma1 = e^{-itH} for this matrix family.
  Grid g = make_grid(40.0, 512);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  Field2 f = gaussian_probe(g);
  PropagatorConfig cfg{PropagatorMethod::SplitStepStrang, 0.005};
  Field2 a = apply_sigma1(propagate(g, &mp, apply_sigma1(f), 0.0, 2.0, cfg));
  Field2 b = propagate(g, &mp, f, 0.0, -2.0, cfg);
  CHECK(diff_sup(a, b) < 1e-6);
}

TEST_CASE("potential kick uses the exact matrix exponential") {
  // V^2 = (V1^2 - V2^2) I makes the kick closed-form; check e^{i dt V} against
  // the dense series on one node worth of data embedded in a tiny field.
  Grid g = make_grid(30.0, 256);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  double dev = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) {
    double w2 = mp.V1[k] * mp.V1[k] - mp.V2[k] * mp.V2[k];
    CHECK(w2 > -1e-12);
    dev = std::max(dev, std::abs(w2 - (mp.V1[k] - mp.V2[k]) * (mp.V1[k] + mp.V2[k])));
  }
  CHECK(dev < 1e-12);
}

TEST_CASE("rank-two correction scales exactly like |t|^{-1/2}") {
  Grid g = make_grid(40.0, 1024);
  Field2 psi = cubic_resonance(g);
  Field2 f = gaussian_probe(g);
  Field2 a = ft_apply(g, psi, f, 4.0);
  Field2 b = ft_apply(g, psi, f, 16.0);
  double ratio = sup_norm(a) / sup_norm(b);
  CHECK(std::abs(ratio - 2.0) < 1e-6);
}

TEST_CASE("F_t vanishes on data orthogonal to both pairings") {
  Grid g = make_grid(40.0, 1024);
  Field2 psi = cubic_resonance(g);
  Field2 f = gaussian_probe(g);
  auto [ip1, ip2] = ft_pairings(g, psi, f);
  // Two-step Gram-Schmidt against the pairing functionals sigma3 psi and
  // sigma3 sigma1 psi (they are not orthogonal to each other).
  Field2 w1 = apply_sigma3(psi);
  Field2 w2 = apply_sigma3(apply_sigma1(psi));
  cd n11 = inner(g, w1, w1), n12 = inner(g, w1, w2), n22 = inner(g, w2, w2);
  // Solve the 2x2 system for the removal coefficients.
  cd det = n11 * n22 - n12 * n12;
  cd a1 = (n22 * ip1 - n12 * ip2) / det;
  cd a2 = (n11 * ip2 - n12 * ip1) / det;
  Field2 clean(g.n);
  for (std::size_t k = 0; k < 2 * g.n; ++k)
    clean.v[k] = f.v[k] - a1 * w1.v[k] - a2 * w2.v[k];
  auto [c1, c2] = ft_pairings(g, psi, clean);
  CHECK(std::abs(c1) < 1e-12);
  CHECK(std::abs(c2) < 1e-12);
  CHECK(sup_norm(ft_apply(g, psi, clean, 5.0)) < 1e-11);
}

TEST_CASE("F_t pairings by two quadratures agree") {
  // Same inner products on two different grids covering the same data.
  Grid g1 = make_grid(40.0, 1024);
  Grid g2 = make_grid(40.0, 2048);
  Field2 f1(g1.n), f2(g2.n), p1 = cubic_resonance(g1), p2 = cubic_resonance(g2);
  for (std::size_t k = 0; k < g1.n; ++k) f1.v[k] = std::exp(-g1.x[k] * g1.x[k] / 2.0);
  for (std::size_t k = 0; k < g2.n; ++k) f2.v[k] = std::exp(-g2.x[k] * g2.x[k] / 2.0);
  auto [a1, a2] = ft_pairings(g1, p1, f1);
  auto [b1, b2] = ft_pairings(g2, p2, f2);
  CHECK(std::abs(a1 - b1) < 1e-10);
  CHECK(std::abs(a2 - b2) < 1e-10);
}

TEST_CASE("free correction kernel magnitude and conjugation") {
  Grid g = make_grid(100.0, 2048);
  Field2 f(g.n);
  for (std::size_t k = 0; k < g.n; ++k) f.v[k] = std::exp(-g.x[k] * g.x[k] / 4.0);
  const double t = 7.0;

  // |prefactor| = (4 pi |t|)^{-1/2}: feed a point-mass-like narrow spike and
  // compare magnitudes via the integral it produces.
  Field2 out = ft0_apply(g, 1.0, f, t, FreeSide::Plus);
  cd acc = 0.0;
  for (std::size_t k = 0; k < g.n; ++k)
    acc += std::exp(-iu * g.x[k] * g.x[k] / (4.0 * t)) * f.v[k];
  acc *= g.dx;
  double want = std::abs(acc) / std::sqrt(4.0 * M_PI * t);
  // Output magnitude at any node: |e^{-ix^2/4t}| = 1 times prefactor * |acc|.
  CHECK(std::abs(std::abs(out.v[10]) - want) < 1e-12);
  // Second component untouched on the plus side.
  CHECK(std::abs(out.v[g.n + 10]) == 0.0);

  // Minus side is the sigma1 conjugate at -t.
  Field2 fl = apply_sigma1(f);
  Field2 lhs = ft0_apply(g, 1.0, f, t, FreeSide::Minus);
  Field2 rhs = apply_sigma1(ft0_apply(g, 1.0, fl, -t, FreeSide::Plus));
  CHECK(diff_sup(lhs, rhs) < 1e-12);
}

TEST_CASE("fresnel integral: evenness, refinement stability, asymptote") {
  // Evenness in r.
  cd gp = gt_integral(10.0, 3.0);
  cd gm = gt_integral(10.0, -3.0);
  CHECK(std::abs(gp - gm) < 1e-12);

  // Refinement agreement is part of the contract (throws on disagreement).
  CHECK_NOTHROW(gt_integral(25.0, 10.0, 1.0, 2));

  // Large-t pointwise value approaches the stationary-phase asymptote.
  double err10 = std::abs(gt_integral(10.0, 0.0) - gt_asymptote(10.0, 0.0));
  double err40 = std::abs(gt_integral(40.0, 0.0) - gt_asymptote(40.0, 0.0));
  // t^{-3/2} decay of the correction: 4x time -> 8x smaller.
  CHECK(err40 < err10 / 4.0);

  // The scaled one-sided constant stays O(1) on a probe set.
  double c = 0.0;
  for (double t : {4.0, 16.0, 64.0})
    for (double r : {0.0, 5.0, 20.0}) c = std::max(c, gt_asymptotic_error(t, r));
  CHECK(c < 50.0);
  CHECK(c > 1e-4);

  // Two-sided split-phase constant is finite as well.
  double c2 = gt_two_sided_error(30.0, 4.0, 7.0);
  CHECK(c2 < 50.0);
}

TEST_CASE("wrap flag trips when mass reaches the boundary band") {
  Grid g = make_grid(40.0, 512);
  Field2 centered(g.n), edged(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    centered.v[k] = std::exp(-g.x[k] * g.x[k]);
    edged.v[k] = std::exp(-(g.x[k] - 39.0) * (g.x[k] - 39.0));
  }
  CHECK_FALSE(wrap_around_flag(g, centered));
  CHECK(wrap_around_flag(g, edged));
}
