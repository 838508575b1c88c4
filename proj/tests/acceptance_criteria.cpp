// Acceptance gate. Usage: acceptance <criterion 1..10>. Each criterion prints
// one PASS/FAIL line per sub-check and a final summary line; the process
// exits 0 only if every sub-check of the requested criterion passes.
// Criteria (time budgets in parentheses):
//   1  Laplace closed form on the strip (1 s)
//   2  quadratic null structure (5 s)
//   3  cubic threshold pipeline and resonance constants (30 s)
//   4  sigma = 2 regular threshold with a gap
//   5  inverse-expansion Laurent data and rank-one identities
//   6  conjugation intertwining and kernel annihilation
//   7  free-operator dispersive rates (2 min)
//   8  cubic dispersive rates with and without the F_t subtraction (10 min)
//   9  Fresnel cutoff constant: finite and refinement-stable (1 min)
//  10  propagator and resolvent oracle agreement
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "mslab/decay.hpp"
#include "mslab/evolution.hpp"
#include "mslab/grid.hpp"
#include "mslab/identities.hpp"
#include "mslab/kernelop.hpp"
#include "mslab/operators.hpp"
#include "mslab/projections.hpp"
#include "mslab/resolvent.hpp"
#include "mslab/threshold.hpp"

using namespace mslab;
using clk = std::chrono::steady_clock;

namespace {

int g_criterion = 0;
bool g_all_pass = true;

void report(const std::string& what, double value, double bound) {
  bool ok = value < bound;
  g_all_pass = g_all_pass && ok;
  std::printf("%s criterion %d: %s = %.3e (bound %.1e)\n", ok ? "PASS" : "FAIL",
              g_criterion, what.c_str(), value, bound);
}

void report_flag(const std::string& what, bool ok) {
  g_all_pass = g_all_pass && ok;
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", g_criterion, what.c_str());
}

void report_range(const std::string& what, double value, double lo, double hi) {
  bool ok = value > lo && value < hi;
  g_all_pass = g_all_pass && ok;
  std::printf("%s criterion %d: %s = %.4f (range [%.2f, %.2f])\n", ok ? "PASS" : "FAIL",
              g_criterion, what.c_str(), value, lo, hi);
}

struct Timer {
  clk::time_point t0 = clk::now();
  double seconds() const {
    return std::chrono::duration<double>(clk::now() - t0).count();
  }
};

// ---- shared pipeline helpers --------------------------------------------

struct Pipeline {
  Grid g;
  MatrixPotential mp;
  FactoredPotential fp;
  S1Result s1;
  ResonanceData rd;
};

Pipeline cubic_pipeline(std::size_t n) {
  Pipeline p{make_grid(20.0, n), {}, {}, {}, {}};
  p.mp = build_power_nls_potential(p.g, 1.0);
  p.fp = factorize(p.g, p.mp);
  KernelOp T = build_T(p.fp, p.g, p.mp.mu);
  KernelOp Q = build_Q(p.g, p.fp);
  p.s1 = find_S1(T, Q);
  PotentialEval tail = [](double x, double& v1, double& v2) {
    const double s = 1.0 / std::cosh(x);
    v1 = 4.0 * s * s;
    v2 = 2.0 * s * s;
  };
  p.rd = resonance_from_phi(*p.s1.phi, p.fp, p.g, p.mp.mu, tail);
  return p;
}

Field2 conj_probe(const Grid& g, int seed) {
  const double w = 2.0 + 1.3 * std::fmod(0.37 * seed + 0.21, 1.0);
  const double kk = 2.0 * std::fmod(0.61 * seed + 0.13, 1.0);
  const double x0 = 4.0 * (std::fmod(0.29 * seed + 0.53, 1.0) - 0.5);
  const double sgn = (seed % 2 == 0) ? 1.0 : -1.0;
  Field2 f(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double u = (g.x[j] - x0) / w;
    const double env = std::exp(-0.5 * u * u);
    f.v[j] = env * std::cos(kk * g.x[j]);
    f.v[g.n + j] = sgn * env * std::sin(kk * g.x[j]);
  }
  return f;
}

double diff_sup(const Field2& a, const Field2& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.v.size(); ++k)
    m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}

// ---- criteria -------------------------------------------------------------

void criterion_1() {
  Timer timer;
  Grid g = make_grid(120.0, 8192);
  rvec br = cubic_laplace_bracket(g);
  const double rt2 = std::sqrt(2.0);
  report("|L at +sqrt2|", std::abs(laplace_transform(g, br, cd{rt2, 0.0})), 1e-8);
  report("|L at -sqrt2|", std::abs(laplace_transform(g, br, cd{-rt2, 0.0})), 1e-8);
  double sup = 0.0;
  for (int k = 0; k < 37; ++k) {
    double s = -1.8 + 3.6 * k / 36.0;
    sup = std::max(sup, std::abs(laplace_transform(g, br, cd{s, 0.0}) -
                                 laplace_bracket_closed_form(cd{s, 0.0})));
  }
  report("closed-form sup over 37 points", sup, 1e-6);
  report("runtime seconds", timer.seconds(), 1.0);
}

void criterion_2() {
  Timer timer;
  Grid g = make_grid(48.0, 4096);
  NullStructureReport r = null_structure_check(g);
  report("F1 polynomial residual", r.f1_residual, 1e-5);
  report("F2 polynomial residual", r.f2_residual, 1e-5);
  report("transform vs closed form (|xi|<=4)", r.ft_sup_error, 1e-5);
  report("|Ghat(+1)|", r.g_at_plus1, 1e-6);
  report("|Ghat(-1)|", r.g_at_minus1, 1e-6);
  report("index routes G31 vs G12", r.g31_vs_g12, 1e-10);
  report("runtime seconds", timer.seconds(), 5.0);
}

void criterion_3() {
  Timer timer;
  Pipeline p = cubic_pipeline(1024);
  report_flag("threshold is irregular with rank 1",
              p.s1.cls.kind == ThresholdKind::Irregular && p.s1.cls.rank == 1);
  double rel = 0.0;
  for (std::size_t k = 0; k < p.g.n; ++k) {
    double t = std::tanh(p.g.x[k]), s = 1.0 / std::cosh(p.g.x[k]);
    rel = std::max(rel, std::abs(p.rd.psi.v[k] - cd(t * t)));
    rel = std::max(rel, std::abs(p.rd.psi.v[p.g.n + k] + cd(s * s)));
  }
  report("resonance pair sup error", rel, 1e-3);
  report("|c0 - 1|", std::abs(p.rd.c0 - 1.0), 1e-3);
  report("|c1|", std::abs(p.rd.c1), 1e-3);
  report("|c2+|", std::abs(p.rd.c2_plus), 1e-6);
  report("|c2-|", std::abs(p.rd.c2_minus), 1e-6);
  cd want = -2.0 * iu * (std::norm(p.rd.c0) + std::norm(p.rd.c1)) * p.rd.eta;
  report("d relation relative error", std::abs(p.rd.d - want) / std::abs(want), 1e-6);
  report("runtime seconds", timer.seconds(), 30.0);
}

void criterion_4() {
  Grid g = make_grid(20.0, 512);
  MatrixPotential mp = build_power_nls_potential(g, 2.0);
  FactoredPotential fp = factorize(g, mp);
  KernelOp T = build_T(fp, g, mp.mu);
  KernelOp Q = build_Q(g, fp);
  S1Result s1 = find_S1(T, Q);
  report_flag("sigma = 2 threshold is regular",
              s1.cls.kind == ThresholdKind::Regular && s1.cls.rank == 0);
  bool gap_ok = s1.cls.singular_gap > 1e3;
  g_all_pass = g_all_pass && gap_ok;
  std::printf("%s criterion 4: singular gap = %.3e (needs > 1e3)\n",
              gap_ok ? "PASS" : "FAIL", s1.cls.singular_gap);
}

void criterion_5() {
  Pipeline p = cubic_pipeline(512);
  double rel = minv_leading_coefficient_error(p.fp, p.g, p.mp.mu, p.rd, 0.02, 0.01);
  report("1/z coefficient relative error", rel, 1e-3);
  RankOneResiduals rr = rank_one_identity_residuals(p.fp, p.g, p.mp.mu, p.rd);
  report("S1 T P T S1 identity", rr.stpts, 1e-6);
  report("P T S1 T P identity", rr.ptstp, 1e-6);
  report("S1 M1 S1 identity", rr.s1m1s1, 1e-6);
}

void criterion_6() {
  Grid g = make_grid(40.0, 2048);
  MatrixPotential mp = build_power_nls_potential(g, 1.0);
  double worst = 0.0, worst_l1 = 0.0;
  for (int seed = 0; seed < 8; ++seed) {
    Field2 f = conj_probe(g, seed);
    worst = std::max(worst, diff_sup(apply_Dtilde(g, apply_H(g, mp, f)),
                                     apply_H0(g, mp.mu, apply_Dtilde(g, f))));
    worst_l1 = std::max(worst_l1, diff_sup(apply_L1(g, f), apply_L1_via_conjugation(g, f)));
  }
  report("intertwining sup over 8 probes", worst, 1e-6);
  GeneralizedKernel gk = cubic_generalized_kernel(g);
  double eta_max = 0.0;
  for (const auto& e : gk.eta)
    eta_max = std::max(eta_max, sup_norm(apply_Dtilde(g, e)));
  report("conjugation annihilates the kernel", eta_max, 1e-6);
  report("off-diagonal route agreement", worst_l1, 1e-8);
}

void criterion_7() {
  Timer timer;
  Grid g = make_grid(400.0, 8192);
  Field2 f(g.n);
  for (std::size_t k = 0; k < g.n; ++k) f.v[k] = std::exp(-g.x[k] * g.x[k] / 8.0);
  std::vector<double> ts;
  for (int k = 0; k < 25; ++k) ts.push_back(5.0 * std::pow(16.0, k / 24.0));
  DispersiveSeries series = free_dispersive_experiment(g, f, ts, 1.0);
  std::vector<double> t, unw, aft;
  for (const auto& r : series.rows) {
    t.push_back(r.t);
    unw.push_back(r.unweighted_sup);
    aft.push_back(r.weighted_sup_after_ft);
  }
  DecayFit f_unw = fit_power_law(t, unw, 5.0, 80.0);
  DecayFit f_aft = fit_power_law(t, aft, 5.0, 80.0);
  report_range("free unweighted exponent", f_unw.exponent, -0.6, -0.4);
  report_range("free weighted post-subtraction exponent", f_aft.exponent, -1.7, -1.3);
  report("runtime seconds", timer.seconds(), 120.0);
}

void criterion_8() {
  Timer timer;
  Pipeline p = cubic_pipeline(1024);
  Grid big = make_grid(800.0, 16384);
  MatrixPotential mp_big = build_power_nls_potential(big, 1.0);
  GeneralizedKernel gk = cubic_generalized_kernel(big);
  Field2 psi_big = resonance_on_grid(big, p.g, p.fp, p.rd, p.mp.mu);

  Field2 f(big.n);
  for (std::size_t k = 0; k < big.n; ++k)
    f.v[k] = std::exp(-big.x[k] * big.x[k] / 8.0);

  std::vector<double> ts;
  for (double m : {2., 3., 4., 5., 6., 7., 9., 11., 13., 16., 19., 22., 25.})
    ts.push_back(M_PI * m);

  PropagatorConfig cfg{PropagatorMethod::SplitStepStrang, 0.0025};
  DispersiveSeries series = dispersive_experiment(big, mp_big, gk, psi_big, f, ts, cfg, 2.0);

  std::vector<double> t, unw, ctl, aft;
  for (const auto& r : series.rows) {
    t.push_back(r.t);
    unw.push_back(r.unweighted_sup);
    ctl.push_back(r.weighted_sup);
    aft.push_back(r.weighted_sup_after_ft);
  }
  // The resonance channel carries a spatially flat profile, so the last
  // samples legitimately light up the 5% boundary band on any finite box.
  // Fits therefore run on the clean window the wrap guard reports, and that
  // window has to stay long enough to support a sound power-law fit.
  double usable = usable_t_max(series);
  report_range("clean fit window end", usable, 40.0, ts.back() + 1.0);

  DecayFit f_unw = fit_power_law(t, unw, ts.front(), usable);
  DecayFit f_ctl = fit_power_law(t, ctl, ts.front(), usable);
  DecayFit f_aft = fit_power_law(t, aft, ts.front(), usable);
  report_range("unweighted exponent", f_unw.exponent, -0.65, -0.35);
  report_range("weighted exponent without subtraction", f_ctl.exponent, -0.7, -0.35);
  report_range("weighted exponent with subtraction", f_aft.exponent, -1.7, -1.3);
  report_range("unweighted fit r^2", f_unw.r_squared, 0.98, 1.0 + 1e-12);
  report_range("control fit r^2", f_ctl.r_squared, 0.98, 1.0 + 1e-12);
  report_range("subtracted fit r^2", f_aft.r_squared, 0.98, 1.0 + 1e-12);
  report("runtime seconds", timer.seconds(), 600.0);
}

void criterion_9() {
  Timer timer;
  const double ts[] = {1, 2, 4, 7, 10, 16, 25, 40, 63, 100};
  const double rs[] = {0, 1, 2, 5, 10, 15, 20, 30, 40, 50};
  auto sweep = [&](int refine) {
    double c = 0.0;
    for (double t : ts)
      for (double r : rs) {
        double e = std::abs(gt_integral(t, r, 1.0, refine) - gt_asymptote(t, r)) *
                   std::pow(t, 1.5) / std::sqrt(1.0 + r * r);
        c = std::max(c, e);
      }
    return c;
  };
  double c1 = sweep(1);
  double c2 = sweep(2);
  report_flag("constant finite on [1,100]x[0,50]",
              std::isfinite(c1) && std::isfinite(c2) && c1 < 1e3);
  double ratio = std::max(c1 / c2, c2 / c1);
  report("coarse/refined instability factor", ratio, 2.0);
  std::printf("     criterion 9: C coarse = %.4f, refined = %.4f\n", c1, c2);
  report("runtime seconds", timer.seconds(), 60.0);
}

void criterion_10() {
  // Propagator oracle.
  {
    Grid g = make_grid(30.0, 256);
    MatrixPotential mp = build_power_nls_potential(g, 1.0);
    Field2 f(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
      f.v[k] = std::exp(-g.x[k] * g.x[k] / 4.0) * std::cos(g.x[k]);
      f.v[g.n + k] = 0.3 * std::exp(-g.x[k] * g.x[k] / 6.0);
    }
    PropagatorConfig ss{PropagatorMethod::SplitStepStrang, 0.002};
    PropagatorConfig de{PropagatorMethod::DenseExponential, 0.002};
    Field2 u_ss = propagate(g, &mp, f, 0.0, 2.0, ss);
    Field2 u_de = propagate(g, &mp, f, 0.0, 2.0, de);
    report("split-step vs dense exponential at t = 2", diff_sup(u_ss, u_de), 1e-4);
  }
  // Resolvent oracle: engineered probe reproduced through the kernel route
  // and through one dense LU solve.
  {
    Grid g = make_grid(20.0, 512);
    MatrixPotential mp = build_power_nls_potential(g, 1.0);
    FactoredPotential fp = factorize(g, mp);
    const double z = 0.5, lam = mp.mu + z * z;
    Field2 u(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
      u.v[k] = std::exp(-g.x[k] * g.x[k] / 4.0);
      u.v[g.n + k] = 0.3 * std::exp(-g.x[k] * g.x[k] / 6.0);
    }
    Field2 rhs = apply_H(g, mp, u);
    for (std::size_t k = 0; k < 2 * g.n; ++k) rhs.v[k] -= lam * u.v[k];
    KernelOp R = perturbed_resolvent(fp, g, mp.mu, z, Side::Plus);
    Field2 Rf = R.apply(rhs);

    Eigen::MatrixXd A = dense_H(g, &mp, mp.mu);
    A.diagonal().array() -= lam;
    Eigen::VectorXd fv(2 * static_cast<Eigen::Index>(g.n));
    for (std::size_t k = 0; k < 2 * g.n; ++k)
      fv[static_cast<Eigen::Index>(k)] = rhs.v[k].real();
    Eigen::VectorXd w = A.partialPivLu().solve(fv);
    double dev = 0.0;
    for (std::size_t k = 0; k < 2 * g.n; ++k)
      dev = std::max(dev, std::abs(Rf.v[k] - w[static_cast<Eigen::Index>(k)]));
    report("kernel resolvent vs dense solve", dev, 1e-3);
  }
  // Neumann series at large z.
  {
    Grid g = make_grid(20.0, 512);
    MatrixPotential mp = build_power_nls_potential(g, 1.0);
    FactoredPotential fp = factorize(g, mp);
    KernelOp M = build_M(fp, g, mp.mu, 4.0, Side::Plus);
    NeumannResult nr = neumann_inverse(M);
    Eigen::MatrixXcd direct = M.m.partialPivLu().inverse();
    report("neumann inverse vs LU", (nr.inv - direct).cwiseAbs().maxCoeff(), 1e-8);
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
    return 2;
  }
  g_criterion = std::atoi(argv[1]);
  switch (g_criterion) {
    case 1: criterion_1(); break;
    case 2: criterion_2(); break;
    case 3: criterion_3(); break;
    case 4: criterion_4(); break;
    case 5: criterion_5(); break;
    case 6: criterion_6(); break;
    case 7: criterion_7(); break;
    case 8: criterion_8(); break;
    case 9: criterion_9(); break;
    case 10: criterion_10(); break;
    default:
      std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
      return 2;
  }
  std::printf("criterion %d: %s\n", g_criterion, g_all_pass ? "PASS" : "FAIL");
  return g_all_pass ? 0 : 1;
}
