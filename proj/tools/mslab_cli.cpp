// Batch front-end. Commands:
//   verify          closed-form identity suites + threshold classification
//   resonance       threshold pipeline, JSON report of the resonance constants
//   evolve          norm-vs-time series CSV for P_s Gaussian data
//   decay           full dispersive experiment with power-law fits
//   resolvent-dump  kernel matrix CSV at a given z
// Exit codes: 0 pass, 1 check failure, 2 usage/config/resolution error.
// Every artifact embeds the FNV-1a hash of the effective configuration.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mslab/config.hpp"
#include "mslab/decay.hpp"
#include "mslab/evolution.hpp"
#include "mslab/grid.hpp"
#include "mslab/identities.hpp"
#include "mslab/operators.hpp"
#include "mslab/projections.hpp"
#include "mslab/resolvent.hpp"
#include "mslab/threshold.hpp"

using json = nlohmann::json;
using namespace mslab;

namespace {

struct CheckRow {
  std::string name;
  double value;
  double tol;
  bool pass;
};

void add_check(std::vector<CheckRow>& rows, const std::string& name, double value,
               double tol) {
  rows.push_back({name, value, tol, std::abs(value) < tol});
}

std::string hash_hex(const RunConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  return buf;
}

MatrixPotential potential_from_config(const RunConfig& cfg, const Grid& g) {
  const std::string kind = cfg.get_string("potential", "power_nls");
  if (kind == "power_nls")
    return build_power_nls_potential(g, cfg.get_double("sigma", 1.0));
  if (kind == "tabulated") {
    const std::string path = cfg.get_string("potential_file", "");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read potential_file: " + path);
    MatrixPotential mp;
    mp.mu = cfg.get_double("mu", 1.0);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      double v1, v2;
      if (std::sscanf(line.c_str(), "%lf %lf", &v1, &v2) != 2)
        throw std::runtime_error("potential_file: expected 'V1 V2' per line");
      mp.V1.push_back(v1);
      mp.V2.push_back(v2);
    }
    if (mp.V1.size() != g.n)
      throw std::runtime_error("potential_file: row count does not match grid n");
    return mp;
  }
  throw std::runtime_error("unknown potential kind: " + kind);
}

// The threshold pipeline on its working grid. Throws on pipeline errors.
struct PipelineOut {
  Grid grid;
  MatrixPotential mp;
  FactoredPotential fp;
  S1Result s1;
  std::optional<ResonanceData> rd;
};

PipelineOut run_pipeline(const RunConfig& cfg) {
  PipelineOut out;
  out.grid = make_grid(cfg.get_double("half_width", 20.0),
                       static_cast<std::size_t>(cfg.get_long("grid_n", 1024)));
  out.mp = potential_from_config(cfg, out.grid);
  validate_potential(out.grid, out.mp);
  out.fp = factorize(out.grid, out.mp);
  KernelOp T = build_T(out.fp, out.grid, out.mp.mu);
  KernelOp Q = build_Q(out.grid, out.fp);
  out.s1 = find_S1(T, Q, cfg.get_double("kernel_tol", 1e-5));
  if (out.s1.cls.kind == ThresholdKind::Irregular) {
    PotentialEval tail = nullptr;
    if (cfg.get_string("potential", "power_nls") == "power_nls") {
      const double sg = cfg.get_double("sigma", 1.0);
      tail = [sg](double x, double& v1, double& v2) {
        const double s = 1.0 / std::cosh(sg * x);
        v1 = (sg + 1.0) * (sg + 1.0) * s * s;
        v2 = sg * (sg + 1.0) * s * s;
      };
    }
    out.rd = resonance_from_phi(*out.s1.phi, out.fp, out.grid, out.mp.mu, tail);
  }
  return out;
}

int cmd_verify(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  std::vector<CheckRow> rows;
  const double sigma = cfg.get_double("sigma", 1.0);
  const bool cubic = std::abs(sigma - 1.0) < 1e-12;

  // Laplace suite (closed-form identities of fixed sech-type functions).
  {
    Grid lg = make_grid(cfg.get_double("laplace_half_width", 120.0),
                        static_cast<std::size_t>(cfg.get_long("laplace_n", 8192)));
    rvec bracket = cubic_laplace_bracket(lg);
    const double rt2 = std::sqrt(2.0);
    add_check(rows, "laplace_zero_plus_sqrt2",
              std::abs(laplace_transform(lg, bracket, cd{rt2, 0.0})), 1e-8);
    add_check(rows, "laplace_zero_minus_sqrt2",
              std::abs(laplace_transform(lg, bracket, cd{-rt2, 0.0})), 1e-8);
    double sup37 = 0.0;
    for (int k = 0; k < 37; ++k) {
      double s = -1.8 + 3.6 * k / 36.0;
      sup37 = std::max(sup37, std::abs(laplace_transform(lg, bracket, cd{s, 0.0}) -
                                       laplace_bracket_closed_form(cd{s, 0.0})));
    }
    add_check(rows, "laplace_closed_form_sup37", sup37, 1e-6);
  }
  {
    Grid fg = make_grid(20.0, 2048);
    SechFourierReport fr = sech_fourier_suite(fg);
    add_check(rows, "fourier_sech_sup", fr.sup_sech, 1e-8);
    add_check(rows, "fourier_sech2_sup", fr.sup_sech2, 1e-8);
    add_check(rows, "fourier_sech4_sup", fr.sup_sech4, 1e-8);
    add_check(rows, "sech4_identity_sup", fr.sech4_identity, 1e-9);
    add_check(rows, "laplace_fourier_consistency", fr.laplace_fourier, 1e-8);
  }

  if (cubic) {
    // Null structure + factorized routes (resolution-guarded).
    Grid ng = make_grid(cfg.get_double("null_half_width", 48.0),
                        static_cast<std::size_t>(cfg.get_long("grid_n", 4096)));
    NullStructureReport ns = null_structure_check(ng);
    add_check(rows, "null_f1_residual", ns.f1_residual, 1e-5);
    add_check(rows, "null_f2_residual", ns.f2_residual, 1e-5);
    add_check(rows, "null_ft_sup", ns.ft_sup_error, 1e-5);
    add_check(rows, "null_ghat_plus1", ns.g_at_plus1, 1e-6);
    add_check(rows, "null_ghat_minus1", ns.g_at_minus1, 1e-6);
    add_check(rows, "null_g31_vs_g12", ns.g31_vs_g12, 1e-10);
    add_check(rows, "null_dt_route_vs_poly", ns.dt_route_vs_poly, 1e-5);
    FactorizedRouteReport fa = f1_f2_factorized_check(ng);
    add_check(rows, "factorized_f1", fa.f1_iterated, 1e-5);
    add_check(rows, "factorized_f2", fa.f2_iterated, 1e-5);

    // Conjugation identities.
    Grid cg = make_grid(40.0, 2048);
    GeneralizedKernel gk = cubic_generalized_kernel(cg);
    double eta_max = 0.0;
    for (const auto& e : gk.eta) eta_max = std::max(eta_max, sup_norm(apply_Dtilde(cg, e)));
    add_check(rows, "dtilde_kills_kernel", eta_max, 1e-6);
    add_check(rows, "gram_vs_exact",
              (gk.gram_numeric - gk.gram_exact).cwiseAbs().maxCoeff(), 1e-8);
    add_check(rows, "pd_trace_minus_4", pd_trace(gk) - 4.0, 1e-6);
  }

  // Threshold classification.
  {
    PipelineOut p = run_pipeline(cfg);
    if (cubic) {
      add_check(rows, "threshold_rank_minus_1", p.s1.cls.rank - 1.0, 0.5);
      if (p.rd) {
        add_check(rows, "c0_minus_1", std::abs(p.rd->c0) - 1.0, 1e-3);
        add_check(rows, "c1_abs", std::abs(p.rd->c1), 1e-3);
        add_check(rows, "c2_plus_abs", std::abs(p.rd->c2_plus), 1e-6);
        add_check(rows, "c2_minus_abs", std::abs(p.rd->c2_minus), 1e-6);
        add_check(rows, "psi_eigen_residual",
                  verify_resonance(p.grid, p.mp, p.rd->psi, p.mp.mu), 1e-4);
      }
    } else {
      add_check(rows, "threshold_rank_regular", p.s1.cls.rank, 0.5);
      add_check(rows, "regular_gap_guard",
                p.s1.cls.singular_gap > 1e3 ? 0.0 : 1.0, 0.5);
    }
  }

  json out = json::array();
  bool all_pass = true;
  for (const auto& r : rows) {
    out.push_back({{"name", r.name}, {"value", r.value}, {"tol", r.tol}, {"pass", r.pass}});
    all_pass = all_pass && r.pass;
    if (!quiet)
      std::printf("%-32s %12.5e  tol %8.1e  %s\n", r.name.c_str(), r.value, r.tol,
                  r.pass ? "ok" : "FAIL");
  }
  json report = {{"config_hash", hash_hex(cfg)}, {"sigma", sigma}, {"checks", out}};
  std::ofstream(out_dir + "/verify_report.json") << report.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_resonance(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  PipelineOut p = run_pipeline(cfg);
  json rep;
  rep["config_hash"] = hash_hex(cfg);
  rep["kind"] = p.s1.cls.kind == ThresholdKind::Irregular ? "Irregular" : "Regular";
  rep["rank"] = p.s1.cls.rank;
  rep["singular_gap"] = p.s1.cls.singular_gap;
  bool ok = true;
  if (p.rd) {
    const ResonanceData& rd = *p.rd;
    rep["c0"] = {rd.c0.real(), rd.c0.imag()};
    rep["c1"] = {rd.c1.real(), rd.c1.imag()};
    rep["c2_plus"] = {rd.c2_plus.real(), rd.c2_plus.imag()};
    rep["c2_minus"] = {rd.c2_minus.real(), rd.c2_minus.imag()};
    rep["eta"] = rd.eta;
    rep["d"] = {rd.d.real(), rd.d.imag()};
    // Invariant residuals.
    const auto n = static_cast<Eigen::Index>(p.grid.n);
    double phi_v2psi = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = p.fp.a[j], b = p.fp.b[j];
      const cd p1 = rd.psi.v[j], p2 = rd.psi.v[n + j];
      phi_v2psi = std::max(phi_v2psi, std::abs(rd.phi.v[j] - (a * p1 + b * p2)));
      phi_v2psi = std::max(phi_v2psi, std::abs(rd.phi.v[n + j] - (b * p1 + a * p2)));
    }
    cd pphi = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      pphi += p.fp.a[j] * rd.phi.v[j] + p.fp.b[j] * rd.phi.v[n + j];
    pphi *= p.grid.dx;
    const double d_rel =
        std::abs(rd.d + 2.0 * iu * (std::norm(rd.c0) + std::norm(rd.c1)) * rd.eta);
    const double norm_dev = std::abs(std::norm(rd.c0) + std::norm(rd.c1) - 1.0);
    const double eig_res = verify_resonance(p.grid, p.mp, rd.psi, p.mp.mu);
    rep["residuals"] = {{"phi_eq_v2_psi", phi_v2psi},
                        {"p_phi", std::abs(pphi)},
                        {"d_relation", d_rel},
                        {"normalization", norm_dev},
                        {"eigen_residual", eig_res}};
    ok = phi_v2psi < 1e-4 && std::abs(pphi) < 1e-8 && d_rel < 1e-8 &&
         norm_dev < 1e-6 && eig_res < 1e-4;
  }
  std::ofstream(out_dir + "/resonance_report.json") << rep.dump(2) << "\n";
  if (!quiet) std::printf("%s\n", rep.dump(2).c_str());
  return ok ? 0 : 1;
}

std::vector<double> sample_times(const RunConfig& cfg, double t_min, double t_max) {
  // pi-incommensurate strobe: multiples of pi avoid sampling the e^{2it}
  // beat between the two threshold branches at a fixed phase.
  std::vector<double> ts;
  static const double mult[] = {2, 3, 4, 5, 6, 7, 9, 11, 13, 16, 19, 22, 25};
  for (double m : mult) {
    double t = M_PI * m;
    if (t >= t_min - 1e-9 && t <= t_max + 1e-9) ts.push_back(t);
  }
  const long extra = cfg.get_long("extra_samples", 0);
  if (ts.empty() || extra > 0) {
    const long n = std::max<long>(extra, 25);
    for (long k = 0; k < n; ++k)
      ts.push_back(t_min * std::pow(t_max / t_min, k / double(n - 1)));
    std::sort(ts.begin(), ts.end());
  }
  return ts;
}

void write_dat(const std::string& path, const DispersiveSeries& s,
               double NormSample::*col) {
  std::ofstream out(path);
  for (const auto& r : s.rows) out << r.t << " " << r.*col << "\n";
}

int cmd_evolve_or_decay(const RunConfig& cfg, const std::string& out_dir, bool quiet,
                        bool with_fits) {
  const double sigma = cfg.get_double("sigma", 1.0);
  const double t_min = cfg.get_double("t_min", 5.0);
  const double t_max = cfg.get_double("t_max", 80.0);
  if (with_fits && t_min >= t_max) {
    std::fprintf(stderr, "decay: empty fit window [%g, %g]\n", t_min, t_max);
    return 1;
  }

  // Threshold pipeline on its narrow working grid.
  RunConfig pipe_cfg = cfg;
  pipe_cfg.kv["half_width"] = cfg.get_string("pipeline_half_width", "20");
  pipe_cfg.kv["grid_n"] = cfg.get_string("pipeline_grid_n", "1024");
  PipelineOut p = run_pipeline(pipe_cfg);

  Grid big = make_grid(cfg.get_double("half_width", 800.0),
                       static_cast<std::size_t>(cfg.get_long("grid_n", 16384)));
  MatrixPotential mp_big = potential_from_config(cfg, big);

  Field2 f(big.n);
  const double gw = cfg.get_double("gaussian_width", 8.0);
  for (std::size_t k = 0; k < big.n; ++k)
    f.v[k] = std::exp(-big.x[k] * big.x[k] / gw);

  PropagatorConfig pc;
  pc.dt = cfg.get_double("dt", 0.0025);
  const std::string method = cfg.get_string("method", "split_step_strang");
  if (method == "crank_nicolson") pc.method = PropagatorMethod::CrankNicolson;
  else if (method == "dense_exponential") pc.method = PropagatorMethod::DenseExponential;
  else if (method != "split_step_strang")
    throw std::runtime_error("unknown method: " + method);

  std::vector<double> ts = sample_times(cfg, t_min, t_max);

  DispersiveSeries series;
  if (p.rd.has_value()) {
    GeneralizedKernel gk = cubic_generalized_kernel(big);
    Field2 psi_big = resonance_on_grid(big, p.grid, p.fp, *p.rd, p.mp.mu);
    series = dispersive_experiment(big, mp_big, gk, psi_big, f, ts, pc, 2.0);
  } else {
    // Regular threshold: no edge subspace, no F_t subtraction. March the full
    // data and record the weighted norm as the control column.
    series.sigma = 2.0;
    Field2 u = f;
    double t_cur = 0.0;
    for (double t : ts) {
      bool flag = false;
      u = propagate(big, &mp_big, u, t_cur, t, pc, &flag);
      t_cur = t;
      NormSample row;
      row.t = t;
      row.unweighted_sup = inner_sup(big, u);
      row.weighted_sup = inner_weighted_sup(big, u, 2.0);
      row.weighted_sup_after_ft = row.weighted_sup;
      row.boundary_flag = flag;
      series.rows.push_back(row);
    }
  }

  const std::string note = "config_hash=" + hash_hex(cfg) + " sigma=" + std::to_string(sigma);
  const std::string csv = out_dir + "/norm_series.csv";
  write_norm_series_csv(csv, series, note);
  write_dat(out_dir + "/unweighted.dat", series, &NormSample::unweighted_sup);
  write_dat(out_dir + "/weighted.dat", series, &NormSample::weighted_sup);
  write_dat(out_dir + "/weighted_after_ft.dat", series, &NormSample::weighted_sup_after_ft);

  json rep;
  rep["config_hash"] = hash_hex(cfg);
  rep["csv_path"] = csv;
  json flags = json::array();
  for (const auto& r : series.rows)
    if (r.boundary_flag) flags.push_back(r.t);
  rep["flags"] = flags;

  int rc = 0;
  if (with_fits) {
    double fit_max = t_max;
    try {
      fit_max = std::min(fit_max, usable_t_max(series));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "decay: %s\n", e.what());
      return 1;
    }
    if (fit_max < t_max && !quiet)
      std::fprintf(stderr, "decay: warning: wrap-around truncates fit window to t <= %g\n",
                   fit_max);
    std::vector<double> tcol, ucol, wcol, acol;
    for (const auto& r : series.rows) {
      tcol.push_back(r.t);
      ucol.push_back(r.unweighted_sup);
      wcol.push_back(r.weighted_sup);
      acol.push_back(r.weighted_sup_after_ft);
    }
    auto to_json = [](const DecayFit& f) {
      return json{{"exponent", f.exponent},
                  {"log_prefactor", f.log_prefactor},
                  {"r_squared", f.r_squared},
                  {"t_min", f.t_min},
                  {"t_max", f.t_max},
                  {"n_points", f.n_points}};
    };
    try {
      rep["unweighted_fit"] = to_json(fit_power_law(tcol, ucol, t_min, fit_max));
      rep["control_fit"] = to_json(fit_power_law(tcol, wcol, t_min, fit_max));
      rep["weighted_fit"] = to_json(fit_power_law(tcol, acol, t_min, fit_max));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "decay: fit window unusable: %s\n", e.what());
      rc = 1;
    }
  }
  std::ofstream(out_dir + (with_fits ? "/decay_report.json" : "/evolve_report.json"))
      << rep.dump(2) << "\n";
  if (!quiet) std::printf("%s\n", rep.dump(2).c_str());
  return rc;
}

int cmd_resolvent_dump(const RunConfig& cfg, const std::string& out_dir) {
  Grid g = make_grid(cfg.get_double("half_width", 20.0),
                     static_cast<std::size_t>(cfg.get_long("grid_n", 128)));
  MatrixPotential mp = potential_from_config(cfg, g);
  FactoredPotential fp = factorize(g, mp);
  const double z = cfg.get_double("z", 0.5);
  const Side side = cfg.get_string("side", "plus") == "minus" ? Side::Minus : Side::Plus;
  KernelOp R = perturbed_resolvent(fp, g, mp.mu, z, side);
  dump_kernel_csv(R, out_dir + "/resolvent_kernel.csv",
                  "config_hash=" + hash_hex(cfg) + " z=" + std::to_string(z));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix Schrodinger threshold laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand name

  std::string config_path, out_dir = ".";
  double sigma = -1.0, half_width = -1.0, t_min = -1.0, t_max = -1.0;
  long grid_n = -1;
  std::string method;
  bool quiet = false;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--sigma", sigma, "power nonlinearity (2*sigma > sqrt(2))");
  app.add_option("--grid-n", grid_n, "grid points (power of two)");
  app.add_option("--half-width", half_width, "grid half width");
  app.add_option("--t-min", t_min, "fit window start");
  app.add_option("--t-max", t_max, "fit window end");
  app.add_option("--method", method, "propagator method");
  app.add_flag("--quiet", quiet, "suppress per-check output");

  auto* verify = app.add_subcommand("verify", "run the identity suites");
  auto* resonance = app.add_subcommand("resonance", "threshold pipeline report");
  auto* evolve = app.add_subcommand("evolve", "norm-vs-time series");
  auto* decay = app.add_subcommand("decay", "dispersive experiment with fits");
  auto* rdump = app.add_subcommand("resolvent-dump", "kernel CSV at fixed z");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);  // prints message / help text
    return rc == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    std::vector<std::string> ov;
    if (sigma >= 0) ov.push_back("sigma=" + std::to_string(sigma));
    if (grid_n > 0) ov.push_back("grid_n=" + std::to_string(grid_n));
    if (half_width > 0) ov.push_back("half_width=" + std::to_string(half_width));
    if (t_min > 0) ov.push_back("t_min=" + std::to_string(t_min));
    if (t_max > 0) ov.push_back("t_max=" + std::to_string(t_max));
    if (!method.empty()) ov.push_back("method=" + method);
    apply_overrides(cfg, ov);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out_dir, quiet);
    if (resonance->parsed()) return cmd_resonance(cfg, out_dir, quiet);
    if (evolve->parsed()) return cmd_evolve_or_decay(cfg, out_dir, quiet, false);
    if (decay->parsed()) return cmd_evolve_or_decay(cfg, out_dir, quiet, true);
    if (rdump->parsed()) return cmd_resolvent_dump(cfg, out_dir);
  } catch (const std::domain_error& e) {
    // Resolution/parameter guards: configuration problem, not a check failure.
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
