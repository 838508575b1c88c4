#include "mslab/decay.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mslab {

DecayFit fit_power_law(const std::vector<double>& t, const std::vector<double>& v,
                       double t_min, double t_max) {
  if (t.size() != v.size())
    throw std::invalid_argument("fit_power_law: series length mismatch");
  std::vector<double> lt, lv;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_min || t[k] > t_max) continue;
    if (v[k] <= 0.0)
      throw std::domain_error("fit_power_law: nonpositive value inside fit window");
    lt.push_back(std::log(t[k]));
    lv.push_back(std::log(v[k]));
  }
  const std::size_t m = lt.size();
  if (m < 8) throw std::domain_error("fit_power_law: fewer than 8 points in window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sx += lt[k];
    sy += lv[k];
    sxx += lt[k] * lt[k];
    sxy += lt[k] * lv[k];
  }
  const double det = m * sxx - sx * sx;
  DecayFit fit;
  fit.exponent = (m * sxy - sx * sy) / det;
  fit.log_prefactor = (sy * sxx - sx * sxy) / det;
  double ss_res = 0, ss_tot = 0, mean = sy / m;
  for (std::size_t k = 0; k < m; ++k) {
    double pred = fit.log_prefactor + fit.exponent * lt[k];
    ss_res += (lv[k] - pred) * (lv[k] - pred);
    ss_tot += (lv[k] - mean) * (lv[k] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.n_points = static_cast<int>(m);
  return fit;
}

DispersiveSeries dispersive_experiment(const Grid& g, const MatrixPotential& mp,
                                       const GeneralizedKernel& gk,
                                       const Field2& psi, const Field2& f,
                                       const std::vector<double>& t_samples,
                                       const PropagatorConfig& cfg, double sigma) {
  DispersiveSeries series;
  series.sigma = sigma;
  Field2 g0 = apply_Ps(g, gk, f);
  Field2 u = g0;
  double t_cur = 0.0;
  for (double t : t_samples) {
    if (t <= t_cur)
      throw std::invalid_argument("dispersive_experiment: samples must ascend from 0");
    bool flag = false;
    u = propagate(g, &mp, u, t_cur, t, cfg, &flag);
    t_cur = t;
    NormSample row;
    row.t = t;
    row.unweighted_sup = inner_sup(g, u);
    row.weighted_sup = inner_weighted_sup(g, u, sigma);
    Field2 ft = ft_apply(g, psi, g0, t, mp.mu);
    Field2 diff(g.n);
    for (std::size_t m2 = 0; m2 < u.v.size(); ++m2) diff.v[m2] = u.v[m2] - ft.v[m2];
    row.weighted_sup_after_ft = inner_weighted_sup(g, diff, sigma);
    row.boundary_flag = flag;
    series.rows.push_back(row);
  }
  return series;
}

DispersiveSeries free_dispersive_experiment(const Grid& g, const Field2& f,
                                            const std::vector<double>& t_samples,
                                            double sigma) {
  DispersiveSeries series;
  series.sigma = sigma;
  Field2 g0 = ps_plus_free(f);
  for (double t : t_samples) {
    Field2 u = free_propagate(g, 1.0, g0, t);
    NormSample row;
    row.t = t;
    row.unweighted_sup = inner_sup(g, u);
    row.weighted_sup = inner_weighted_sup(g, u, sigma);
    Field2 ft0 = ft0_apply(g, 1.0, g0, t, FreeSide::Plus);
    Field2 diff(g.n);
    for (std::size_t m = 0; m < u.v.size(); ++m) diff.v[m] = u.v[m] - ft0.v[m];
    row.weighted_sup_after_ft = inner_weighted_sup(g, diff, sigma);
    row.boundary_flag = wrap_around_flag(g, u);
    series.rows.push_back(row);
  }
  return series;
}

double usable_t_max(const DispersiveSeries& series) {
  double last_ok = -1.0;
  for (const auto& row : series.rows) {
    if (row.boundary_flag) break;
    last_ok = row.t;
  }
  if (last_ok < 0.0)
    throw std::runtime_error("usable_t_max: first sample already boundary-contaminated");
  return last_ok;
}

void write_norm_series_csv(const std::string& path, const DispersiveSeries& series,
                           const std::string& note) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("write_norm_series_csv: cannot open " + path);
  std::fprintf(fp, "# norm series; sigma=%g; %s\n", series.sigma, note.c_str());
  std::fprintf(fp, "t,unweighted_sup,weighted_sup_sigma,weighted_sup_after_Ft,boundary_flag\n");
  for (const auto& r : series.rows)
    std::fprintf(fp, "%.10g,%.12e,%.12e,%.12e,%d\n", r.t, r.unweighted_sup,
                 r.weighted_sup, r.weighted_sup_after_ft, r.boundary_flag ? 1 : 0);
  std::fclose(fp);
}

FreeProfileCheck free_wave_profile_check(const Grid& g, const MatrixPotential& mp,
                                         const GeneralizedKernel& gk,
                                         const Field2& psi, const Field2& f,
                                         double t, const PropagatorConfig& cfg) {
  if (t < 5.0)
    throw std::domain_error("free_wave_profile_check: t >= 5 required");
  FreeProfileCheck out;
  Field2 g0 = apply_Ps(g, gk, f);
  Field2 u = propagate(g, &mp, g0, 0.0, -t, cfg);

  auto [ip1, ip2] = ft_pairings(g, psi, g0);
  const double root4pi = std::sqrt(4.0 * M_PI);
  out.c_minus = std::exp(-iu * M_PI / 4.0) / root4pi * ip1;
  out.c_plus = -std::exp(iu * M_PI / 4.0) / root4pi * ip2;

  const std::size_t n = g.n;
  Field2 profile(n);
  cd cm = out.c_minus * std::exp(-iu * t) / std::sqrt(t);
  cd cp = out.c_plus * std::exp(iu * t) / std::sqrt(t);
  for (std::size_t k = 0; k < n; ++k) {
    profile.v[k] = cm * psi.v[k] + cp * psi.v[n + k];
    profile.v[n + k] = cm * psi.v[n + k] + cp * psi.v[k];
  }

  Field2 fm = ft_apply(g, psi, g0, -t, mp.mu);
  double cross = 0.0;
  for (std::size_t k = 0; k < 2 * n; ++k)
    cross = std::max(cross, std::abs(profile.v[k] - fm.v[k]));
  out.coeff_crosscheck = cross;

  Field2 diff(n);
  for (std::size_t k = 0; k < 2 * n; ++k) diff.v[k] = u.v[k] - profile.v[k];
  out.scaled_residual = inner_weighted_sup(g, diff, 2.0) * std::pow(t, 1.5);
  return out;
}

}  // namespace mslab
