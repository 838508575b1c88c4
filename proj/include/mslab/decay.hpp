// Decay-rate extraction: log-log power-law fits of norm-vs-time series and
// the orchestration of the dispersive experiments (propagate P_s data, record
// sup norms with and without the F_t subtraction, fit exponents).
//
// Expected rates for admissible potentials with a threshold resonance:
//   unweighted sup norm              ~ t^{-1/2}
//   <x>^{-2}-weighted, F_t removed   ~ t^{-3/2}
//   <x>^{-2}-weighted, F_t kept      ~ t^{-1/2}   (the resonance obstruction)
// The free-operator calibration run reproduces the same two rates with
// P_s^+ data and the F_t^0 kernel under a <x>^{-1} weight.
#pragma once
#include <functional>
#include <string>
#include <vector>

#include "mslab/evolution.hpp"
#include "mslab/grid.hpp"
#include "mslab/operators.hpp"
#include "mslab/projections.hpp"

namespace mslab {

struct DecayFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  double t_min = 0.0, t_max = 0.0;
  int n_points = 0;
};

// Least squares on (log t, log v) over t in [t_min, t_max]. Throws
// std::domain_error on nonpositive values inside the window or fewer than 8
// usable points.
DecayFit fit_power_law(const std::vector<double>& t, const std::vector<double>& v,
                       double t_min, double t_max);

struct NormSample {
  double t = 0.0;
  double unweighted_sup = 0.0;        // inner-90% sup of max(|u1|,|u2|)
  double weighted_sup = 0.0;          // same with the <x>^{-sigma} weight
  double weighted_sup_after_ft = 0.0; // weight applied to U - F_t g
  bool boundary_flag = false;         // wrap-around detected at this sample
};

struct DispersiveSeries {
  std::vector<NormSample> rows;
  double sigma = 2.0;
};

// Cubic-operator experiment: g = P_s f, march split-step between the ascending
// sample times, record the three norms and the wrap flag at each. psi is the
// normalized resonance pair sampled on the SAME grid as f.
DispersiveSeries dispersive_experiment(const Grid& g, const MatrixPotential& mp,
                                       const GeneralizedKernel& gk,
                                       const Field2& psi, const Field2& f,
                                       const std::vector<double>& t_samples,
                                       const PropagatorConfig& cfg,
                                       double sigma = 2.0);

// Free-operator calibration: exact multiplier evolution of P_s^+ f, F_t^0 as
// the subtracted kernel, <x>^{-sigma} weight (sigma = 1 matches the free
// weighted estimate).
DispersiveSeries free_dispersive_experiment(const Grid& g, const Field2& f,
                                            const std::vector<double>& t_samples,
                                            double sigma = 1.0);

// Largest usable fit endpoint: the time of the last unflagged sample before
// the first boundary flag (all samples usable -> last sample time). Throws
// std::runtime_error when even the first sample is flagged.
double usable_t_max(const DispersiveSeries& series);

void write_norm_series_csv(const std::string& path, const DispersiveSeries& series,
                           const std::string& note);

struct FreeProfileCheck {
  double scaled_residual = 0.0;   // t^{3/2} * ||<x>^{-2} (U(-t) - profile)||
  double coeff_crosscheck = 0.0;  // sup |c-profile - F_{-t} g|, pure algebra
  cd c_minus, c_plus;
};

// Checks e^{-itH} P_s f against c_- e^{-it} t^{-1/2} Psi + c_+ e^{it} t^{-1/2}
// sigma1 Psi. The coefficients are read off F_{-t} under the principal branch:
// c_- = (4 pi i)^{-1/2} <sigma3 Psi, g>, c_+ = -(-4 pi i)^{-1/2} <sigma3
// sigma1 Psi, g> with g = P_s f. Requires t >= 5 (asymptotic regime).
FreeProfileCheck free_wave_profile_check(const Grid& g, const MatrixPotential& mp,
                                         const GeneralizedKernel& gk,
                                         const Field2& psi, const Field2& f,
                                         double t, const PropagatorConfig& cfg);

}  // namespace mslab
