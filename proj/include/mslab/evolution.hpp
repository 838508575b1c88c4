// Time propagation U(t) = e^{itH} f (the ODE dU/dt = iHU), the rank-two
// threshold correction F_t, its free counterpart F_t^0, and the Fresnel
// cutoff integral G_t(r) with its stationary-phase asymptote.
//
// Propagators:
//   split-step Strang   e^{i dt H0/2} e^{i dt V} e^{i dt H0/2} per step; the
//                       potential step is closed-form because V^2 = (V1^2 -
//                       V2^2) I: e^{i dt V} = cos(dt w) I + i dt sinc(dt w) V,
//                       w = sqrt(V1^2 - V2^2)
//   crank-nicolson      dense (I - i dt/2 H)^{-1} (I + i dt/2 H), n <= 1024
//   dense-exponential   exp(i t H) of the materialized 2n x 2n matrix in one
//                       shot, n <= 512 (oracle for the fast path)
//
// Branch convention, used everywhere a square root of +-i t appears:
//   sqrt(-4 pi i t) = sqrt(4 pi |t|) e^{-i sgn(t) pi/4}   (principal branch)
//   sqrt(+4 pi i t) = sqrt(4 pi |t|) e^{+i sgn(t) pi/4}
//
//   F_t f = e^{it mu} (-4 pi i t)^{-1/2} <sigma3 Psi, f> Psi
//         - e^{-it mu} (4 pi i t)^{-1/2} <sigma3 sigma1 Psi, f> sigma1 Psi
//   F_t^0 (plus side) acts on the first component only:
//         e^{it mu} (-4 pi i t)^{-1/2} e^{-i x^2/4t} * integral e^{-i y^2/4t} f1
//   minus side is sigma1 F_{-t}^0 sigma1.
//
//   G_t(r) = integral e^{i t z^2 + i z r} chi(z^2) dz with chi a fixed C-inf
//   bump cutoff (1 on [-1,1], 0 outside [-2,2]); asymptote
//   sqrt(pi) (-i t)^{-1/2} e^{-i r^2 / 4t}.
#pragma once
#include <vector>

#include "mslab/grid.hpp"
#include "mslab/operators.hpp"

namespace mslab {

enum class PropagatorMethod { SplitStepStrang, CrankNicolson, DenseExponential };

struct PropagatorConfig {
  PropagatorMethod method = PropagatorMethod::SplitStepStrang;
  double dt = 0.01;  // upper bound on the step actually taken
};

// U(t_to) from U(t_from) = f. mp == nullptr is the free operator (exact
// Fourier multiplier, no stepping). If wrap_flag is given it is set when the
// outermost 5% of nodes carry more than 1e-4 of the peak amplitude at the
// END of the interval (periodic wrap-around contaminating the line problem).
// Throws std::invalid_argument for dt <= 0 or dt > 0.01 with the split-step
// method, std::domain_error when a dense method exceeds its size guard.
Field2 propagate(const Grid& g, const MatrixPotential* mp, const Field2& f,
                 double t_from, double t_to, const PropagatorConfig& cfg,
                 bool* wrap_flag = nullptr);

// Exact free evolution e^{itH0} via the Fourier multiplier, no stepping.
Field2 free_propagate(const Grid& g, double mu, const Field2& f, double t);

bool wrap_around_flag(const Grid& g, const Field2& f);

// Sup norms over the inner 90% of nodes (the boundary band is excluded by
// construction; the wrap flag reports on the excluded band).
double inner_sup(const Grid& g, const Field2& f);
double inner_weighted_sup(const Grid& g, const Field2& f, double sigma);

// Rank-two threshold correction built on the normalized resonance pair psi.
// Requires |t| >= 1 (the kernel is a |t| -> inf asymptotic object).
Field2 ft_apply(const Grid& g, const Field2& psi, const Field2& f, double t,
                double mu = 1.0);

// The two inner products <sigma3 psi, f>, <sigma3 sigma1 psi, f> that F_t is
// built from; exposed so decay experiments can cross-check coefficients.
std::pair<cd, cd> ft_pairings(const Grid& g, const Field2& psi, const Field2& f);

enum class FreeSide { Plus, Minus };

// F_t^0 applied to f (plus side reads f1 and writes component 1; minus side
// is the sigma1 conjugate at -t). Requires |t| >= 1.
Field2 ft0_apply(const Grid& g, double mu, const Field2& f, double t, FreeSide side);

// Spectral half-space projections of the FREE operator only: P_s^+ f = (f1, 0),
// P_s^- f = (0, f2).
Field2 ps_plus_free(const Field2& f);
Field2 ps_minus_free(const Field2& f);

// Smooth even cutoff: 1 for |v| <= 1, 0 for |v| >= 2, exp(-1/u) blend between.
double fresnel_cutoff(double v);

// G_t(r) by trapezoid sum with step h = (20 max(|t|,|r|,1) refine)^{-1} over
// the cutoff support. chi_scale rescales the cutoff argument: chi(z^2/scale).
// Throws std::runtime_error when refine and 2*refine disagree by > 1e-8.
cd gt_integral(double t, double r, double chi_scale = 1.0, int refine = 1);

cd gt_asymptote(double t, double r);

// |G_t(r) - asymptote| * |t|^{3/2} / <r>, the constant in the one-sided bound.
double gt_asymptotic_error(double t, double r);

// |G_t(r1+r2) - sqrt(pi)(-it)^{-1/2} e^{-i r1^2/4t} e^{-i r2^2/4t}| * |t|^{3/2}
// / (<r1><r2>), the two-sided (split-phase) constant.
double gt_two_sided_error(double t, double r1, double r2);

}  // namespace mslab
