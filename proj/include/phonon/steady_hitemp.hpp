#pragma once

#include <vector>

#include "phonon/report.hpp"

namespace phonon {

/// Moments M_n = int_0^inf s^n exp(-a s - b s^2) ds, n = 0..n_max, in log form.
struct MomentTable {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> log_moments;

  double moment(std::size_t n) const;
  /// M_n / M_{n-1}, n >= 1.
  double ratio(std::size_t n) const;
};

/// Moment table from M0 = (1/2) sqrt(pi/b) erfcx(a / (2 sqrt b)) and the
/// integration-by-parts identity n M_{n-1} = a M_n + 2 b M_{n+1}.
///
/// The forward recursion is used while its propagated rounding bound stays
/// below 1e-13 (it is exact at a = 0). Otherwise the ratios r_n = M_n/M_{n-1}
/// come from the all-positive backward recurrence r_n = n / (a + 2 b r_{n+1}),
/// started ever higher until they settle. Quadrature is the last resort.
MomentTable gaussian_quartic_moments(double a, double b, int n_max);

/// Plain forward recursion M_{n+1} = (n M_{n-1} - a M_n) / (2b) from the
/// closed-form M0. Throws RecursionUnstable once the propagated rounding
/// error exceeds 1e-8 relative or a moment loses positivity; this happens
/// quickly when b << a^2.
MomentTable forward_moment_recursion(double a, double b, int n_max);

/// ln M_n by adaptive Gauss-Kronrod quadrature of the defining integral.
double quartic_moment_quadrature(double a, double b, int n);

/// Glauber-Sudarshan steady state exp(-|mu|^2/n_th - C |mu|^4/n_th) in the
/// thermal-diffusion-dominated limit n_th >> C, with s = |mu|^2:
/// a = 1/n_th, b = C/n_th. Valid only as an approximation.

/// n_ss = -1/(2C) + sqrt(n_th/(pi C)) / erfcx(1/(2 sqrt(C n_th))). For
/// 1/(2 sqrt(C n_th)) > 4 the two terms cancel, so M1/M0 is returned instead.
double mean_phonon_hitemp(double cooperativity, double n_th);

/// g2 = M2 M0 / M1^2, in [pi/2, 2].
double g2_hitemp(double cooperativity, double n_th);

/// Fock projection P(n) = M_n(1 + 1/n_th, C/n_th) / (n! M0(1/n_th, C/n_th)),
/// renormalised over 0..n_max; the pre-normalisation deficit is returned as
/// tail mass. n_max < 0 picks a cutoff 20 standard deviations past the mean.
struct HitempDistribution {
  std::vector<double> populations;
  double tail_mass = 0.0;
};
HitempDistribution phonon_distribution_hitemp(double cooperativity, double n_th, int n_max = -1);

SteadyStateReport hitemp_report(double cooperativity, double n_th, int n_max = -1);

}  // namespace phonon
