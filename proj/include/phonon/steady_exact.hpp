#pragma once

#include <optional>
#include <vector>

#include "phonon/report.hpp"

namespace phonon {

/// Exact steady state of the two-phonon-damped, thermally driven oscillator,
///   d rho/d tau = (C/2) D[b^2] rho + (n/2) D[b^+] rho + ((n+1)/2) D[b] rho,
/// from the closed-form moment series in nu = (1 + 2 n_th)/C and x = 2 n_th / C:
///   n_ss = S1 / (2 S0),   g2 = S2 S0 / S1^2.
/// All functions require C > 0, n_th >= 0 and throw DomainError otherwise.

double mean_phonon_exact(double cooperativity, double n_th);

/// Empty when n_ss < kG2DefinabilityThreshold (e.g. n_th = 0, where the
/// ratio is 0/0; the limiting value there is 0).
std::optional<double> g2_exact(double cooperativity, double n_th);

/// Relative distance from C = 1 + 2 n_th below which the populations switch
/// to the Poisson closed form.
inline constexpr double kCoherentSwitch = 1e-9;

/// Fock populations P(0..m_max).
///
///   P(m) = sum_{j>=0} binom(m+j, j) y^(m+j) / Gamma(nu+m+j) / S0(nu, 2y),  y = n_th/C,
/// each inner sum peak-anchored in log space. At the coherent point this is
/// the Poisson distribution with mean n_th/(1+2 n_th), used directly within
/// kCoherentSwitch. n_th = 0 gives the vacuum.
std::vector<double> phonon_populations_exact(double cooperativity, double n_th, int m_max);

/// The raw series branch. Throws DegenerateBranch within kCoherentSwitch of
/// the coherent point.
std::vector<double> phonon_populations_series(double cooperativity, double n_th, int m_max);

/// Antibunched iff C > 2 n_th + 1; Coherent within 1e-12 relative.
Regime classify_regime(double cooperativity, double n_th);

/// max(30, ceil(n_ss + 10 sqrt(n_ss + 1))).
int default_population_cutoff(double n_ss);

inline constexpr double kPopulationTailTarget = 1e-10;
inline constexpr int kMaxPopulationCutoff = 1 << 20;

/// Everything above in one report. m_max < 0 starts at default_population_cutoff
/// and doubles it while the upper half of the levels holds more than
/// kPopulationTailTarget.
SteadyStateReport exact_report(double cooperativity, double n_th, int m_max = -1);

}  // namespace phonon
