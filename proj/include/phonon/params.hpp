#pragma once

#include <optional>

namespace phonon {

/// CODATA-2018 values, SI units.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
}  // namespace constants

/// Laboratory-frame parameters. All rates and frequencies are angular and
/// share one (arbitrary) unit; only the temperature route needs SI (rad/s).
/// Exactly one of n_th / temperature must be set.
struct PhysicalParams {
  double g0 = 0.0;       ///< quadratic single-photon coupling
  double kappa = 1.0;    ///< cavity energy decay rate
  double gamma = 1.0;    ///< mechanical decay rate
  double omega_m = 1.0;  ///< bare mechanical frequency
  double eta = 0.0;      ///< pump rate magnitude (taken real, positive)
  std::optional<double> n_th;
  std::optional<double> temperature;  ///< kelvin; omega_m must then be in rad/s

  /// Throws DomainError when an invariant is violated.
  void validate() const;
  /// Thermal occupation, from n_th directly or via bose_occupation.
  double thermal_occupation() const;
};

/// Reduced two-number model plus the derived quantities that produced it.
struct ReducedParams {
  double cooperativity = 0.0;  ///< C = Gamma_opt / gamma
  double n_th = 0.0;
  double n_c = 0.0;          ///< intracavity photon number
  double g = 0.0;            ///< g0 * sqrt(n_c)
  double omega_m_eff = 0.0;  ///< omega_m + 2 g0 n_c
  double gamma_opt = 0.0;    ///< 8 g^2 / kappa
  double delta_c = 0.0;      ///< -2 omega_m_eff
  double kappa = 0.0;
  double gamma = 0.0;
  int iterations = 0;

  /// g0 recovered from g and n_c (0 when n_c == 0).
  double g0() const;
};

/// Bose-Einstein occupation [exp(hbar omega / k_B T) - 1]^-1; exact 0 at T = 0.
double bose_occupation(double omega_m, double temperature);

/// Solve the self-consistent detuning condition and map to (C, n_th).
ReducedParams derive_reduced(const PhysicalParams& phys);

/// Build a consistent ReducedParams from the reduced coordinates directly:
/// g from C via C = 8 g^2 / (gamma kappa), and the frequency shift from n_c.
ReducedParams reduced_from_cooperativity(double cooperativity, double n_th, double kappa,
                                         double gamma, double omega_m_eff, double n_c);

/// Coupling g that realises a given cooperativity, g = sqrt(C gamma kappa / 8).
double coupling_for_cooperativity(double cooperativity, double kappa, double gamma);

}  // namespace phonon
