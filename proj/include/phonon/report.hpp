#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phonon {

enum class Regime { Bunched, Coherent, Antibunched, Vacuum };

std::string_view to_string(Regime r);

/// Mean phonon numbers below this make g2 an indeterminate ratio.
inline constexpr double kG2DefinabilityThreshold = 1e-12;

struct Diagnostics {
  std::int64_t series_terms = 0;
  double tail_mass = 0.0;  ///< 1 - sum of reported populations
  // Lindblad oracle only.
  int dim_mech = 0;
  int dim_cav = 0;
  double residual = 0.0;        ///< ||L vec(rho)|| / (||L||_F ||vec(rho)||)
  double top_population = 0.0;  ///< mechanical population in the top two levels
  std::optional<double> cavity_occupation;
  std::optional<double> min_eigenvalue;
};

struct SteadyStateReport {
  double n_ss = 0.0;
  std::optional<double> g2;  ///< absent when n_ss < kG2DefinabilityThreshold
  std::vector<double> populations;
  Regime regime = Regime::Vacuum;
  std::string model;
  Diagnostics diagnostics;

  /// Variance over mean of the reported populations.
  double fano_factor() const;
};

}  // namespace phonon
