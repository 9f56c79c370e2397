#include "phonon/params.hpp"

#include <cmath>
#include <sstream>

#include "phonon/errors.hpp"

namespace phonon {

namespace {

constexpr int kMaxFixedPointIterations = 10000;
constexpr double kFixedPointTolerance = 1e-12;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void PhysicalParams::validate() const {
  if (!finite_nonneg(g0) || !finite_nonneg(eta)) {
    throw DomainError("g0 and eta must be finite and non-negative");
  }
  if (!(std::isfinite(kappa) && kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(std::isfinite(gamma) && gamma > 0.0)) throw DomainError("gamma must be positive");
  if (!(std::isfinite(omega_m) && omega_m > 0.0)) throw DomainError("omega_m must be positive");
  if (n_th.has_value() == temperature.has_value()) {
    throw DomainError("exactly one of n_th and temperature must be given");
  }
  if (n_th && !finite_nonneg(*n_th)) throw DomainError("n_th must be non-negative");
  if (temperature && !finite_nonneg(*temperature)) {
    throw DomainError("temperature must be non-negative");
  }
}

double PhysicalParams::thermal_occupation() const {
  if (n_th) return *n_th;
  return bose_occupation(omega_m, temperature.value_or(0.0));
}

double ReducedParams::g0() const { return n_c > 0.0 ? g / std::sqrt(n_c) : 0.0; }

double bose_occupation(double omega_m, double temperature) {
  if (!(omega_m > 0.0)) throw DomainError("bose_occupation: omega_m must be positive");
  if (!(temperature >= 0.0)) throw DomainError("bose_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double ratio = constants::hbar * omega_m / (constants::k_boltzmann * temperature);
  // expm1 overflows to +inf for ratio > ~709, giving exactly 0.
  return 1.0 / std::expm1(ratio);
}

ReducedParams derive_reduced(const PhysicalParams& phys) {
  phys.validate();
  const double eta2 = phys.eta * phys.eta;
  const double quarter_k2 = 0.25 * phys.kappa * phys.kappa;

  auto photon_number = [&](double n) {
    const double shifted = phys.omega_m + 2.0 * phys.g0 * n;
    return eta2 / (4.0 * shifted * shifted + quarter_k2);
  };
  auto slope = [&](double n) {
    const double shifted = phys.omega_m + 2.0 * phys.g0 * n;
    const double denom = 4.0 * shifted * shifted + quarter_k2;
    return -eta2 * 16.0 * phys.g0 * shifted / (denom * denom);
  };

  double n_c = photon_number(0.0);
  int iter = 0;
  bool converged = eta2 == 0.0 || phys.g0 == 0.0;
  while (!converged && iter < kMaxFixedPointIterations) {
    ++iter;
    // Damping 1/(1+|F'|) keeps the update contractive when the map is steep.
    const double damping = 1.0 / (1.0 + std::abs(slope(n_c)));
    const double next = n_c + damping * (photon_number(n_c) - n_c);
    if (!std::isfinite(next) || next < 0.0) break;
    converged = std::abs(next - n_c) <= kFixedPointTolerance * next;
    n_c = next;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "derive_reduced: detuning fixed point did not converge after " << iter
        << " iterations (g0 n_c is not small compared to omega_m)";
    throw FixedPointDiverged(msg.str());
  }

  ReducedParams r;
  r.n_th = phys.thermal_occupation();
  r.n_c = n_c;
  r.g = phys.g0 * std::sqrt(n_c);
  r.omega_m_eff = phys.omega_m + 2.0 * phys.g0 * n_c;
  r.delta_c = -2.0 * r.omega_m_eff;
  r.gamma_opt = 8.0 * r.g * r.g / phys.kappa;
  r.cooperativity = r.gamma_opt / phys.gamma;
  r.kappa = phys.kappa;
  r.gamma = phys.gamma;
  r.iterations = iter;
  return r;
}

double coupling_for_cooperativity(double cooperativity, double kappa, double gamma) {
  if (!(cooperativity >= 0.0) || !(kappa > 0.0) || !(gamma > 0.0)) {
    throw DomainError("coupling_for_cooperativity: need C >= 0, kappa > 0, gamma > 0");
  }
  return std::sqrt(cooperativity * gamma * kappa / 8.0);
}

ReducedParams reduced_from_cooperativity(double cooperativity, double n_th, double kappa,
                                         double gamma, double omega_m_eff, double n_c) {
  if (!(n_th >= 0.0) || !(omega_m_eff > 0.0) || !(n_c >= 0.0)) {
    throw DomainError("reduced_from_cooperativity: need n_th >= 0, omega_m_eff > 0, n_c >= 0");
  }
  ReducedParams r;
  r.cooperativity = cooperativity;
  r.n_th = n_th;
  r.n_c = n_c;
  r.g = coupling_for_cooperativity(cooperativity, kappa, gamma);
  r.omega_m_eff = omega_m_eff;
  r.delta_c = -2.0 * omega_m_eff;
  r.gamma_opt = 8.0 * r.g * r.g / kappa;
  r.kappa = kappa;
  r.gamma = gamma;
  return r;
}

}  // namespace phonon
