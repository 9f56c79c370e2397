#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "phonon/errors.hpp"
#include "phonon/params.hpp"

using namespace phonon;

TEST_CASE("bose_occupation reference points") {
  CHECK(bose_occupation(1.0, 0.0) == 0.0);
  // hbar w / k T = ln 2
  const double omega = 1e9;
  const double temperature = constants::hbar * omega / (constants::k_boltzmann * std::log(2.0));
  CHECK(bose_occupation(omega, temperature) == doctest::Approx(1.0).epsilon(1e-14));
  // 1 MHz at room temperature; mpmath reference 6250985.2408283841
  const double n = bose_occupation(2.0 * std::numbers::pi * 1e6, 300.0);
  CHECK(n == doctest::Approx(6250985.2408283841).epsilon(1e-12));
  const double classical = constants::k_boltzmann * 300.0 / (constants::hbar * 2e6 * std::numbers::pi);
  CHECK(std::abs(n - classical) == doctest::Approx(0.5).epsilon(1e-3));
  // Deep quantum limit underflows cleanly to zero.
  CHECK(bose_occupation(1e20, 1e-3) == 0.0);
  CHECK_THROWS_AS(bose_occupation(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bose_occupation(1.0, -1.0), DomainError);
}

TEST_CASE("bose_occupation is monotone") {
  double previous = 0.0;
  for (double t = 0.01; t < 1000.0; t *= 1.7) {
    const double n = bose_occupation(1e12, t);
    CHECK(n >= previous);
    previous = n;
  }
  previous = bose_occupation(1e9, 1.0);
  for (double w = 2e9; w < 1e14; w *= 1.9) {
    const double n = bose_occupation(w, 1.0);
    CHECK(n <= previous);
    previous = n;
  }
}

TEST_CASE("derive_reduced without coupling") {
  PhysicalParams p;
  p.g0 = 0.0;
  p.kappa = 10.0;
  p.gamma = 1.0;
  p.omega_m = 100.0;
  p.eta = 50.0;
  p.n_th = 3.0;
  const auto r = derive_reduced(p);
  CHECK(r.cooperativity == 0.0);
  CHECK(r.omega_m_eff == 100.0);
  CHECK(r.delta_c == -200.0);
  CHECK(r.n_th == 3.0);
}

TEST_CASE("derive_reduced matches an independent root of the detuning condition") {
  PhysicalParams p;
  p.omega_m = 1e6;
  p.kappa = 1e4;
  p.gamma = 1.0;
  p.g0 = 1e-2;
  p.eta = 1e5;
  p.n_th = 0.0;
  const auto r = derive_reduced(p);

  const double eta2 = p.eta * p.eta;
  auto residual = [&](double nc) {
    const double w = p.omega_m + 2.0 * p.g0 * nc;
    return nc * (4.0 * w * w + 0.25 * p.kappa * p.kappa) - eta2;
  };
  const double nc_ref = oracle::bisect(residual, 0.0, eta2 / (0.25 * p.kappa * p.kappa));
  CHECK(r.n_c == doctest::Approx(nc_ref).epsilon(1e-12));
  const double c_ref = 8.0 * p.g0 * p.g0 * nc_ref / (p.gamma * p.kappa);
  CHECK(r.cooperativity == doctest::Approx(c_ref).epsilon(1e-12));

  // Definitions hold exactly.
  CHECK(r.gamma_opt == 8.0 * r.g * r.g / p.kappa);
  CHECK(r.cooperativity == r.gamma_opt / p.gamma);
  CHECK(r.delta_c == -2.0 * r.omega_m_eff);
  CHECK(std::abs(residual(r.n_c)) / eta2 <= 1e-10);
}

TEST_CASE("derive_reduced: fixed-point residual and eta^2 scaling across a parameter grid") {
  for (double g0 : {1e-3, 1e-1, 1.0}) {
    for (double eta : {1e2, 1e4, 1e5}) {
      PhysicalParams p;
      p.omega_m = 1e6;
      p.kappa = 1e4;
      p.gamma = 1.0;
      p.g0 = g0;
      p.eta = eta;
      p.temperature = 0.0;
      const auto r = derive_reduced(p);
      const double w = r.omega_m_eff;
      CHECK(std::abs(r.n_c * (4.0 * w * w + 0.25 * p.kappa * p.kappa) - eta * eta) / (eta * eta) <= 1e-10);

      if (g0 * r.n_c < 1e-6 * p.omega_m) {
        p.eta = 2.0 * eta;
        const auto doubled = derive_reduced(p);
        CHECK(doubled.cooperativity / r.cooperativity == doctest::Approx(4.0).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("derive_reduced converges in the strongly shifted regime") {
  // g0 n_c comparable to omega_m: the plain map is not a contraction.
  PhysicalParams p;
  p.omega_m = 1.0;
  p.kappa = 0.1;
  p.gamma = 1.0;
  p.g0 = 1.0;
  p.eta = 200.0;
  p.n_th = 1.0;
  const auto r = derive_reduced(p);
  const double w = r.omega_m_eff;
  // |F'| ~ 2 at the root here.
  CHECK(16.0 * w * r.n_c * r.n_c / (p.eta * p.eta) > 1.5);
  CHECK(std::abs(r.n_c * (4.0 * w * w + 0.0025) - 4e4) / 4e4 <= 1e-10);
}

TEST_CASE("PhysicalParams validation") {
  PhysicalParams p;
  p.n_th = 1.0;
  CHECK_NOTHROW(p.validate());
  p.temperature = 1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.n_th.reset();
  p.kappa = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.kappa = 1.0;
  p.g0 = -1.0;
  CHECK_THROWS_AS(derive_reduced(p), DomainError);
}

TEST_CASE("reduced_from_cooperativity is consistent with the definitions") {
  const auto r = reduced_from_cooperativity(3.0, 1.0, 400.0, 1.0, 2e4, 2.0);
  CHECK(r.gamma_opt == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(r.g * r.g == doctest::Approx(3.0 * 400.0 / 8.0).epsilon(1e-15));
  CHECK(r.delta_c == -4e4);
  CHECK(r.g0() == doctest::Approx(r.g / std::sqrt(2.0)));
}
