#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "phonon/errors.hpp"
#include "phonon/specfun.hpp"

using namespace phonon;

TEST_CASE("log_gamma identities and reference values") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0));
  CHECK(std::abs(log_gamma(2.0)) < 1e-16);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-15));

  // mpmath, 40 digits
  const std::pair<double, double> refs[] = {
      {1e-3, 6.907178885383853682512},
      {1.5, -0.1207822376352452223455},
      {2.5, 0.2846828704729191596325},
      {10.5, 13.94062521940376363316},
      {1000.5, 5908.674175848677488684},
      {1e6, 12815504.56914761165998},
  };
  for (const auto& [x, ref] : refs) {
    CAPTURE(x);
    CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::abs(ref));
  }
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("erfcx against 40-digit references") {
  const std::pair<double, double> refs[] = {
      {0.0, 1.0},
      {0.5, 0.6156903441929258748708},
      {1.0, 0.4275835761558070044108},
      {2.0, 0.2553956763105057438651},
      {5.0, 0.1107046377330686263702},
      {10.0, 0.05614099274382258585752},
      {25.9, 0.02176718115073821256188},
      {26.0, 0.02168358485056290661617},
      {30.0, 0.01879588886141675149713},
      {100.0, 0.005641613782989432903556},
      {1000.0, 0.0005641893014533876541997},
  };
  for (const auto& [x, ref] : refs) {
    CAPTURE(x);
    CHECK(std::abs(erfcx(x) - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("erfcx(1) against quadrature of the erfc integral") {
  const long double reference = std::exp(1.0L) * oracle::erfc_quadrature(1.0L);
  CHECK(std::abs(erfcx(1.0) - static_cast<double>(reference)) <= 1e-12 * erfcx(1.0));
}

TEST_CASE("erfcx asymptotics") {
  for (double x : {1e2, 1e4, 1e8, 1e150}) {
    CHECK(erfcx(x) * x * std::sqrt(std::numbers::pi) == doctest::Approx(1.0).epsilon(1.0 / (x * x) + 1e-15));
  }
  CHECK(erfcx(std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(erfcx(-1.0), DomainError);
}

TEST_CASE("recip_gamma_series collapses to exponentials at nu = 1") {
  const auto s = recip_gamma_series(1.0, 2.0);
  CHECK(s.converged);
  CHECK(s.s0.value() == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(s.s1.value() == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-14));
  CHECK(s.s2.value() == doctest::Approx(4.0 * std::exp(2.0)).epsilon(1e-14));

  for (double x : {0.01, 0.7, 3.0, 17.0, 55.5, 100.0}) {
    CAPTURE(x);
    const auto t = recip_gamma_series(1.0, x);
    CHECK(std::abs(t.s0.log_abs - x) <= 1e-12 * std::max(1.0, x));
    CHECK(std::abs(t.s1.log_abs - (std::log(x) + x)) <= 1e-12 * std::max(1.0, x));
    CHECK(std::abs(t.s2.log_abs - (2.0 * std::log(x) + x)) <= 1e-12 * std::max(1.0, x));
  }
}

TEST_CASE("recip_gamma_series at x = 0 keeps only k = 0") {
  const auto s = recip_gamma_series(2.5, 0.0);
  CHECK(s.s0.log_abs == doctest::Approx(-log_gamma(2.5)));
  CHECK(s.s1.sign == 0);
  CHECK(s.s2.sign == 0);
  CHECK(s.s1.value() == 0.0);
  CHECK(s.terms_used >= 1);
}

TEST_CASE("recip_gamma_series against a 50-digit direct summation") {
  const auto s = recip_gamma_series(0.3, 0.2);
  const auto ref = oracle::recip_gamma_sums(0.3, 0.2, 50);
  CHECK(s.s0.value() == doctest::Approx(ref.s0).epsilon(1e-14));
  CHECK(s.s1.value() == doctest::Approx(ref.s1).epsilon(1e-14));
  CHECK(s.s2.value() == doctest::Approx(ref.s2).epsilon(1e-14));
  CHECK(ref.s0 == doctest::Approx(0.5946).epsilon(1e-4));
  CHECK(ref.s1 == doctest::Approx(0.3011).epsilon(1e-4));

  for (auto [nu, x] : {std::pair{0.05, 3.0}, {2.7, 9.0}, {11.0, 40.0}, {0.8, 60.0}}) {
    CAPTURE(nu);
    CAPTURE(x);
    const auto got = recip_gamma_series(nu, x);
    const auto want = oracle::recip_gamma_sums(nu, x, 400);
    CHECK(got.s0.value() == doctest::Approx(want.s0).epsilon(1e-13));
    CHECK(got.s1.value() == doctest::Approx(want.s1).epsilon(1e-13));
    CHECK(got.s2.value() == doctest::Approx(want.s2).epsilon(1e-13));
  }
}

TEST_CASE("recip_gamma_series properties on a random grid") {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> log_nu(std::log(0.01), std::log(1e3));
  std::uniform_real_distribution<double> log_x(std::log(1e-3), std::log(2e4));
  for (int i = 0; i < 300; ++i) {
    const double nu = std::exp(log_nu(rng));
    const double x = std::exp(log_x(rng));
    CAPTURE(nu);
    CAPTURE(x);
    const auto s = recip_gamma_series(nu, x);
    REQUIRE(s.s0.sign == 1);
    REQUIRE(s.s1.sign == 1);
    // Var(k) >= 0 under weights x^k / Gamma(nu+k): S1^2 <= S0 (S2 + S1).
    const double lhs = 2.0 * s.s1.log_abs;
    const double rhs = s.s0.log_abs + s.s1.log_abs + std::log1p(std::exp(s.s2.log_abs - s.s1.log_abs));
    CHECK(lhs <= rhs + 1e-12 * std::abs(rhs));
    // Contiguity S1(nu, x) = x [S0(nu + 1, x) + S1(nu + 1, x)] from k = (j + 1).
    const auto shifted = recip_gamma_series(nu + 1.0, x);
    const double log_shifted =
        std::log(x) + shifted.s0.log_abs + std::log1p(std::exp(shifted.s1.log_abs - shifted.s0.log_abs));
    // A log-magnitude near L carries an absolute granularity of ~L eps.
    const double granularity = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(s.s1.log_abs);
    CHECK(std::abs(std::exp(s.s1.log_abs - log_shifted) - 1.0) <= 1e-12 + granularity);
  }
}

TEST_CASE("recip_gamma_series handles very large arguments in log space") {
  // Peak term ~ e^{x}; raw values overflow double long before this.
  const auto s = recip_gamma_series(1.0, 2e6);
  CHECK(s.s0.log_abs == doctest::Approx(2e6).epsilon(1e-12));
  CHECK(std::exp(s.s1.log_abs - s.s0.log_abs) == doctest::Approx(2e6).epsilon(1e-10));
  CHECK_THROWS_AS(recip_gamma_series(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(recip_gamma_series(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(recip_gamma_series(1.0, 1e12), NotConverged);
}
