#include "phonon/steady_hitemp.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "phonon/errors.hpp"
#include "phonon/specfun.hpp"

namespace phonon {

namespace {

void check_ab(double a, double b) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("moments: a must be >= 0");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("moments: b must be > 0");
}

void check_args(double cooperativity, double n_th) {
  if (!(cooperativity > 0.0) || !std::isfinite(cooperativity)) {
    throw DomainError("cooperativity must be positive and finite");
  }
  if (!(n_th > 0.0) || !std::isfinite(n_th)) {
    throw DomainError("the high-temperature model needs n_th > 0");
  }
}

double log_m0(double a, double b) {
  return std::log(0.5 * std::sqrt(std::numbers::pi / b)) + std::log(erfcx(a / (2.0 * std::sqrt(b))));
}

// r_1..r_count from the backward recurrence started at index `top`.
std::vector<double> backward_ratios(double a, double b, int count, int top) {
  const double n_top = top + 1.0;
  // Seed from n = a r + 2 b r^2, the large-n balance of the recurrence.
  double r = (-a + std::sqrt(a * a + 8.0 * b * n_top)) / (4.0 * b);
  if (!(r > 0.0)) r = n_top / a;
  std::vector<double> ratios(static_cast<std::size_t>(count));
  for (int n = top; n >= 1; --n) {
    r = n / (a + 2.0 * b * r);
    if (n <= count) ratios[n - 1] = r;
  }
  return ratios;
}

MomentTable quadrature_table(double a, double b, int n_max) {
  MomentTable t{a, b, {}};
  t.log_moments.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) t.log_moments.push_back(quartic_moment_quadrature(a, b, n));
  return t;
}

// Forward recursion with a propagated rounding-error bound; empty once the
// bound exceeds `tolerance` relative to any moment.
std::optional<std::vector<double>> forward_moments(double a, double b, int n_max,
                                                   double tolerance) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> m{std::exp(log_m0(a, b))};
  std::vector<double> err{4.0 * eps * m[0]};
  if (n_max >= 1) {
    m.push_back((1.0 - a * m[0]) / (2.0 * b));
    err.push_back((a * err[0] + eps * (1.0 + a * m[0])) / (2.0 * b));
  }
  for (int n = 1; n < n_max; ++n) {
    const double lhs = n * m[n - 1];
    const double rhs = a * m[n];
    m.push_back((lhs - rhs) / (2.0 * b));
    err.push_back((n * err[n - 1] + a * err[n] + eps * (lhs + rhs)) / (2.0 * b));
  }
  for (std::size_t n = 0; n < m.size(); ++n) {
    if (!(m[n] > 0.0) || !std::isfinite(m[n]) || err[n] > tolerance * m[n]) return std::nullopt;
  }
  return m;
}

}  // namespace

double MomentTable::moment(std::size_t n) const { return std::exp(log_moments.at(n)); }

double MomentTable::ratio(std::size_t n) const {
  return std::exp(log_moments.at(n) - log_moments.at(n - 1));
}

MomentTable gaussian_quartic_moments(double a, double b, int n_max) {
  check_ab(a, b);
  if (n_max < 0) throw DomainError("moments: n_max must be >= 0");
  MomentTable t{a, b, {log_m0(a, b)}};
  if (n_max == 0) return t;

  // Forward is exact for a = 0 and loses digits as a grows against sqrt(b);
  // backward converges fast exactly there.
  if (auto m = forward_moments(a, b, n_max, 1e-13)) {
    for (int n = 1; n <= n_max; ++n) t.log_moments.push_back(std::log((*m)[n]));
    return t;
  }

  int top = n_max + 32;
  auto ratios = backward_ratios(a, b, n_max, top);
  bool converged = false;
  for (int attempt = 0; attempt < 8 && !converged; ++attempt) {
    top = 2 * top;
    auto refined = backward_ratios(a, b, n_max, top);
    double change = 0.0;
    for (int n = 0; n < n_max; ++n) {
      change = std::max(change, std::abs(refined[n] - ratios[n]) / refined[n]);
    }
    ratios = std::move(refined);
    converged = change <= 1e-15;
  }
  if (!converged) return quadrature_table(a, b, n_max);

  double log_m = t.log_moments[0];
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) return quadrature_table(a, b, n_max);
    log_m += std::log(r);
    t.log_moments.push_back(log_m);
  }
  return t;
}

MomentTable forward_moment_recursion(double a, double b, int n_max) {
  check_ab(a, b);
  if (n_max < 0) throw DomainError("moments: n_max must be >= 0");
  auto m = forward_moments(a, b, n_max, 1e-8);
  if (!m) throw RecursionUnstable("forward moment recursion lost positivity or precision");
  MomentTable t{a, b, {}};
  for (double v : *m) t.log_moments.push_back(std::log(v));
  return t;
}

double quartic_moment_quadrature(double a, double b, int n) {
  check_ab(a, b);
  if (n < 0) throw DomainError("moments: n must be >= 0");
  const double nd = n;
  const double peak = n > 0 ? (-a + std::sqrt(a * a + 8.0 * b * nd)) / (4.0 * b) : 0.0;
  const double log_peak = (n > 0 ? nd * std::log(peak) : 0.0) - a * peak - b * peak * peak;
  const double curvature = std::sqrt((n > 0 ? nd / (peak * peak) : 0.0) + 2.0 * b);
  const double width = 1.0 / std::max(curvature, n > 0 ? 0.0 : a);

  auto integrand = [=](double s) {
    if (s <= 0.0) return n == 0 ? std::exp(-log_peak) : 0.0;
    return std::exp(nd * std::log(s) - a * s - b * s * s - log_peak);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double lo = std::max(0.0, peak - 40.0 * width);
  double hi = peak + 12.0 * width;
  double total = GK::integrate(integrand, lo, hi, 12, 1e-13);
  for (int i = 0; i < 60; ++i) {
    const double tail = GK::integrate(integrand, hi, hi + (hi - peak), 12, 1e-13);
    total += tail;
    hi += hi - peak;
    if (tail <= 1e-14 * total) break;
  }
  return log_peak + std::log(total);
}

double mean_phonon_hitemp(double cooperativity, double n_th) {
  check_args(cooperativity, n_th);
  const double z = 1.0 / (2.0 * std::sqrt(cooperativity * n_th));
  if (z <= 4.0) {
    return -0.5 / cooperativity +
           std::sqrt(n_th / (std::numbers::pi * cooperativity)) / erfcx(z);
  }
  return gaussian_quartic_moments(1.0 / n_th, cooperativity / n_th, 1).ratio(1);
}

double g2_hitemp(double cooperativity, double n_th) {
  check_args(cooperativity, n_th);
  const auto t = gaussian_quartic_moments(1.0 / n_th, cooperativity / n_th, 2);
  return t.ratio(2) / t.ratio(1);
}

HitempDistribution phonon_distribution_hitemp(double cooperativity, double n_th, int n_max) {
  check_args(cooperativity, n_th);
  const double a = 1.0 / n_th;
  const double b = cooperativity / n_th;
  if (n_max < 0) {
    const auto m = gaussian_quartic_moments(a, b, 2);
    const double mean = m.ratio(1);
    const double var = m.ratio(2) * mean + mean - mean * mean;
    n_max = static_cast<int>(std::ceil(mean + 20.0 * std::sqrt(std::max(var, 0.0)) + 20.0));
  }
  const auto projected = gaussian_quartic_moments(1.0 + a, b, n_max);
  const double log_norm = log_m0(a, b);

  HitempDistribution d;
  d.populations.resize(static_cast<std::size_t>(n_max) + 1);
  detail::CompensatedSum total;
  for (int n = 0; n <= n_max; ++n) {
    d.populations[n] = std::exp(projected.log_moments[n] - log_gamma(n + 1.0) - log_norm);
    total.add(d.populations[n]);
  }
  d.tail_mass = 1.0 - total.value();
  const double sum = total.value();
  for (double& p : d.populations) p /= sum;
  return d;
}

SteadyStateReport hitemp_report(double cooperativity, double n_th, int n_max) {
  SteadyStateReport r;
  r.model = "hitemp";
  r.n_ss = mean_phonon_hitemp(cooperativity, n_th);
  r.g2 = g2_hitemp(cooperativity, n_th);
  auto dist = phonon_distribution_hitemp(cooperativity, n_th, n_max);
  r.populations = std::move(dist.populations);
  r.diagnostics.tail_mass = dist.tail_mass;
  r.regime = Regime::Bunched;
  return r;
}

}  // namespace phonon
