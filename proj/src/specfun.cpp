#include "phonon/specfun.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "phonon/errors.hpp"

namespace phonon {

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: argument must be > 0");
  return boost::math::lgamma(x);
}

double erfcx(double x) {
  if (!(x >= 0.0)) throw DomainError("erfcx: argument must be >= 0");
  if (std::isinf(x)) return 0.0;
  if (x < 26.0) {
    // x*x carries a rounding error of up to x^2 eps; fma recovers it exactly.
    const double x2 = x * x;
    const double x2_err = std::fma(x, x, -x2);
    return std::exp(x2) * std::erfc(x) * (1.0 + x2_err);
  }
  // Laplace continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))).
  double f = x;
  for (int n = 60; n >= 1; --n) f = x + 0.5 * n / f;
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

SeriesSums recip_gamma_series(double nu, double x) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("recip_gamma_series: nu must be > 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("recip_gamma_series: x must be >= 0");

  const double peak_real = x > nu ? std::ceil(x - nu) : 0.0;
  if (peak_real >= static_cast<double>(detail::kSeriesTermCap)) {
    throw NotConverged("recip_gamma_series: peak index beyond the term cap");
  }
  const auto peak = static_cast<std::int64_t>(peak_real);
  const double log_peak = (peak > 0 ? peak_real * std::log(x) : 0.0) - log_gamma(nu + peak_real);

  const auto sums = detail::sum_from_peak(0, peak, [nu, x](std::int64_t k) {
    return x / (nu + static_cast<double>(k));
  });

  auto to_log = [log_peak](double w) {
    return w > 0.0 ? SignedLog::from_log(log_peak + std::log(w)) : SignedLog{};
  };
  SeriesSums out;
  out.s0 = to_log(sums.w0);
  out.s1 = to_log(sums.w1);
  out.s2 = to_log(sums.w2);
  out.log_scale = log_peak;
  out.w0 = sums.w0;
  out.w1 = sums.w1;
  out.w2 = sums.w2;
  out.terms_used = sums.terms;
  out.converged = true;
  return out;
}

}  // namespace phonon
