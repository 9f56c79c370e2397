#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace phonon {

/// Non-negative quantity stored as log-magnitude and sign (0 or +1 here).
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  static SignedLog from_log(double log_abs) { return {log_abs, 1}; }
};

/// S_j(nu, x) = sum_k w_j(k) x^k / Gamma(nu + k) with w0 = 1, w1 = k, w2 = k(k-1).
struct SeriesSums {
  SignedLog s0, s1, s2;
  /// S_j = exp(log_scale) * w_j. Ratios of S_j should be taken from w_j:
  /// log_scale can reach 1e11, where its rounding swamps log-space cancellation.
  double log_scale = 0.0;
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
  std::int64_t terms_used = 0;
  bool converged = false;
};

/// ln Gamma(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Scaled complementary error function exp(x^2) erfc(x), x >= 0.
double erfcx(double x);

/// Reciprocal-gamma power series S0, S1, S2 (see SeriesSums).
///
/// Terms are generated outward from the peak index k* = ceil(x - nu) by the
/// ratio t_{k+1}/t_k = x/(nu+k), normalised so the peak term is 1, and summed
/// with Neumaier compensation. Summation stops once a term past the peak is
/// below 1e-18 of each running sum. Throws NotConverged past 1e7 terms.
SeriesSums recip_gamma_series(double nu, double x);

namespace detail {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sums of a unimodal positive series relative to its peak term.
struct PeakedSums {
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;  ///< sum of t, k t, k(k-1) t with t_peak = 1
  std::int64_t terms = 0;
};

inline constexpr double kSeriesTolerance = 1e-18;
inline constexpr std::int64_t kSeriesTermCap = 10'000'000;

/// Sum t_k for k >= first, where ratio(k) = t_{k+1}/t_k and t is maximal at
/// `peak`. Throws NotConverged when the term cap is reached.
template <class Ratio>
PeakedSums sum_from_peak(std::int64_t first, std::int64_t peak, Ratio&& ratio);

}  // namespace detail
}  // namespace phonon

#include "phonon/detail/specfun_impl.hpp"
