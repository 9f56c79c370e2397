#pragma once

#include <string>

#include "phonon/errors.hpp"

namespace phonon::detail {

template <class Ratio>
PeakedSums sum_from_peak(std::int64_t first, std::int64_t peak, Ratio&& ratio) {
  CompensatedSum s0, s1, s2;
  std::int64_t terms = 0;
  auto accumulate = [&](std::int64_t k, double t) {
    const double kd = static_cast<double>(k);
    s0.add(t);
    s1.add(kd * t);
    s2.add(kd * (kd - 1.0) * t);
    ++terms;
  };

  accumulate(peak, 1.0);

  // Below the peak terms shrink monotonically, as do their weights.
  double t = 1.0;
  for (std::int64_t k = peak; k > first; --k) {
    t /= ratio(k - 1);
    if (!(t > kSeriesTolerance * s0.value())) break;
    accumulate(k - 1, t);
    if (terms >= kSeriesTermCap) {
      throw NotConverged("series term cap reached below the peak");
    }
  }

  t = 1.0;
  for (std::int64_t k = peak;; ++k) {
    t *= ratio(k);
    const double kn = static_cast<double>(k + 1);
    if (t <= kSeriesTolerance * s0.value() && kn * t <= kSeriesTolerance * s1.value() &&
        kn * (kn - 1.0) * t <= kSeriesTolerance * s2.value()) {
      break;
    }
    accumulate(k + 1, t);
    if (terms >= kSeriesTermCap) {
      throw NotConverged("series term cap reached (" + std::to_string(kSeriesTermCap) +
                         " terms); argument too large for direct summation");
    }
  }
  return {s0.value(), s1.value(), s2.value(), terms};
}

}  // namespace phonon::detail
