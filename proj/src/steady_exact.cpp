#include "phonon/steady_exact.hpp"

#include <algorithm>
#include <cmath>

#include "phonon/errors.hpp"
#include "phonon/specfun.hpp"

namespace phonon {

namespace {

void check_args(double cooperativity, double n_th) {
  if (!(cooperativity > 0.0) || !std::isfinite(cooperativity)) {
    throw DomainError("cooperativity must be positive and finite");
  }
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
    throw DomainError("n_th must be non-negative and finite");
  }
}

struct SeriesArgs {
  double nu;
  double x;
};

SeriesArgs series_args(double cooperativity, double n_th) {
  return {(1.0 + 2.0 * n_th) / cooperativity, 2.0 * n_th / cooperativity};
}

std::vector<double> vacuum(int m_max) {
  std::vector<double> p(static_cast<std::size_t>(m_max) + 1, 0.0);
  p[0] = 1.0;
  return p;
}

bool near_coherent_point(double cooperativity, double n_th) {
  const double point = 1.0 + 2.0 * n_th;
  return std::abs(cooperativity - point) <= kCoherentSwitch * point;
}

std::vector<double> poisson(double mean, int m_max) {
  std::vector<double> p(static_cast<std::size_t>(m_max) + 1);
  const double log_mean = std::log(mean);
  for (int m = 0; m <= m_max; ++m) {
    p[m] = std::exp(m * log_mean - mean - log_gamma(m + 1.0));
  }
  return p;
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Bunched: return "Bunched";
    case Regime::Coherent: return "Coherent";
    case Regime::Antibunched: return "Antibunched";
    case Regime::Vacuum: return "Vacuum";
  }
  return "Unknown";
}

double SteadyStateReport::fano_factor() const {
  detail::CompensatedSum mean, second;
  for (std::size_t n = 0; n < populations.size(); ++n) {
    const double nd = static_cast<double>(n);
    mean.add(nd * populations[n]);
    second.add(nd * nd * populations[n]);
  }
  const double m = mean.value();
  return (second.value() - m * m) / m;
}

double mean_phonon_exact(double cooperativity, double n_th) {
  check_args(cooperativity, n_th);
  if (n_th == 0.0) return 0.0;
  const auto [nu, x] = series_args(cooperativity, n_th);
  const auto s = recip_gamma_series(nu, x);
  return 0.5 * s.w1 / s.w0;
}

std::optional<double> g2_exact(double cooperativity, double n_th) {
  check_args(cooperativity, n_th);
  if (n_th == 0.0) return std::nullopt;
  const auto [nu, x] = series_args(cooperativity, n_th);
  const auto s = recip_gamma_series(nu, x);
  const double n_ss = 0.5 * s.w1 / s.w0;
  if (n_ss < kG2DefinabilityThreshold) return std::nullopt;
  return s.w2 / s.w1 * (s.w0 / s.w1);
}

std::vector<double> phonon_populations_series(double cooperativity, double n_th, int m_max) {
  check_args(cooperativity, n_th);
  if (m_max < 0) throw DomainError("m_max must be >= 0");
  if (n_th == 0.0) return vacuum(m_max);
  if (near_coherent_point(cooperativity, n_th)) {
    throw DegenerateBranch("population series is ill-conditioned at C = 1 + 2 n_th");
  }
  const auto [nu, x] = series_args(cooperativity, n_th);
  const double y = 0.5 * x;
  const double log_y = std::log(y);
  const double log_norm = recip_gamma_series(nu, x).s0.log_abs;

  std::vector<double> p(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    const double md = m;
    auto ratio = [=](std::int64_t j) {
      const double jd = static_cast<double>(j);
      return (md + jd + 1.0) / (jd + 1.0) * y / (nu + md + jd);
    };
    // Terms grow while (j+1)(nu+m+j) <= (m+j+1) y; take the positive root.
    const double b = nu + md + 1.0 - y;
    const double c = nu + md - (md + 1.0) * y;
    const double disc = b * b - 4.0 * c;
    std::int64_t peak = 0;
    if (c < 0.0 && disc > 0.0) {
      peak = static_cast<std::int64_t>(std::floor(0.5 * (-b + std::sqrt(disc)))) + 1;
    }
    while (peak > 0 && ratio(peak - 1) < 1.0) --peak;
    while (ratio(peak) > 1.0) ++peak;

    const double pk = static_cast<double>(peak);
    const double log_peak = log_gamma(md + pk + 1.0) - log_gamma(pk + 1.0) -
                            log_gamma(md + 1.0) + (md + pk) * log_y - log_gamma(nu + md + pk);
    const auto sums = detail::sum_from_peak(0, peak, ratio);
    p[m] = std::exp(log_peak + std::log(sums.w0) - log_norm);
  }
  return p;
}

std::vector<double> phonon_populations_exact(double cooperativity, double n_th, int m_max) {
  check_args(cooperativity, n_th);
  if (m_max < 0) throw DomainError("m_max must be >= 0");
  if (n_th == 0.0) return vacuum(m_max);
  if (near_coherent_point(cooperativity, n_th)) {
    return poisson(n_th / cooperativity, m_max);
  }
  return phonon_populations_series(cooperativity, n_th, m_max);
}

Regime classify_regime(double cooperativity, double n_th) {
  check_args(cooperativity, n_th);
  if (n_th == 0.0) return Regime::Vacuum;
  const double point = 2.0 * n_th + 1.0;
  if (std::abs(cooperativity - point) <= 1e-12 * point) return Regime::Coherent;
  return cooperativity > point ? Regime::Antibunched : Regime::Bunched;
}

int default_population_cutoff(double n_ss) {
  return std::max(30, static_cast<int>(std::ceil(n_ss + 10.0 * std::sqrt(n_ss + 1.0))));
}

SteadyStateReport exact_report(double cooperativity, double n_th, int m_max) {
  check_args(cooperativity, n_th);
  SteadyStateReport r;
  r.model = "exact";
  if (n_th > 0.0) {
    const auto [nu, x] = series_args(cooperativity, n_th);
    const auto s = recip_gamma_series(nu, x);
    r.n_ss = 0.5 * s.w1 / s.w0;
    if (r.n_ss >= kG2DefinabilityThreshold) r.g2 = s.w2 / s.w1 * (s.w0 / s.w1);
    r.diagnostics.series_terms = s.terms_used;
  }
  const auto tail_of = [](const std::vector<double>& p) {
    detail::CompensatedSum total;
    for (double v : p) total.add(v);
    return 1.0 - total.value();
  };
  if (m_max >= 0) {
    r.populations = phonon_populations_exact(cooperativity, n_th, m_max);
  } else {
    // Bunched states have heavier tails than the default cutoff assumes. The
    // mass in the upper half measures truncation; 1 - sum would also carry
    // normalisation rounding, which grows with x.
    const auto upper_half = [](const std::vector<double>& p) {
      detail::CompensatedSum s;
      for (std::size_t m = p.size() / 2; m < p.size(); ++m) s.add(p[m]);
      return s.value();
    };
    int cutoff = default_population_cutoff(r.n_ss);
    r.populations = phonon_populations_exact(cooperativity, n_th, cutoff);
    while (upper_half(r.populations) > kPopulationTailTarget && cutoff < kMaxPopulationCutoff) {
      cutoff = std::min(2 * cutoff, kMaxPopulationCutoff);
      r.populations = phonon_populations_exact(cooperativity, n_th, cutoff);
    }
  }
  r.diagnostics.tail_mass = tail_of(r.populations);
  r.regime = classify_regime(cooperativity, n_th);
  return r;
}

}  // namespace phonon
