#include "phonon/app/evaluate.hpp"

#include "phonon/app/log.hpp"
#include "phonon/steady_exact.hpp"
#include "phonon/steady_hitemp.hpp"

namespace phonon::app {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 1;
  return 2;
}

std::vector<Point> grid_points(const RunConfig& config) {
  std::vector<Point> points;
  if (config.physical) {
    const auto etas = config.eta_values.empty() ? std::vector<double>{config.physical->eta} : config.eta_values;
    for (double eta : etas) {
      PhysicalParams phys = *config.physical;
      phys.eta = eta;
      const auto r = derive_reduced(phys);
      points.push_back({r.cooperativity, r.n_th, r});
    }
    return points;
  }
  for (double n : config.nth_values) {
    for (double c : config.c_values) points.push_back({c, n, std::nullopt});
  }
  return points;
}

ModelSpec oracle_model(ModelKind kind, const Point& p, const OracleSettings& s) {
  switch (kind) {
    case ModelKind::OracleReduced:
      return ReducedModel{p.cooperativity, p.n_th};
    case ModelKind::OracleRwa:
      if (p.reduced) return RwaModel{p.reduced->g, p.reduced->kappa, p.reduced->gamma, p.n_th};
      return RwaModel{coupling_for_cooperativity(p.cooperativity, s.kappa, s.gamma), s.kappa, s.gamma, p.n_th};
    case ModelKind::OraclePrerwa: {
      const ReducedParams r =
          p.reduced ? *p.reduced
                    : reduced_from_cooperativity(p.cooperativity, p.n_th, s.kappa, s.gamma,
                                                 s.omega_ratio * s.kappa, s.n_c);
      return PreRwaModel{r, r.kappa, r.gamma, p.n_th, s.quadratic_fluctuation};
    }
    default:
      throw ConfigError("model '" + std::string(to_string(kind)) + "' has no Liouvillian");
  }
}

TruncationSpec oracle_truncation(ModelKind kind, const OracleSettings& s) {
  const bool two_mode = kind == ModelKind::OracleRwa || kind == ModelKind::OraclePrerwa;
  TruncationSpec t;
  t.dim_mech = s.dim_mech.value_or(8);
  t.dim_cav = two_mode ? (s.dim_mech ? s.dim_cav : 2) : 1;
  return t;
}

SteadyStateReport evaluate(ModelKind kind, const Point& p, const OracleSettings& s) {
  kind = resolve_model(kind, p.cooperativity, p.n_th);
  switch (kind) {
    case ModelKind::Exact:
      return exact_report(p.cooperativity, p.n_th);
    case ModelKind::Hitemp:
      return hitemp_report(p.cooperativity, p.n_th);
    default: {
      const auto model = oracle_model(kind, p, s);
      const auto trunc = oracle_truncation(kind, s);
      if (s.dim_mech) return solve_model(model, trunc);
      const auto solution = converge_truncation(model, trunc, {s.rel_tol, s.max_hilbert_dim});
      logger().debug("C={} n_th={}: {} solves, dim_mech={} dim_cav={}", p.cooperativity, p.n_th,
                     solution.solves, solution.trunc.dim_mech, solution.trunc.dim_cav);
      return solution.report;
    }
  }
}

Outcome evaluate_safely(ModelKind kind, const Point& p, const OracleSettings& s) {
  Outcome o;
  o.point = p;
  o.model = resolve_model(kind, p.cooperativity, p.n_th);
  try {
    o.report = evaluate(o.model, p, s);
  } catch (const std::exception& e) {
    o.error = e.what();
    o.exit_code = exit_code_for(e);
    logger().warn("C={} n_th={} ({}): {}", p.cooperativity, p.n_th, to_string(o.model), o.error);
  }
  return o;
}

std::vector<Outcome> evaluate_all(ModelKind kind, const std::vector<Point>& points,
                                  const OracleSettings& settings, int jobs) {
  std::vector<Outcome> out(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) { out[i] = evaluate_safely(kind, points[i], settings); });
  return out;
}

}  // namespace phonon::app
