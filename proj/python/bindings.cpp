#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phonon/app/config.hpp"
#include "phonon/app/evaluate.hpp"
#include "phonon/app/figures.hpp"
#include "phonon/app/output.hpp"
#include "phonon/app/validate.hpp"
#include "phonon/errors.hpp"
#include "phonon/params.hpp"
#include "phonon/steady_exact.hpp"
#include "phonon/steady_hitemp.hpp"

namespace py = pybind11;
namespace app = phonon::app;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict table_columns(const app::Table& t) {
  const auto rows = app::to_json(t);
  py::dict out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    py::list values;
    for (const auto& row : rows) values.append(to_python(row.at(t.columns[c])));
    out[py::str(t.columns[c])] = values;
  }
  return out;
}

app::OracleSettings oracle_settings(std::optional<int> trunc, int dim_cav, double kappa, double gamma,
                                    double omega_ratio, double n_c, bool quadratic_fluctuation, int max_dim) {
  app::OracleSettings s;
  s.dim_mech = trunc;
  s.dim_cav = dim_cav;
  s.kappa = kappa;
  s.gamma = gamma;
  s.omega_ratio = omega_ratio;
  s.n_c = n_c;
  s.quadratic_fluctuation = quadratic_fluctuation;
  s.max_hilbert_dim = max_dim;
  return s;
}

#define ORACLE_KWARGS                                                                               \
  py::arg("trunc") = py::none(), py::arg("dim_cav") = 4, py::arg("kappa") = 400.0, py::arg("gamma") = 1.0, \
      py::arg("omega_ratio") = 50.0, py::arg("n_c") = 1.0, py::arg("quadratic_fluctuation") = false,       \
      py::arg("max_dim") = 4096

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steady-state phonon statistics under two-phonon optical damping";

  // DomainError is also a ValueError; the rest derive from PhononError.
  py::object builtins = py::module_::import("builtins");
  py::object type = builtins.attr("type");
  py::object base = type("PhononError", py::make_tuple(builtins.attr("RuntimeError")),
                         py::dict(py::arg("__module__") = "phonon_stats"));
  m.attr("PhononError") = base;
  const auto make = [&](const char* name, py::object extra) {
    py::tuple bases = extra.is_none() ? py::tuple(py::make_tuple(base)) : py::tuple(py::make_tuple(base, extra));
    py::object cls = type(name, bases, py::dict(py::arg("__module__") = "phonon_stats"));
    m.attr(name) = cls;
    return cls.release().ptr();
  };
  static PyObject* base_ptr = base.inc_ref().ptr();
  static PyObject* domain = make("DomainError", builtins.attr("ValueError"));
  static PyObject* config = make("ConfigError", builtins.attr("ValueError"));
  static PyObject* diverged = make("FixedPointDiverged", py::none());
  static PyObject* not_converged = make("NotConverged", py::none());
  static PyObject* degenerate = make("DegenerateBranch", py::none());
  static PyObject* unstable = make("RecursionUnstable", py::none());
  static PyObject* singular = make("SingularSystem", py::none());
  static PyObject* budget = make("BudgetExceeded", py::none());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const app::ConfigError& e) {
      PyErr_SetString(config, e.what());
    } catch (const phonon::DomainError& e) {
      PyErr_SetString(domain, e.what());
    } catch (const phonon::FixedPointDiverged& e) {
      PyErr_SetString(diverged, e.what());
    } catch (const phonon::NotConverged& e) {
      PyErr_SetString(not_converged, e.what());
    } catch (const phonon::DegenerateBranch& e) {
      PyErr_SetString(degenerate, e.what());
    } catch (const phonon::RecursionUnstable& e) {
      PyErr_SetString(unstable, e.what());
    } catch (const phonon::SingularSystem& e) {
      PyErr_SetString(singular, e.what());
    } catch (const phonon::BudgetExceeded& e) {
      PyErr_SetString(budget, e.what());
    } catch (const phonon::Error& e) {
      PyErr_SetString(base_ptr, e.what());
    }
  });

  py::class_<phonon::Diagnostics>(m, "Diagnostics")
      .def_readonly("series_terms", &phonon::Diagnostics::series_terms)
      .def_readonly("tail_mass", &phonon::Diagnostics::tail_mass)
      .def_readonly("dim_mech", &phonon::Diagnostics::dim_mech)
      .def_readonly("dim_cav", &phonon::Diagnostics::dim_cav)
      .def_readonly("residual", &phonon::Diagnostics::residual)
      .def_readonly("top_population", &phonon::Diagnostics::top_population)
      .def_readonly("cavity_occupation", &phonon::Diagnostics::cavity_occupation)
      .def_readonly("min_eigenvalue", &phonon::Diagnostics::min_eigenvalue);

  py::class_<phonon::SteadyStateReport>(m, "SteadyStateReport")
      .def_readonly("n_ss", &phonon::SteadyStateReport::n_ss)
      .def_readonly("g2", &phonon::SteadyStateReport::g2)
      .def_readonly("populations", &phonon::SteadyStateReport::populations)
      .def_property_readonly("regime",
                             [](const phonon::SteadyStateReport& r) { return std::string(to_string(r.regime)); })
      .def_readonly("model", &phonon::SteadyStateReport::model)
      .def_readonly("diagnostics", &phonon::SteadyStateReport::diagnostics)
      .def("fano_factor", &phonon::SteadyStateReport::fano_factor)
      .def("to_dict", [](const phonon::SteadyStateReport& r) { return to_python(app::to_json(r)); })
      .def("__repr__", [](const phonon::SteadyStateReport& r) {
        return "<SteadyStateReport model=" + r.model + " n_ss=" + app::format_double(r.n_ss) +
               " g2=" + (r.g2 ? app::format_double(*r.g2) : std::string("None")) + ">";
      });

  py::class_<phonon::PhysicalParams>(m, "PhysicalParams")
      .def(py::init([](double g0, double kappa, double gamma, double omega_m, double eta, std::optional<double> n_th,
                       std::optional<double> temperature) {
             phonon::PhysicalParams p;
             p.g0 = g0;
             p.kappa = kappa;
             p.gamma = gamma;
             p.omega_m = omega_m;
             p.eta = eta;
             p.n_th = n_th;
             p.temperature = temperature;
             return p;
           }),
           py::kw_only(), py::arg("g0"), py::arg("kappa"), py::arg("gamma"), py::arg("omega_m"), py::arg("eta"),
           py::arg("n_th") = py::none(), py::arg("temperature") = py::none())
      .def_readwrite("g0", &phonon::PhysicalParams::g0)
      .def_readwrite("kappa", &phonon::PhysicalParams::kappa)
      .def_readwrite("gamma", &phonon::PhysicalParams::gamma)
      .def_readwrite("omega_m", &phonon::PhysicalParams::omega_m)
      .def_readwrite("eta", &phonon::PhysicalParams::eta)
      .def_readwrite("n_th", &phonon::PhysicalParams::n_th)
      .def_readwrite("temperature", &phonon::PhysicalParams::temperature)
      .def("thermal_occupation", &phonon::PhysicalParams::thermal_occupation);

  py::class_<phonon::ReducedParams>(m, "ReducedParams")
      .def_readonly("cooperativity", &phonon::ReducedParams::cooperativity)
      .def_readonly("n_th", &phonon::ReducedParams::n_th)
      .def_readonly("n_c", &phonon::ReducedParams::n_c)
      .def_readonly("g", &phonon::ReducedParams::g)
      .def_readonly("omega_m_eff", &phonon::ReducedParams::omega_m_eff)
      .def_readonly("gamma_opt", &phonon::ReducedParams::gamma_opt)
      .def_readonly("delta_c", &phonon::ReducedParams::delta_c)
      .def_readonly("kappa", &phonon::ReducedParams::kappa)
      .def_readonly("gamma", &phonon::ReducedParams::gamma)
      .def_readonly("iterations", &phonon::ReducedParams::iterations);

  m.def("bose_occupation", &phonon::bose_occupation, py::arg("omega_m"), py::arg("temperature"));
  m.def("derive_reduced", &phonon::derive_reduced, py::arg("physical"));
  m.def("coupling_for_cooperativity", &phonon::coupling_for_cooperativity, py::arg("C"), py::arg("kappa"),
        py::arg("gamma"));

  m.def("mean_phonon_exact", &phonon::mean_phonon_exact, py::arg("C"), py::arg("n_th"));
  m.def("g2_exact", &phonon::g2_exact, py::arg("C"), py::arg("n_th"));
  m.def("phonon_populations_exact", &phonon::phonon_populations_exact, py::arg("C"), py::arg("n_th"),
        py::arg("m_max"));
  m.def(
      "classify_regime",
      [](double c, double n) { return std::string(to_string(phonon::classify_regime(c, n))); }, py::arg("C"),
      py::arg("n_th"));
  m.def("exact_report", &phonon::exact_report, py::arg("C"), py::arg("n_th"), py::arg("m_max") = -1);

  m.def("mean_phonon_hitemp", &phonon::mean_phonon_hitemp, py::arg("C"), py::arg("n_th"));
  m.def("g2_hitemp", &phonon::g2_hitemp, py::arg("C"), py::arg("n_th"));
  m.def(
      "phonon_distribution_hitemp",
      [](double c, double n, int n_max) {
        const auto d = phonon::phonon_distribution_hitemp(c, n, n_max);
        return py::make_tuple(d.populations, d.tail_mass);
      },
      py::arg("C"), py::arg("n_th"), py::arg("n_max") = -1);
  m.def(
      "quartic_moments",
      [](double a, double b, int n_max) {
        const auto t = phonon::gaussian_quartic_moments(a, b, n_max);
        std::vector<double> out;
        for (int k = 0; k <= n_max; ++k) out.push_back(t.moment(k));
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("n_max"));
  m.def("hitemp_report", &phonon::hitemp_report, py::arg("C"), py::arg("n_th"), py::arg("n_max") = -1);

  m.def(
      "evaluate",
      [](const std::string& model, double c, double n, std::optional<int> trunc, int dim_cav, double kappa,
         double gamma, double omega_ratio, double n_c, bool quadratic_fluctuation, int max_dim) {
        const auto kind = app::parse_model(model);
        const auto settings = oracle_settings(trunc, dim_cav, kappa, gamma, omega_ratio, n_c, quadratic_fluctuation,
                                              max_dim);
        py::gil_scoped_release release;
        return app::evaluate(kind, {c, n, std::nullopt}, settings);
      },
      py::arg("model"), py::arg("C"), py::arg("n_th"), ORACLE_KWARGS,
      "Steady state from any model: exact, hitemp, oracle-reduced, oracle-rwa, oracle-prerwa or auto.");

  m.def(
      "sweep",
      [](const std::string& model, std::vector<double> cs, std::vector<double> ns, int jobs, std::optional<int> trunc,
         int dim_cav, double kappa, double gamma, double omega_ratio, double n_c, bool quadratic_fluctuation,
         int max_dim) {
        app::RunConfig cfg;
        cfg.c_values = std::move(cs);
        cfg.nth_values = std::move(ns);
        const auto settings = oracle_settings(trunc, dim_cav, kappa, gamma, omega_ratio, n_c, quadratic_fluctuation,
                                              max_dim);
        std::vector<app::Outcome> outcomes;
        {
          py::gil_scoped_release release;
          outcomes = app::evaluate_all(app::parse_model(model), app::grid_points(cfg), settings, jobs);
        }
        return table_columns(app::outcomes_table(outcomes));
      },
      py::arg("model"), py::arg("C"), py::arg("n_th"), py::arg("jobs") = 1, ORACLE_KWARGS,
      "n_th-major grid; returns a dict of columns, failed points carry status 'error: ...'.");

  m.def(
      "figure",
      [](int id, std::vector<double> cs, std::vector<double> ns, int jobs) {
        app::Table t;
        {
          py::gil_scoped_release release;
          t = app::figure_table(id, {std::move(cs), std::move(ns), jobs});
        }
        return table_columns(t);
      },
      py::arg("id"), py::arg("C") = std::vector<double>{}, py::arg("n_th") = std::vector<double>{},
      py::arg("jobs") = 1);

  m.def(
      "validate",
      [](const std::string& reference, const std::string& candidate, double tolerance, std::vector<double> cs,
         std::vector<double> ns, int jobs) {
        app::RunConfig cfg;
        cfg.mode = app::Mode::Validate;
        cfg.reference = app::parse_model(reference);
        cfg.candidate = app::parse_model(candidate);
        cfg.tolerance = tolerance;
        cfg.c_values = std::move(cs);
        cfg.nth_values = std::move(ns);
        cfg.jobs = jobs;
        cfg.validate();
        app::ValidationSummary s;
        {
          py::gil_scoped_release release;
          s = app::run_validation(cfg);
        }
        return to_python(app::to_json(s));
      },
      py::arg("reference") = "exact", py::arg("candidate") = "oracle-reduced", py::arg("tolerance") = 1e-6,
      py::arg("C") = std::vector<double>{}, py::arg("n_th") = std::vector<double>{}, py::arg("jobs") = 1);
}
