#include "phonon/lindblad.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "phonon/errors.hpp"
#include "phonon/specfun.hpp"

namespace phonon {

namespace {

using Triplet = Eigen::Triplet<Complex>;
constexpr Complex kI{0.0, 1.0};

SparseMatrix identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out = Eigen::kroneckerProduct(a, b);
  return out;
}

SparseMatrix adjoint(const SparseMatrix& a) { return SparseMatrix(a.adjoint()); }

/// Accumulates a Liouvillian from Hamiltonian and Lindblad terms.
class LiouvillianBuilder {
 public:
  explicit LiouvillianBuilder(int dim)
      : dim_(dim), id_(identity(dim)), matrix_(dim * dim, dim * dim) {}

  /// -i [H, rho]
  void hamiltonian(const SparseMatrix& h) {
    SparseMatrix ht = h.transpose();
    matrix_ += (-kI) * (kron(id_, h) - kron(ht, id_));
  }

  /// rate * D[o] rho
  void dissipator(double rate, const SparseMatrix& o) {
    if (rate == 0.0) return;
    const SparseMatrix od_o = adjoint(o) * o;
    SparseMatrix od_o_t = od_o.transpose();
    SparseMatrix o_conj = o.conjugate();
    matrix_ += Complex(rate) * (Complex(2.0) * kron(o_conj, o) - kron(id_, od_o) - kron(od_o_t, id_));
  }

  SparseMatrix finish() {
    matrix_.prune(Complex(0.0));
    matrix_.makeCompressed();
    return std::move(matrix_);
  }

 private:
  int dim_;
  SparseMatrix id_;
  SparseMatrix matrix_;
};

void check_rate(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and non-negative");
  }
}

struct ModeOps {
  SparseMatrix a, b;  // on the full product space
};

ModeOps mode_operators(const TruncationSpec& trunc) {
  return {kron(annihilation(trunc.dim_cav), identity(trunc.dim_mech)),
          kron(identity(trunc.dim_cav), annihilation(trunc.dim_mech))};
}

void add_thermal_bath(LiouvillianBuilder& builder, const SparseMatrix& b, double gamma, double n_th) {
  builder.dissipator(0.5 * gamma * n_th, adjoint(b));
  builder.dissipator(0.5 * gamma * (n_th + 1.0), b);
}


bool settled(double prev, double cur, double rel_tol) {
  return std::abs(prev - cur) <= rel_tol * std::max(std::abs(prev), std::abs(cur)) + 1e-14;
}

}  // namespace

void TruncationSpec::validate() const {
  if (dim_mech < 2) throw DomainError("TruncationSpec: dim_mech must be >= 2");
  if (dim_cav < 1) throw DomainError("TruncationSpec: dim_cav must be >= 1");
  if (!(tol_population_tail > 0.0 && tol_population_tail < 1.0)) {
    throw DomainError("TruncationSpec: tol_population_tail must lie in (0, 1)");
  }
}

std::string_view to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::Reduced: return "reduced";
    case ModelTag::TwoModeRwa: return "two-mode-rwa";
    case ModelTag::PreRwa: return "pre-rwa";
    case ModelTag::External: return "external";
  }
  return "external";
}

SparseMatrix annihilation(int dim) {
  SparseMatrix op(dim, dim);
  std::vector<Triplet> entries;
  for (int n = 1; n < dim; ++n) entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

bool is_two_mode(const ModelSpec& model) { return !std::holds_alternative<ReducedModel>(model); }

Superoperator build_reduced_liouvillian(double cooperativity, double n_th,
                                        const TruncationSpec& trunc) {
  trunc.validate();
  if (trunc.dim_cav != 1) throw DomainError("reduced model requires dim_cav == 1");
  check_rate(cooperativity, "cooperativity");
  check_rate(n_th, "n_th");
  const SparseMatrix b = annihilation(trunc.dim_mech);
  const SparseMatrix b2 = b * b;
  LiouvillianBuilder builder(trunc.dim_mech);
  builder.dissipator(0.5 * cooperativity, b2);
  add_thermal_bath(builder, b, 1.0, n_th);
  return {1, trunc.dim_mech, ModelTag::Reduced, builder.finish()};
}

Superoperator build_two_mode_rwa_liouvillian(double g, double kappa, double gamma, double n_th,
                                             const TruncationSpec& trunc) {
  trunc.validate();
  if (trunc.dim_cav < 2) throw DomainError("two-mode model requires dim_cav >= 2");
  check_rate(g, "g");
  check_rate(kappa, "kappa");
  check_rate(gamma, "gamma");
  check_rate(n_th, "n_th");
  const auto [a, b] = mode_operators(trunc);
  const SparseMatrix b2 = b * b;
  const SparseMatrix pair = adjoint(a) * b2;
  const SparseMatrix h = Complex(g) * (pair + adjoint(pair));

  LiouvillianBuilder builder(trunc.hilbert_dim());
  builder.hamiltonian(h);
  builder.dissipator(0.5 * kappa, a);
  add_thermal_bath(builder, b, gamma, n_th);
  return {trunc.dim_cav, trunc.dim_mech, ModelTag::TwoModeRwa, builder.finish()};
}

Superoperator build_prerwa_liouvillian(const ReducedParams& reduced, double kappa, double gamma,
                                       double n_th, bool include_quadratic_fluctuation,
                                       const TruncationSpec& trunc) {
  trunc.validate();
  if (trunc.dim_cav < 2) throw DomainError("two-mode model requires dim_cav >= 2");
  check_rate(kappa, "kappa");
  check_rate(gamma, "gamma");
  check_rate(n_th, "n_th");
  if (std::abs(reduced.delta_c + 2.0 * reduced.omega_m_eff) >
      1e-12 * std::max(1.0, std::abs(reduced.omega_m_eff))) {
    throw DomainError("pre-RWA model requires Delta_c = -2 omega_m_eff");
  }
  const auto [a, b] = mode_operators(trunc);
  const SparseMatrix ad = adjoint(a);
  const SparseMatrix bd = adjoint(b);
  const SparseMatrix x = b + bd;
  const SparseMatrix x2 = x * x;
  const SparseMatrix n_a = ad * a;
  const double g0 = reduced.g0();
  const double g0_nc = g0 * reduced.n_c;

  SparseMatrix h = Complex(-reduced.delta_c) * n_a;
  h += Complex(reduced.omega_m_eff) * SparseMatrix(bd * b);
  h += Complex(g0_nc) * SparseMatrix(bd * bd + b * b);
  h += Complex(reduced.g) * SparseMatrix((a + ad) * x2);
  if (include_quadratic_fluctuation) h += Complex(g0) * SparseMatrix(n_a * x2);

  LiouvillianBuilder builder(trunc.hilbert_dim());
  builder.hamiltonian(h);
  builder.dissipator(0.5 * kappa, a);
  add_thermal_bath(builder, b, gamma, n_th);
  return {trunc.dim_cav, trunc.dim_mech, ModelTag::PreRwa, builder.finish()};
}

Superoperator build_liouvillian(const ModelSpec& model, const TruncationSpec& trunc) {
  return std::visit(
      [&](const auto& m) -> Superoperator {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ReducedModel>) {
          return build_reduced_liouvillian(m.cooperativity, m.n_th, trunc);
        } else if constexpr (std::is_same_v<T, RwaModel>) {
          return build_two_mode_rwa_liouvillian(m.g, m.kappa, m.gamma, m.n_th, trunc);
        } else {
          return build_prerwa_liouvillian(m.reduced, m.kappa, m.gamma, m.n_th,
                                          m.include_quadratic_fluctuation, trunc);
        }
      },
      model);
}

double trace_defect(const Superoperator& L) {
  const int d = L.dim();
  double worst = 0.0;
  for (Eigen::Index col = 0; col < L.matrix.outerSize(); ++col) {
    Complex sum = 0.0;
    for (SparseMatrix::InnerIterator it(L.matrix, col); it; ++it) {
      if (it.row() % (d + 1) == 0) sum += it.value();
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

Eigen::MatrixXcd apply(const Superoperator& L, const Eigen::MatrixXcd& x) {
  const int d = L.dim();
  if (x.rows() != d || x.cols() != d) throw DomainError("apply: dimension mismatch");
  const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
  const Eigen::VectorXcd y = L.matrix * v;
  return Eigen::Map<const Eigen::MatrixXcd>(y.data(), d, d);
}

DensityMatrix steady_state(const Superoperator& L) {
  const int d = L.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  if (L.matrix.rows() != n || L.matrix.cols() != n) {
    throw DomainError("steady_state: superoperator size does not match its dimensions");
  }

  // Rank completion: row vec(0,0) becomes the trace functional.
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(L.matrix.nonZeros()) + d);
  for (Eigen::Index col = 0; col < L.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(L.matrix, col); it; ++it) {
      if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < d; ++i) entries.emplace_back(0, vec_index(i, i, d), 1.0);
  SparseMatrix system(n, n);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(system);
  lu.factorize(system);
  if (lu.info() != Eigen::Success) {
    throw SingularSystem("steady_state: factorisation failed (" + lu.lastErrorMessage() +
                         "); the steady state is not unique");
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs[0] = 1.0;
  Eigen::VectorXcd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw SingularSystem("steady_state: solve produced non-finite values");
  }

  const double scale = L.matrix.norm() * x.norm();
  const double residual = scale > 0.0 ? (L.matrix * x).norm() / scale : 0.0;
  if (residual > 1e-10) {
    std::ostringstream msg;
    msg << "steady_state: residual " << residual << " exceeds 1e-10; system is numerically singular";
    throw SingularSystem(msg.str());
  }

  DensityMatrix out;
  out.dim_cav = L.dim_cav;
  out.dim_mech = L.dim_mech;
  out.residual = residual;
  Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  if (d <= kEigenCheckMaxDim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
    const double lowest = eig.eigenvalues().minCoeff();
    out.min_eigenvalue = lowest;
    if (lowest < -1e-8) {
      std::ostringstream msg;
      msg << "steady_state: eigenvalue " << lowest << " below -1e-8; truncation failure";
      throw Error(msg.str());
    }
    if (lowest < 0.0) {
      const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
      rho = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().adjoint();
      rho /= rho.trace().real();
    }
  }
  out.rho = std::move(rho);
  return out;
}

SteadyStateReport observables(const DensityMatrix& state, ModeSelector mode) {
  const bool mech = mode == ModeSelector::Mechanical;
  const int levels = mech ? state.dim_mech : state.dim_cav;

  SteadyStateReport r;
  r.populations.assign(static_cast<std::size_t>(levels), 0.0);
  for (int ia = 0; ia < state.dim_cav; ++ia) {
    for (int ib = 0; ib < state.dim_mech; ++ib) {
      const int i = fock_index(ia, ib, state.dim_mech);
      r.populations[mech ? ib : ia] += state.rho(i, i).real();
    }
  }

  detail::CompensatedSum first, second;
  for (int n = 0; n < levels; ++n) {
    first.add(n * r.populations[n]);
    second.add(n * (n - 1.0) * r.populations[n]);
  }
  r.n_ss = std::max(0.0, first.value());
  if (r.n_ss >= kG2DefinabilityThreshold) r.g2 = second.value() / (r.n_ss * r.n_ss);

  // Regime from the numerical g2; the coherent band absorbs solver noise.
  if (!r.g2) {
    r.regime = Regime::Vacuum;
  } else if (std::abs(*r.g2 - 1.0) <= 1e-6) {
    r.regime = Regime::Coherent;
  } else {
    r.regime = *r.g2 > 1.0 ? Regime::Bunched : Regime::Antibunched;
  }

  detail::CompensatedSum total;
  for (double p : r.populations) total.add(p);
  r.diagnostics.tail_mass = 1.0 - total.value();
  r.diagnostics.dim_mech = state.dim_mech;
  r.diagnostics.dim_cav = state.dim_cav;
  r.diagnostics.residual = state.residual;
  r.diagnostics.min_eigenvalue = state.min_eigenvalue;
  r.diagnostics.top_population =
      levels >= 2 ? r.populations[levels - 1] + r.populations[levels - 2] : r.populations.back();
  if (mech && state.dim_cav > 1) {
    double occ = 0.0;
    for (int ia = 0; ia < state.dim_cav; ++ia) {
      for (int ib = 0; ib < state.dim_mech; ++ib) {
        const int i = fock_index(ia, ib, state.dim_mech);
        occ += ia * state.rho(i, i).real();
      }
    }
    r.diagnostics.cavity_occupation = occ;
  }
  return r;
}

namespace {

std::string model_name(const ModelSpec& model) {
  switch (model.index()) {
    case 0: return "oracle-reduced";
    case 1: return "oracle-rwa";
    default: return "oracle-prerwa";
  }
}

double cavity_top_population(const DensityMatrix& state) {
  if (state.dim_cav < 2) return 0.0;
  const auto cav = observables(state, ModeSelector::Cavity);
  return cav.populations.back();
}

}  // namespace

SteadyStateReport solve_model(const ModelSpec& model, const TruncationSpec& trunc) {
  auto r = observables(steady_state(build_liouvillian(model, trunc)));
  r.model = model_name(model);
  return r;
}

ConvergedSolution converge_truncation(const ModelSpec& model, TruncationSpec trunc,
                                      const ConvergenceOptions& options) {
  trunc.validate();
  if (is_two_mode(model) && trunc.dim_cav < 2) trunc.dim_cav = 2;
  if (!is_two_mode(model)) trunc.dim_cav = 1;

  std::optional<SteadyStateReport> previous;
  int solves = 0;
  for (;;) {
    if (trunc.hilbert_dim() > options.max_hilbert_dim) {
      std::ostringstream msg;
      msg << "converge_truncation: Hilbert dimension " << trunc.hilbert_dim()
          << " exceeds the cap " << options.max_hilbert_dim;
      throw BudgetExceeded(msg.str());
    }
    const auto state = steady_state(build_liouvillian(model, trunc));
    auto report = observables(state);
    report.model = model_name(model);
    ++solves;
    const double cav_top = cavity_top_population(state);

    bool done = previous.has_value() &&
                report.diagnostics.top_population < trunc.tol_population_tail &&
                cav_top < trunc.tol_population_tail &&
                settled(previous->n_ss, report.n_ss, options.rel_tol);
    if (done && previous->g2 && report.g2) {
      done = settled(*previous->g2, *report.g2, options.rel_tol);
    } else if (done) {
      done = previous->g2.has_value() == report.g2.has_value();
    }
    if (done) return {trunc, std::move(report), solves};

    previous = std::move(report);
    trunc.dim_mech *= 2;
    if (cav_top >= trunc.tol_population_tail) trunc.dim_cav += 1;
  }
}

void write_triplets(std::ostream& out, const Superoperator& L) {
  out << "# phonon-stats superoperator, column-stacked, cavity (x) mechanics\n"
      << "# model " << to_string(L.model) << "\n"
      << "# dim_cav " << L.dim_cav << "\n"
      << "# dim_mech " << L.dim_mech << "\n"
      << "# nnz " << L.matrix.nonZeros() << "\n";
  const auto old_precision = out.precision(17);
  for (Eigen::Index col = 0; col < L.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(L.matrix, col); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
          << '\n';
    }
  }
  out.precision(old_precision);
}

Superoperator read_triplets(std::istream& in) {
  Superoperator L;
  std::vector<Triplet> entries;
  std::optional<long long> declared_nnz;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string hash, key;
      fields >> hash >> key;
      if (key == "model") {
        std::string name;
        fields >> name;
        for (auto tag : {ModelTag::Reduced, ModelTag::TwoModeRwa, ModelTag::PreRwa}) {
          if (name == to_string(tag)) L.model = tag;
        }
      } else if (key == "dim_cav") {
        fields >> L.dim_cav;
      } else if (key == "dim_mech") {
        fields >> L.dim_mech;
      } else if (key == "nnz") {
        long long nnz = 0;
        if (fields >> nnz) declared_nnz = nnz;
      }
      continue;
    }
    long long row = 0, col = 0;
    double re = 0.0, im = 0.0;
    if (!(fields >> row >> col >> re >> im)) {
      throw DomainError("read_triplets: malformed line '" + line + "'");
    }
    entries.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col),
                         Complex(re, im));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(L.dim()) * L.dim();
  if (n == 0) throw DomainError("read_triplets: missing dimension header");
  if (declared_nnz && *declared_nnz != static_cast<long long>(entries.size())) {
    throw DomainError("read_triplets: header declares " + std::to_string(*declared_nnz) +
                      " entries, found " + std::to_string(entries.size()));
  }
  for (const auto& t : entries) {
    if (t.row() < 0 || t.col() < 0 || t.row() >= n || t.col() >= n) {
      throw DomainError("read_triplets: index out of range");
    }
  }
  L.matrix.resize(n, n);
  L.matrix.setFromTriplets(entries.begin(), entries.end());
  L.matrix.makeCompressed();
  return L;
}

}  // namespace phonon
