#pragma once

// Truncated-Fock-space Lindblad models and their steady states.
//
// Conventions used throughout:
//   * Two-mode states live on cavity (x) mechanics; basis index
//     i = n_cav * dim_mech + n_mech (cavity slot first).
//   * Density matrices are vectorised column-stacked: vec(rho)[r + d c] = rho(r, c),
//     so vec(A X B) = (B^T (x) A) vec(X).
//   * D[o] rho = 2 o rho o^+ - o^+ o rho - rho o^+ o.
//   * b^2, (b + b^+)^2 are matrix products of the truncated b, so commutator
//     identities hold on all but the top two levels.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <variant>

#include "phonon/params.hpp"
#include "phonon/report.hpp"

namespace phonon {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct TruncationSpec {
  int dim_mech = 8;  ///< mechanical levels 0..dim_mech-1
  int dim_cav = 1;   ///< 1 means no cavity mode
  double tol_population_tail = 1e-10;

  void validate() const;
  int hilbert_dim() const { return dim_mech * dim_cav; }
};

enum class ModelTag { Reduced, TwoModeRwa, PreRwa, External };

std::string_view to_string(ModelTag tag);

struct Superoperator {
  int dim_cav = 1;
  int dim_mech = 0;
  ModelTag model = ModelTag::External;
  SparseMatrix matrix;  ///< d^2 x d^2

  int dim() const { return dim_cav * dim_mech; }
};

struct DensityMatrix {
  int dim_cav = 1;
  int dim_mech = 0;
  Eigen::MatrixXcd rho;
  double residual = 0.0;
  std::optional<double> min_eigenvalue;  ///< before flooring; unset above kEigenCheckMaxDim

  int dim() const { return dim_cav * dim_mech; }
};

/// Column-stacked position of rho(row, col).
inline Eigen::Index vec_index(int row, int col, int dim) {
  return static_cast<Eigen::Index>(row) + static_cast<Eigen::Index>(dim) * col;
}

/// Position of |n_cav, n_mech> in the product basis.
inline int fock_index(int n_cav, int n_mech, int dim_mech) { return n_cav * dim_mech + n_mech; }

/// Truncated annihilation operator on `dim` levels.
SparseMatrix annihilation(int dim);

// ---- model specifications -------------------------------------------------

/// Two-phonon-damped mechanics in units of gamma.
struct ReducedModel {
  double cooperativity = 0.0;
  double n_th = 0.0;
};

/// Cavity + mechanics after the rotating-wave approximation, H = g(a^+ b^2 + b^+2 a).
struct RwaModel {
  double g = 0.0;
  double kappa = 1.0;
  double gamma = 1.0;
  double n_th = 0.0;
};

/// Displaced, rotating-frame model before the rotating-wave approximation.
struct PreRwaModel {
  ReducedParams reduced;
  double kappa = 1.0;
  double gamma = 1.0;
  double n_th = 0.0;
  bool include_quadratic_fluctuation = false;
};

using ModelSpec = std::variant<ReducedModel, RwaModel, PreRwaModel>;

bool is_two_mode(const ModelSpec& model);

// ---- builders -------------------------------------------------------------

/// (C/2) D[b^2] + (n/2) D[b^+] + ((n+1)/2) D[b]; requires dim_cav == 1.
Superoperator build_reduced_liouvillian(double cooperativity, double n_th,
                                        const TruncationSpec& trunc);

/// -i[H, .] + (kappa/2) D[a] + (gamma/2) n D[b^+] + (gamma/2)(n+1) D[b],
/// H = g (a^+ b^2 + b^+2 a); requires dim_cav >= 2.
Superoperator build_two_mode_rwa_liouvillian(double g, double kappa, double gamma, double n_th,
                                             const TruncationSpec& trunc);

/// Time-independent frame with
///   H = -Delta_c a^+a + w' b^+b + g0 n_c (b^+2 + b^2) + g (a + a^+)(b + b^+)^2
///       [+ g0 a^+a (b + b^+)^2 when include_quadratic_fluctuation]
/// and the same dissipators as the RWA model. Delta_c must equal -2 w'.
Superoperator build_prerwa_liouvillian(const ReducedParams& reduced, double kappa, double gamma,
                                       double n_th, bool include_quadratic_fluctuation,
                                       const TruncationSpec& trunc);

Superoperator build_liouvillian(const ModelSpec& model, const TruncationSpec& trunc);

/// Largest |sum_i L(vec(i,i), col)| over columns; zero for a trace-preserving L.
double trace_defect(const Superoperator& L);

/// L applied to a d x d matrix.
Eigen::MatrixXcd apply(const Superoperator& L, const Eigen::MatrixXcd& x);

// ---- steady state ---------------------------------------------------------

inline constexpr int kEigenCheckMaxDim = 1024;

/// Null vector of L normalised to unit trace.
///
/// One diagonal-index row of L (which is linearly dependent on the others for
/// a trace-preserving L) is replaced by the trace functional and the system
/// solved with a sparse LU. The result is Hermitised and renormalised;
/// eigenvalues in [-1e-8, 0) are clipped. Throws SingularSystem when the
/// factorisation fails or the residual exceeds 1e-10 relative; throws Error
/// on an eigenvalue below -1e-8.
DensityMatrix steady_state(const Superoperator& L);

enum class ModeSelector { Mechanical, Cavity };

/// n_ss, g2 and populations of one mode's reduced state.
SteadyStateReport observables(const DensityMatrix& rho, ModeSelector mode = ModeSelector::Mechanical);

/// Build, solve and extract the mechanical observables.
SteadyStateReport solve_model(const ModelSpec& model, const TruncationSpec& trunc);

struct ConvergenceOptions {
  double rel_tol = 1e-6;
  int max_hilbert_dim = 4096;
};

struct ConvergedSolution {
  TruncationSpec trunc;
  SteadyStateReport report;
  int solves = 0;
};

/// Doubles dim_mech (and for two-mode models grows dim_cav while its top
/// level is populated above the tail tolerance) until n_ss and g2 change by
/// less than rel_tol and the top two mechanical levels hold less than
/// tol_population_tail. Throws BudgetExceeded past max_hilbert_dim.
ConvergedSolution converge_truncation(const ModelSpec& model, TruncationSpec initial,
                                      const ConvergenceOptions& options = {});

// ---- export ---------------------------------------------------------------

/// Text triplet format: '#'-prefixed header lines (model, dim_cav, dim_mech,
/// nnz) followed by one "row col re im" line per stored entry, 0-based,
/// column-stacked convention as above.
void write_triplets(std::ostream& out, const Superoperator& L);
Superoperator read_triplets(std::istream& in);

}  // namespace phonon
