#pragma once

#include <stdexcept>
#include <string>

namespace phonon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (x <= 0 for log_gamma, C < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The self-consistent cavity detuning iteration did not settle.
class FixedPointDiverged : public Error {
 public:
  using Error::Error;
};

/// A series hit its term cap before reaching the tolerance.
class NotConverged : public Error {
 public:
  using Error::Error;
};

/// Population series requested exactly at the coherent point C = 1 + 2 n_th.
class DegenerateBranch : public Error {
 public:
  using Error::Error;
};

/// Forward moment recursion lost positivity or precision.
class RecursionUnstable : public Error {
 public:
  using Error::Error;
};

/// Steady-state linear system is singular (non-unique steady state).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Truncation ladder exceeded the Hilbert-space dimension cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace phonon
