"""Steady-state phonon statistics of a mechanical oscillator under two-phonon optical damping."""

from ._core import (
    BudgetExceeded,
    ConfigError,
    DegenerateBranch,
    Diagnostics,
    DomainError,
    FixedPointDiverged,
    NotConverged,
    PhononError,
    PhysicalParams,
    RecursionUnstable,
    ReducedParams,
    SingularSystem,
    SteadyStateReport,
    bose_occupation,
    classify_regime,
    coupling_for_cooperativity,
    derive_reduced,
    evaluate,
    exact_report,
    figure,
    g2_exact,
    g2_hitemp,
    hitemp_report,
    mean_phonon_exact,
    mean_phonon_hitemp,
    phonon_distribution_hitemp,
    phonon_populations_exact,
    quartic_moments,
    sweep,
    validate,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
