"""Phase-space CHSH correlations of the two-mode squeezed vacuum."""

from ._core import (
    ContractViolation,
    DomainError,
    NotConverged,
    TruncationError,
    UnsupportedObservable,
    chsh_optimum,
    correlator,
    evolved_covariance,
    orthant,
    pi_chsh_closed_form,
    pi_chsh_optimum,
    required_truncation,
    spin_bell_max,
    tmss_form,
    wedge,
    wigner_min,
)

__all__ = [
    "ContractViolation",
    "DomainError",
    "NotConverged",
    "TruncationError",
    "UnsupportedObservable",
    "chsh_optimum",
    "correlator",
    "evolved_covariance",
    "orthant",
    "pi_chsh_closed_form",
    "pi_chsh_optimum",
    "required_truncation",
    "spin_bell_max",
    "tmss_form",
    "wedge",
    "wigner_min",
]
