"""Separability, CHSH and local-hidden-variable analysis of two-party quantum states."""

from ._core import (
    Error,
    NumericError,
    bell_state,
    chsh_max,
    chsh_optimum,
    chsh_value,
    eigenvalues,
    lhv_membership,
    no_signaling_residual,
    partial_transpose,
    ppt_test,
    qubit_behavior,
    random_density,
    scan_werner,
    simulate,
    werner_chsh_threshold,
    werner_ppt_threshold,
    werner_state,
)

__all__ = [
    "Error",
    "NumericError",
    "bell_state",
    "chsh_max",
    "chsh_optimum",
    "chsh_value",
    "eigenvalues",
    "lhv_membership",
    "no_signaling_residual",
    "partial_transpose",
    "ppt_test",
    "qubit_behavior",
    "random_density",
    "scan_werner",
    "simulate",
    "werner_chsh_threshold",
    "werner_ppt_threshold",
    "werner_state",
]
