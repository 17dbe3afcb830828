"""Finite-dimensional Friedrichs model: resonances, scattering, decay."""

from ._core import (
    KitError,
    Model,
    Resonance,
    eval_L,
    gamov_k0,
    locate_resonances,
    rho,
    s_matrix_K,
    survival_amplitude,
)

__all__ = [
    "KitError",
    "Model",
    "Resonance",
    "eval_L",
    "gamov_k0",
    "locate_resonances",
    "rho",
    "s_matrix_K",
    "survival_amplitude",
]
