"""Deformed Fredholm determinants of the confluent hypergeometric kernel.

Four routes to ln det(I - gamma K_s): Nystrom quadrature (:mod:`fredholm`),
large-gap asymptotics (:mod:`asymptotics`), the Painleve V Hamiltonian
(:mod:`painleve`) and the Toeplitz scaling limit (:mod:`toeplitz`), plus
counting statistics (:mod:`stats`).
"""

from .errors import (
    BlowUpError,
    ChgdetError,
    ConvergenceError,
    DiscretizationError,
    DomainError,
    PoleError,
    StepUnderflowError,
)
from .kernel import KernelParams

__version__ = "0.1.0"

__all__ = [
    "KernelParams",
    "ChgdetError",
    "DomainError",
    "PoleError",
    "ConvergenceError",
    "DiscretizationError",
    "BlowUpError",
    "StepUnderflowError",
]
