"""Gaussian objects in phase space and Fock space.

Bargmann triples, the amplitude recurrence and its gradient, phase-tracked
composition and Riemannian optimization on the symplectic group.
"""

from .bargmann import (
    BargmannTriple,
    TripleKind,
    passive_probability,
    triple_from_channel,
    triple_from_mixed,
    triple_from_pure,
    triple_from_unitary,
)
from .composition import GaussianLinearCombination, apply_unitary_to_pure, combination_to_fock, compose
from .fock import FockTensor, fidelity, fock_vjp, hermite_renormalized, normalize, project_fock
from .phase_space import GaussianChannel, GaussianState, GaussianUnitary
from .settings import get_hbar

__version__ = "0.1.0"

__all__ = [
    "BargmannTriple",
    "FockTensor",
    "GaussianChannel",
    "GaussianLinearCombination",
    "GaussianState",
    "GaussianUnitary",
    "TripleKind",
    "apply_unitary_to_pure",
    "combination_to_fock",
    "compose",
    "fidelity",
    "fock_vjp",
    "get_hbar",
    "hermite_renormalized",
    "normalize",
    "passive_probability",
    "project_fock",
    "triple_from_channel",
    "triple_from_mixed",
    "triple_from_pure",
    "triple_from_unitary",
]
