"""Composition of Gaussian unitaries in the Bargmann picture, global phase included,
and linear combinations of Gaussian pure states.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bargmann import BargmannTriple, TripleKind
from .fock import FockTensor, hermite_renormalized


@dataclass(frozen=True)
class UnitaryBlocks:
    """``A_U = [[B, C], [C^T, D]]`` and ``b_U = [c, d]`` (output half first)."""

    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    cvec: np.ndarray
    dvec: np.ndarray

    @classmethod
    def of(cls, u: BargmannTriple) -> "UnitaryBlocks":
        if u.kind is not TripleKind.UNITARY:
            raise ValueError("expected a unitary triple")
        M = u.num_modes
        A, b = u.A, u.b
        return cls(A[:M, :M], A[:M, M:], A[M:, M:], b[:M], b[M:])


def sqrt_det(Y) -> complex:
    """Continuous branch of ``sqrt(det Y)`` for ``Y = 1 - (contraction)``.

    Every eigenvalue of such a ``Y`` has non-negative real part, so the product
    of principal square roots of the eigenvalues never crosses a branch cut.
    """
    return complex(np.prod(np.sqrt(np.linalg.eigvals(Y).astype(complex))))


def _contraction(D1, B2):
    M = D1.shape[0]
    Y = np.eye(M) - B2 @ D1
    if np.linalg.cond(Y) > 1e12:
        raise np.linalg.LinAlgError("composition matrix is singular")
    Yinv = np.linalg.inv(Y)
    Z = np.block([[Yinv @ B2, Yinv], [Yinv.T, D1 @ Yinv]])
    return Y, 0.5 * (Z + Z.T)


def compose(u1: BargmannTriple, u2: BargmannTriple) -> BargmannTriple:
    """Triple of the product ``U1 U2`` (``U2`` acts first).

    Args:
        u1: unitary triple applied second.
        u2: unitary triple applied first.

    Returns:
        Unitary triple of ``U1 U2`` with the correct global phase.
    """
    if u1.num_modes != u2.num_modes:
        raise ValueError(f"mode mismatch: {u1.num_modes} vs {u2.num_modes}")
    p, q = UnitaryBlocks.of(u1), UnitaryBlocks.of(u2)
    M = u1.num_modes
    zero = np.zeros((M, M))
    Y, Z = _contraction(p.D, q.B)
    left = np.block([[p.C, zero], [zero, q.C.T]])
    A = np.block([[p.B, zero], [zero, q.D]]) + left @ Z @ left.T
    v = np.concatenate([p.dvec, q.cvec])
    b = np.concatenate([p.cvec, q.dvec]) + left @ Z @ v
    c = u1.c * u2.c / sqrt_det(Y) * np.exp(0.5 * v @ Z @ v)
    return BargmannTriple(A, b, c, TripleKind.UNITARY)


def apply_unitary_to_pure(u: BargmannTriple, psi: BargmannTriple) -> BargmannTriple:
    """Triple of ``U|psi>`` including its global phase."""
    if psi.kind is not TripleKind.PURE_STATE:
        raise ValueError("expected a pure-state triple")
    if u.num_modes != psi.num_modes:
        raise ValueError(f"mode mismatch: {u.num_modes} vs {psi.num_modes}")
    p = UnitaryBlocks.of(u)
    Y, Z = _contraction(p.D, psi.A)
    M = psi.num_modes
    A = p.B + p.C @ Z[:M, :M] @ p.C.T
    v = np.concatenate([p.dvec, psi.b])
    b = p.cvec + p.C @ (Z @ v)[:M]
    c = u.c * psi.c / sqrt_det(Y) * np.exp(0.5 * v @ Z @ v)
    return BargmannTriple(A, b, c, TripleKind.PURE_STATE)


@dataclass(frozen=True)
class GaussianLinearCombination:
    """Superposition ``sum_i coeff_i |G_i>`` of Gaussian pure states."""

    terms: list = field(default_factory=list)

    def __post_init__(self):
        terms = [(complex(cf), t) for cf, t in self.terms]
        if not terms:
            raise ValueError("a linear combination needs at least one term")
        modes = {t.num_modes for _, t in terms}
        if len(modes) != 1:
            raise ValueError(f"terms act on different numbers of modes: {sorted(modes)}")
        if any(t.kind is not TripleKind.PURE_STATE for _, t in terms):
            raise ValueError("all terms must be pure-state triples")
        object.__setattr__(self, "terms", terms)

    @property
    def num_modes(self) -> int:
        return self.terms[0][1].num_modes

    def apply_unitary(self, u: BargmannTriple) -> "GaussianLinearCombination":
        """Apply ``u`` term by term; phases of each term are kept."""
        return GaussianLinearCombination([(cf, apply_unitary_to_pure(u, t)) for cf, t in self.terms])


def combination_to_fock(lc: GaussianLinearCombination, cutoffs) -> FockTensor:
    """Unnormalized Fock amplitudes of a linear combination."""
    amps = None
    for coeff, triple in lc.terms:
        part = coeff * hermite_renormalized(triple, cutoffs).amps
        amps = part if amps is None else amps + part
    return FockTensor(amps, TripleKind.PURE_STATE)
