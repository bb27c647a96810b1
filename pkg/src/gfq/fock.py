"""Fock amplitudes of Gaussian objects from their Bargmann triples.

The renormalized Hermite tensor ``G_k = c * He_k(A, b) / sqrt(k!)`` obeys

    G_{k + 1_i} = (b_i G_k + sum_j sqrt(k_j) A_ij G_{k - 1_j}) / sqrt(k_i + 1)

and is filled in a single lexicographic pass by a compiled kernel.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import hermite_fill, hermite_vjp
from .bargmann import BargmannTriple, TripleKind

#: Largest index weight accepted by the exhaustive loop-hafnian oracle.
ORACLE_MAX_WEIGHT = 8


@dataclass(frozen=True)
class FockTensor:
    """Amplitudes on a truncated multi-index grid.

    Args:
        amps: complex array with one axis per index of the generating triple.
        kind: object class the amplitudes describe, or ``None``.
    """

    amps: np.ndarray
    kind: TripleKind | None = None

    def __post_init__(self):
        object.__setattr__(self, "amps", np.asarray(self.amps, dtype=complex))

    @property
    def cutoffs(self) -> tuple:
        return tuple(self.amps.shape)

    def to_json(self) -> str:
        flat = self.amps.ravel()
        return json.dumps({"cutoffs": list(self.cutoffs), "re": flat.real.tolist(), "im": flat.imag.tolist()})

    @classmethod
    def from_json(cls, text: str, kind: TripleKind | None = None) -> "FockTensor":
        data = json.loads(text)
        amps = (np.asarray(data["re"]) + 1j * np.asarray(data["im"])).reshape(data["cutoffs"])
        return cls(amps, kind)

    def density_matrix(self) -> np.ndarray:
        """``rho[m, n]`` for a single-mode-group mixed state tensor ``[n, m]``."""
        if self.kind is not TripleKind.MIXED_STATE:
            raise ValueError("not a mixed-state tensor")
        M = self.amps.ndim // 2
        perm = list(range(M, 2 * M)) + list(range(M))
        return self.amps.transpose(perm)


@dataclass(frozen=True)
class TripleGradient:
    """Cotangent ``(dA, db, dc)`` of a scalar with respect to a triple."""

    dA: np.ndarray
    db: np.ndarray
    dc: complex


def _as_arrays(triple):
    if isinstance(triple, BargmannTriple):
        return triple.A, triple.b, triple.c, triple.kind
    A, b, c = triple
    return np.asarray(A, dtype=complex), np.asarray(b, dtype=complex), complex(c), None


def _cutoff_vector(cutoffs, ell):
    if np.isscalar(cutoffs):
        cutoffs = [int(cutoffs)] * ell
    cutoffs = np.asarray(cutoffs, dtype=np.int64).reshape(-1)
    if cutoffs.shape != (ell,):
        raise ValueError(f"expected {ell} cutoffs, got {len(cutoffs)}")
    if np.any(cutoffs < 1):
        raise ValueError("cutoffs must be positive")
    return cutoffs


def recurrence(A, b, c, cutoffs) -> np.ndarray:
    """Raw renormalized Hermite tensor for arrays ``(A, b, c)``."""
    A = np.ascontiguousarray(A, dtype=complex)
    b = np.ascontiguousarray(b, dtype=complex).reshape(-1)
    cut = _cutoff_vector(cutoffs, len(b))
    if len(b) == 0:
        return np.array(complex(c))
    flat = hermite_fill(A, b, complex(c), cut)
    return flat.reshape(tuple(cut))


def hermite_renormalized(triple, cutoffs) -> FockTensor:
    """Fock amplitudes of a Gaussian object.

    Args:
        triple: a :class:`BargmannTriple` or a tuple ``(A, b, c)``.
        cutoffs: one cutoff per index, or a single int for all of them.

    Returns:
        FockTensor whose entry ``k`` is ``c He_k(A, b) / sqrt(k!)``.
    """
    A, b, c, kind = _as_arrays(triple)
    return FockTensor(recurrence(A, b, c, cutoffs), kind)


def fock_vjp(triple, tensor, upstream) -> TripleGradient:
    """Pull ``upstream = dL/dG`` back to the triple.

    The returned ``dA`` is symmetric and counts each off-diagonal pair once per
    ordered entry, so ``dL = sum(dA * dA_pert) + db . db_pert + dc * dc_pert``
    for a symmetric perturbation.
    """
    A, b, c, _ = _as_arrays(triple)
    G = tensor.amps if isinstance(tensor, FockTensor) else np.asarray(tensor, dtype=complex)
    upstream = np.asarray(upstream, dtype=complex)
    if upstream.shape != G.shape:
        raise ValueError(f"upstream shape {upstream.shape} does not match tensor {G.shape}")
    if c == 0:
        raise ValueError("cannot differentiate a tensor with c = 0")
    cut = np.asarray(G.shape, dtype=np.int64)
    dA, db, dc = hermite_vjp(np.ascontiguousarray(G).ravel(), np.ascontiguousarray(upstream).ravel(), c, cut)
    return TripleGradient(0.5 * (dA + dA.T), db, complex(dc))


def stability_report(tensor: FockTensor) -> dict:
    """Crude precision diagnostic: growth of ``|G|`` and its tail mass.

    Returns:
        Dict with ``max_abs`` (largest amplitude modulus), ``growth`` (ratio of
        the largest modulus on the outer shell to the global largest) and
        ``finite`` flag.  ``growth`` close to one or beyond hints that the
        cutoff has reached the double precision horizon.
    """
    amps = tensor.amps
    absval = np.abs(amps)
    finite = bool(np.all(np.isfinite(amps)))
    if amps.ndim == 0:
        return {"max_abs": float(absval), "growth": 0.0, "finite": finite}
    shell = np.zeros(amps.shape, dtype=bool)
    for ax in range(amps.ndim):
        sl = [slice(None)] * amps.ndim
        sl[ax] = -1
        shell[tuple(sl)] = True
    top = float(absval.max()) if absval.size else 0.0
    edge = float(absval[shell].max()) if shell.any() else 0.0
    return {"max_abs": top, "growth": edge / top if top else 0.0, "finite": finite}


# ---------------------------------------------------------------------------
# oracle


def _lhaf(mat) -> complex:
    """Loop hafnian by recursion over the first vertex."""
    n = mat.shape[0]
    if n == 0:
        return 1.0 + 0j
    rest = np.arange(1, n)
    total = mat[0, 0] * _lhaf(mat[np.ix_(rest, rest)])
    for pos in range(1, n):
        keep = np.delete(rest, pos - 1)
        total += mat[0, pos] * _lhaf(mat[np.ix_(keep, keep)])
    return total


def loop_hafnian_oracle(A, b, k) -> complex:
    """Unnormalized Hermite polynomial ``He_k(A, b)`` as a loop hafnian.

    Enumerates all matchings with loops of the index-repeated matrix whose
    diagonal is replaced by ``b``.
    """
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex).reshape(-1)
    k = np.asarray(k, dtype=int).reshape(-1)
    if k.shape != b.shape:
        raise ValueError("index length does not match the triple")
    if k.sum() > ORACLE_MAX_WEIGHT:
        raise ValueError(f"index weight {k.sum()} exceeds the oracle budget {ORACLE_MAX_WEIGHT}")
    idx = np.repeat(np.arange(len(b)), k)
    mat = A[np.ix_(idx, idx)].copy()
    np.fill_diagonal(mat, b[idx])
    return complex(_lhaf(mat))


# ---------------------------------------------------------------------------
# state utilities


def _amps(x):
    return x.amps if isinstance(x, FockTensor) else np.asarray(x, dtype=complex)


def state_probability(ket) -> float:
    return float(np.sum(np.abs(_amps(ket)) ** 2))


def normalize(ket):
    amps = _amps(ket)
    norm = np.sqrt(np.sum(np.abs(amps) ** 2))
    if norm == 0:
        raise ValueError("cannot normalize a zero vector")
    if isinstance(ket, FockTensor):
        return FockTensor(amps / norm, ket.kind)
    return amps / norm


def fidelity(ket_a, ket_b) -> float:
    """``|<a|b>|^2`` after normalizing both kets."""
    a, b = _amps(ket_a), _amps(ket_b)
    if a.shape != b.shape:
        raise ValueError(f"cutoff mismatch: {a.shape} vs {b.shape}")
    na, nb = np.sum(np.abs(a) ** 2), np.sum(np.abs(b) ** 2)
    if na == 0 or nb == 0:
        raise ValueError("zero-norm ket")
    return float(np.abs(np.vdot(a, b)) ** 2 / (na * nb))


def project_fock(tensor, pattern: dict):
    """Herald the modes in ``pattern`` on the given photon numbers.

    Args:
        tensor: pure-state tensor over ``M`` modes.
        pattern: map from mode index to detected photon number.

    Returns:
        Tuple ``(slice, prob)`` with the unnormalized conditional ket over the
        remaining modes and the (truncated) success probability.
    """
    amps = _amps(tensor)
    index = [slice(None)] * amps.ndim
    for mode, n in pattern.items():
        if not 0 <= mode < amps.ndim:
            raise ValueError(f"mode {mode} out of range")
        if not 0 <= n < amps.shape[mode]:
            raise ValueError(f"photon number {n} outside cutoff {amps.shape[mode]} of mode {mode}")
        index[mode] = int(n)
    out = amps[tuple(index)]
    kind = tensor.kind if isinstance(tensor, FockTensor) else None
    return FockTensor(out, kind), state_probability(out)


def tail_mass(ket) -> float:
    """``1 - sum |psi|^2``: norm missing beyond the cutoff of a normalized state."""
    return 1.0 - state_probability(ket)


def index_weight_iter(ell: int, max_weight: int):
    """All multi-indices of length ``ell`` with total weight at most ``max_weight``."""
    for k in itertools.product(range(max_weight + 1), repeat=ell):
        if sum(k) <= max_weight:
            yield k


def sqrt_factorial(k) -> float:
    return math.sqrt(math.prod(math.factorial(int(x)) for x in k))
