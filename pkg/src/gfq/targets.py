"""Target states for the state-preparation experiments."""

from __future__ import annotations

import numpy as np

from .bargmann import TripleKind, coherent_triple, squeezed_vacuum_triple
from .fock import FockTensor, hermite_renormalized, normalize
from .riemannian import matrix_exp
from .settings import get_hbar

CAT_TAIL_TOL = 1e-8


def target_cat(alpha: complex, parity: str = "odd", cutoff: int = 100) -> FockTensor:
    """Normalized cat state ``(|alpha> +- |-alpha>) / sqrt(2 +- 2 exp(-2|alpha|^2))``.

    Args:
        alpha: coherent amplitude.
        parity: ``"even"`` (plus sign) or ``"odd"`` (minus sign).
        cutoff: Fock cutoff.

    Returns:
        FockTensor with the normalized ket.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    sign = 1.0 if parity == "even" else -1.0
    plus = hermite_renormalized(coherent_triple(alpha), [cutoff]).amps
    minus = hermite_renormalized(coherent_triple(-alpha), [cutoff]).amps
    amps = (plus + sign * minus) / np.sqrt(2 + sign * 2 * np.exp(-2 * abs(alpha) ** 2))
    tail = 1.0 - np.sum(np.abs(amps) ** 2)
    if tail > CAT_TAIL_TOL:
        raise ValueError(f"cutoff {cutoff} leaves {tail:.2e} of the cat state outside the truncation")
    return FockTensor(amps / np.linalg.norm(amps), TripleKind.PURE_STATE)


def position_operator(cutoff: int, hbar=None) -> np.ndarray:
    """Truncated ``q = sqrt(hbar/2) (a + a^dag)``."""
    hbar = get_hbar(hbar)
    a = np.diag(np.sqrt(np.arange(1, cutoff)), 1)
    return np.sqrt(hbar / 2) * (a + a.T)


def cubic_phase_ket(gamma_over_hbar: float, r: float, cutoff: int, hbar=None) -> np.ndarray:
    """``exp(i gamma x^3 / (3 hbar)) S(r)|0>`` computed at ``cutoff`` without truncation fixes."""
    hbar = get_hbar(hbar)
    sq = hermite_renormalized(squeezed_vacuum_triple(r), [cutoff]).amps
    if gamma_over_hbar == 0:
        return sq
    q = position_operator(cutoff, hbar)
    gate = matrix_exp(1j * gamma_over_hbar / 3 * np.linalg.matrix_power(q, 3))
    return gate @ sq


def target_cubic(gamma_over_hbar: float = 0.3, r: float = -1.0, cutoff: int = 100, hbar=None,
                 oversample: int = 2, return_norm: bool = False):
    """Finite-energy cubic phase state truncated to ``cutoff``.

    The gate is built at ``oversample * cutoff`` so that truncation of ``x^3``
    does not leak into the kept amplitudes.

    Returns:
        FockTensor, or ``(FockTensor, norm)`` where ``norm`` is the norm before
        the final normalization when ``return_norm`` is set.
    """
    if cutoff < 1 or oversample < 1:
        raise ValueError("cutoff and oversample must be positive")
    big = cubic_phase_ket(gamma_over_hbar, r, oversample * cutoff, hbar)[:cutoff]
    norm = float(np.linalg.norm(big))
    ket = FockTensor(normalize(big), TripleKind.PURE_STATE)
    return (ket, norm) if return_norm else ket
