"""Bargmann triples ``(A, b, c)`` of Gaussian states, unitaries and channels.

Index conventions:

* pure state, ``l = M``: ``psi_k``.
* mixed state, ``l = 2M``: index ``n + m`` with ``n`` on the bra side, so the
  generated tensor holds ``<m|rho|n>`` at ``[n, m]``.
* unitary, ``l = 2M``: ``<i|U|j>`` at ``[i, j]`` (output index first).
* channel, ``l = 4M``: ``<i|Phi[|j><l|]|k>`` at ``[k, l, i, j]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import ryser_permanent
from .phase_space import (
    GaussianChannel,
    GaussianState,
    GaussianUnitary,
    is_pure,
    purity,
    quad_to_complex,
)
from .settings import get_hbar

SYMMETRY_TOL = 1e-10
NORMALIZABLE_TOL = 1e-9
UNITARY_TOL = 1e-8
STRUCTURE_TOL = 1e-8
#: Largest permanent size handled exactly by :func:`passive_probability`.
MAX_PERMANENT_SIZE = 26


class TripleKind(enum.Enum):
    PURE_STATE = "pure_state"
    MIXED_STATE = "mixed_state"
    UNITARY = "unitary"
    CHANNEL = "channel"

    def num_modes(self, ell: int) -> int:
        return ell // {"pure_state": 1, "mixed_state": 2, "unitary": 2, "channel": 4}[self.value]


@dataclass(frozen=True)
class BargmannTriple:
    """Complex symmetric ``A``, vector ``b`` and scalar ``c`` of a Gaussian object.

    ``kind=None`` gives an unconstrained triple, useful for raw polynomial work.
    """

    A: np.ndarray
    b: np.ndarray
    c: complex
    kind: TripleKind | None = None

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        A = np.atleast_2d(A) if A.size else A.reshape(0, 0)
        b = np.array(self.b, dtype=complex).reshape(-1)
        ell = A.shape[0]
        if A.shape != (ell, ell):
            raise ValueError(f"A must be square, got {A.shape}")
        if b.shape != (ell,):
            raise ValueError(f"b must have length {ell}, got {b.shape}")
        if ell and np.abs(A - A.T).max() > SYMMETRY_TOL * max(1.0, np.abs(A).max()):
            raise ValueError("A is not symmetric")
        A = 0.5 * (A + A.T)
        kind = self.kind
        if kind is not None:
            div = {TripleKind.PURE_STATE: 1, TripleKind.MIXED_STATE: 2,
                   TripleKind.UNITARY: 2, TripleKind.CHANNEL: 4}[kind]
            if ell == 0 or ell % div:
                raise ValueError(f"size {ell} is incompatible with kind {kind.value}")
            if kind in (TripleKind.PURE_STATE, TripleKind.MIXED_STATE):
                if np.linalg.norm(A, 2) ** 2 > 1 + NORMALIZABLE_TOL:
                    raise ValueError("A is not normalizable (largest singular value above 1)")
            if kind is TripleKind.UNITARY:
                if np.linalg.norm(A.conj().T @ A - np.eye(ell)) > UNITARY_TOL:
                    raise ValueError("A of a unitary must itself be unitary")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", complex(self.c))

    @property
    def ell(self) -> int:
        return self.A.shape[0]

    @property
    def num_modes(self) -> int:
        if self.kind is None:
            return self.ell
        return self.kind.num_modes(self.ell)


@dataclass(frozen=True)
class ChoiAux:
    """Auxiliary matrices entering the channel triple."""

    R: np.ndarray
    xi: np.ndarray
    P: np.ndarray


def principal_sqrt(z) -> complex:
    """Square root with positive real part, non-negative imaginary part on the cut."""
    s = np.sqrt(complex(z))
    if abs(s.real) < 1e-12 and s.imag < 0:
        s = -s
    return complex(s)


def p_matrix(num_modes: int) -> np.ndarray:
    """Block swap ``[[0, 1], [1, 0]]`` of size ``2M``."""
    eye = np.eye(num_modes)
    zero = np.zeros_like(eye)
    return np.block([[zero, eye], [eye, zero]])


def r_matrix(num_modes: int) -> np.ndarray:
    """Unitary ``4M x 4M`` change of basis used by the channel triple."""
    eye = np.eye(num_modes)
    z = np.zeros_like(eye)
    R = np.block(
        [
            [eye, 1j * eye, z, z],
            [z, z, eye, -1j * eye],
            [eye, -1j * eye, z, z],
            [z, z, eye, 1j * eye],
        ]
    )
    return R / np.sqrt(2)


def choi_aux(ch: GaussianChannel) -> ChoiAux:
    M = ch.num_modes
    xi = 0.5 * (np.eye(2 * M) + ch.X @ ch.X.T + 2 * ch.Y / ch.hbar)
    return ChoiAux(r_matrix(M), 0.5 * (xi + xi.T), p_matrix(2 * M))


# ---------------------------------------------------------------------------
# states


def mixed_triple_arrays(cov, mean, hbar):
    """Unvalidated mixed-state triple from raw moments.

    Returns:
        Tuple ``(A, b, c)`` as numpy objects.
    """
    cov = np.asarray(cov)
    mean = np.asarray(mean)
    M = cov.shape[0] // 2
    eye = np.eye(M)
    W = np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2)
    sigma = W.conj().T @ cov @ W / hbar
    mu = W.conj().T @ mean / np.sqrt(hbar)
    sigma_plus = sigma + 0.5 * np.eye(2 * M)
    inv = np.linalg.inv(sigma_plus)
    P = p_matrix(M)
    A = P @ (np.eye(2 * M) - inv)
    b = P @ inv @ mu
    c = np.exp(-0.5 * mu.conj() @ inv @ mu) / np.sqrt(np.linalg.det(sigma_plus))
    return 0.5 * (A + A.T), b, c


def pure_triple_arrays(cov, mean, hbar, phase=0.0):
    """Unvalidated pure-state triple (ket block of the mixed triple)."""
    A_rho, b_rho, c_rho = mixed_triple_arrays(cov, mean, hbar)
    M = A_rho.shape[0] // 2
    c = np.exp(1j * phase) * np.sqrt(c_rho.real)
    return A_rho[M:, M:], b_rho[M:], c


def triple_from_mixed(state: GaussianState) -> BargmannTriple:
    """Triple of a (possibly mixed) Gaussian density matrix via the Cayley transform."""
    cs = quad_to_complex(state)
    sigma_plus = cs.sigma + 0.5 * np.eye(2 * state.num_modes)
    if np.linalg.cond(sigma_plus) > 1e12:
        raise np.linalg.LinAlgError("sigma + 1/2 is numerically singular")
    A, b, c = mixed_triple_arrays(state.cov, state.mean, state.hbar)
    return BargmannTriple(A, b, c.real, TripleKind.MIXED_STATE)


def triple_from_pure(state: GaussianState, phase: float = 0.0) -> BargmannTriple:
    """Triple of a pure Gaussian state vector with global phase ``exp(i phase)``."""
    if not is_pure(state):
        raise ValueError(f"state is not pure (purity {purity(state):.8f})")
    rho = triple_from_mixed(state)
    M = state.num_modes
    A_bra, A_ket = rho.A[:M, :M], rho.A[M:, M:]
    if np.abs(A_bra - A_ket.conj()).max() > STRUCTURE_TOL or np.abs(rho.A[:M, M:]).max() > STRUCTURE_TOL:
        raise ValueError("mixed-state triple does not split into ket and bra blocks")
    c = np.exp(1j * phase) * principal_sqrt(rho.c)
    return BargmannTriple(A_ket, rho.b[M:], c, TripleKind.PURE_STATE)


# ---------------------------------------------------------------------------
# channels and unitaries


def channel_triple_arrays(X, Y, d, hbar):
    """Unvalidated channel triple."""
    X = np.asarray(X, dtype=float)
    M = X.shape[0] // 2
    xi = 0.5 * (np.eye(2 * M) + X @ X.T + 2 * np.asarray(Y) / hbar)
    xi_inv = np.linalg.inv(xi)
    eye = np.eye(2 * M)
    K = np.block([[eye - xi_inv, xi_inv @ X], [X.T @ xi_inv, eye - X.T @ xi_inv @ X]])
    R = r_matrix(M)
    A = p_matrix(2 * M) @ R @ K @ R.conj().T
    d = np.asarray(d, dtype=float)
    b = R.conj() @ np.concatenate([xi_inv @ d, -X.T @ xi_inv @ d]) / np.sqrt(hbar)
    c = np.exp(-0.5 * d @ xi_inv @ d / hbar) / np.sqrt(np.linalg.det(xi))
    return 0.5 * (A + A.T), b, c


def unitary_triple_arrays(S, d, hbar, phase=0.0):
    """Unvalidated unitary triple, the ket block of the unitary channel triple."""
    A, b, c = channel_triple_arrays(S, np.zeros_like(S), d, hbar)
    n = A.shape[0] // 2
    return A[n:, n:], b[n:], np.exp(1j * phase) * np.sqrt(c)


def triple_from_channel(ch: GaussianChannel) -> BargmannTriple:
    """Triple of a Gaussian channel ``(X, Y, d)``."""
    aux = choi_aux(ch)
    if np.linalg.cond(aux.xi) > 1e12:
        raise np.linalg.LinAlgError("xi is numerically singular")
    A, b, c = channel_triple_arrays(ch.X, ch.Y, ch.d, ch.hbar)
    return BargmannTriple(A, b, c, TripleKind.CHANNEL)


def triple_from_unitary(u: GaussianUnitary, phase: float = 0.0, hbar: float | None = None) -> BargmannTriple:
    """Triple of a Gaussian unitary with global phase ``exp(i phase)``."""
    hbar = get_hbar(hbar)
    ch = GaussianChannel(u.S, np.zeros_like(u.S), u.d, hbar)
    phi = triple_from_channel(ch)
    n = 2 * u.num_modes
    cross = np.abs(phi.A[:n, n:]).max()
    if cross > STRUCTURE_TOL:
        raise ValueError(f"channel triple of a unitary has cross blocks of size {cross:.2e}")
    A_U = phi.A[n:, n:]
    if np.abs(phi.A[:n, :n] - A_U.conj()).max() > STRUCTURE_TOL:
        raise ValueError("channel triple blocks are not complex conjugates")
    if np.abs(phi.b[:n] - phi.b[n:].conj()).max() > STRUCTURE_TOL:
        raise ValueError("channel vector halves are not complex conjugates")
    c = np.exp(1j * phase) * principal_sqrt(phi.c)
    return BargmannTriple(A_U, phi.b[n:], c, TripleKind.UNITARY)


def unitary_triple_to_symplectic(u: BargmannTriple, hbar: float | None = None) -> GaussianUnitary:
    """Recover the phase-space action ``(S, d)`` of a unitary triple."""
    if u.kind is not TripleKind.UNITARY:
        raise ValueError("expected a unitary triple")
    hbar = get_hbar(hbar)
    M = u.num_modes
    n = 2 * M
    A_phi = np.zeros((2 * n, 2 * n), dtype=complex)
    A_phi[:n, :n] = u.A.conj()
    A_phi[n:, n:] = u.A
    b_phi = np.concatenate([u.b.conj(), u.b])
    R = r_matrix(M)
    K = R.conj().T @ p_matrix(n) @ A_phi @ R
    xi_inv = np.eye(n) - K[:n, :n]
    S = np.linalg.solve(xi_inv, K[:n, n:])
    top = np.sqrt(hbar) * (R.T @ b_phi)[:n]
    d = np.linalg.solve(xi_inv, top)
    return GaussianUnitary(S.real, d.real)


# ---------------------------------------------------------------------------
# closed forms


def coherent_triple(alpha) -> BargmannTriple:
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    M = len(alpha)
    return BargmannTriple(np.zeros((M, M)), alpha, np.exp(-0.5 * np.sum(np.abs(alpha) ** 2)),
                          TripleKind.PURE_STATE)


def vacuum_triple(num_modes: int) -> BargmannTriple:
    return coherent_triple(np.zeros(num_modes))


def squeezed_vacuum_triple(r: float, phi: float = 0.0) -> BargmannTriple:
    return BargmannTriple([[-np.exp(1j * phi) * np.tanh(r)]], [0.0], 1 / np.sqrt(np.cosh(r)),
                          TripleKind.PURE_STATE)


def displacement_triple(alpha) -> BargmannTriple:
    """Closed-form triple of ``D(alpha)``."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    M = len(alpha)
    eye = np.eye(M)
    zero = np.zeros((M, M))
    A = np.block([[zero, eye], [eye, zero]])
    b = np.concatenate([alpha, -alpha.conj()])
    return BargmannTriple(A, b, np.exp(-0.5 * np.sum(np.abs(alpha) ** 2)), TripleKind.UNITARY)


def squeezer_triple(r: float, delta: float = 0.0) -> BargmannTriple:
    """Closed-form triple of the single-mode squeezer ``S(r e^{i delta})``."""
    t, s = np.tanh(r), 1 / np.cosh(r)
    A = [[-np.exp(1j * delta) * t, s], [s, np.exp(-1j * delta) * t]]
    return BargmannTriple(A, [0.0, 0.0], np.sqrt(s), TripleKind.UNITARY)


def interferometer_triple(U) -> BargmannTriple:
    """Closed-form triple of the passive unitary ``W(U)``; ``c`` is exactly 1."""
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    M = len(U)
    if np.linalg.norm(U.conj().T @ U - np.eye(M)) > 1e-10:
        raise ValueError("interferometer matrix is not unitary")
    zero = np.zeros((M, M))
    return BargmannTriple(np.block([[zero, U], [U.T, zero]]), np.zeros(2 * M), 1.0, TripleKind.UNITARY)


def rotation_triple(phi) -> BargmannTriple:
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    return interferometer_triple(np.diag(np.exp(1j * phi)))


def fock_damping_triple(beta: float, num_modes: int = 1) -> BargmannTriple:
    """Channel triple of ``rho -> exp(-beta n) rho exp(-beta n)``."""
    eye = np.eye(num_modes)
    z = np.zeros_like(eye)
    pair = np.block([[z, eye], [eye, z]])
    A = np.exp(-beta) * np.block([[pair, np.zeros_like(pair)], [np.zeros_like(pair), pair]])
    return BargmannTriple(A, np.zeros(4 * num_modes), 1.0, TripleKind.CHANNEL)


# ---------------------------------------------------------------------------
# Choi states


def _e_diag(num_modes: int, t: float) -> np.ndarray:
    tau = np.tanh(t)
    one = np.ones(num_modes)
    return np.concatenate([one, tau * one, one, tau * one])


def choi_state_triple(ch: GaussianChannel, t: float) -> BargmannTriple:
    """Triple of the Choi state obtained by sending half of a two-mode squeezed
    vacuum with squeezing ``t`` through ``ch``.

    The modes of the resulting ``2M``-mode state are ordered (output, reference).
    """
    if t <= 0:
        raise ValueError("squeezing parameter must be positive")
    phi = triple_from_channel(ch)
    e = _e_diag(ch.num_modes, t)
    A = e[:, None] * phi.A * e[None, :]
    c = (1 - np.tanh(t) ** 2) ** ch.num_modes * phi.c
    return BargmannTriple(A, e * phi.b, c, TripleKind.MIXED_STATE)


def channel_from_choi_triple(choi: BargmannTriple, t: float) -> BargmannTriple:
    """Undo the scaling of :func:`choi_state_triple`."""
    M = choi.ell // 4
    e = _e_diag(M, t)
    A = choi.A / e[:, None] / e[None, :]
    c = choi.c / (1 - np.tanh(t) ** 2) ** M
    return BargmannTriple(A, choi.b / e, c, TripleKind.CHANNEL)


def choi_state_phase_space(ch: GaussianChannel, t: float) -> GaussianState:
    """Phase-space moments of the Choi state of ``ch`` (modes ordered output, reference)."""
    M = ch.num_modes
    hbar = ch.hbar
    ch2, sh2 = np.cosh(2 * t), np.sinh(2 * t)
    eye = np.eye(M)
    q_block = np.block([[ch2 * eye, sh2 * eye], [sh2 * eye, ch2 * eye]])
    p_block = np.block([[ch2 * eye, -sh2 * eye], [-sh2 * eye, ch2 * eye]])
    z = np.zeros_like(q_block)
    V = 0.5 * hbar * np.block([[q_block, z], [z, p_block]])
    idx = np.concatenate([np.arange(M), 2 * M + np.arange(M)])
    X = np.eye(4 * M)
    Y = np.zeros((4 * M, 4 * M))
    X[np.ix_(idx, idx)] = ch.X
    Y[np.ix_(idx, idx)] = ch.Y
    mean = np.zeros(4 * M)
    mean[idx] = ch.d
    return GaussianState(X @ V @ X.T + Y, mean, hbar)


# ---------------------------------------------------------------------------
# passive processes


def permanent(mat) -> complex:
    """Permanent of a square matrix (Ryser's formula)."""
    mat = np.ascontiguousarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("permanent needs a square matrix")
    return complex(ryser_permanent(mat))


def passive_probability(T, i, j) -> float:
    """Probability of output pattern ``j`` given input Fock state ``|i>`` in a
    lossy interferometer with transmission matrix ``T``.

    Args:
        T: complex ``M x M`` transmission matrix, singular values at most 1.
        i: input photon numbers.
        j: output photon numbers.

    Returns:
        The transition probability.
    """
    T = np.atleast_2d(np.asarray(T, dtype=complex))
    M = len(T)
    i = np.asarray(i, dtype=int).reshape(-1)
    j = np.asarray(j, dtype=int).reshape(-1)
    if i.shape != (M,) or j.shape != (M,) or np.any(i < 0) or np.any(j < 0):
        raise ValueError("patterns must be non-negative integer vectors of length M")
    if np.linalg.svd(T, compute_uv=False).max() > 1 + 1e-10:
        raise ValueError("transmission matrix has a singular value above 1")
    size = int(i.sum() + j.sum())
    if size > MAX_PERMANENT_SIZE:
        raise ValueError(f"pattern needs a {size}x{size} permanent, above the limit {MAX_PERMANENT_SIZE}")
    big = np.block([[np.eye(M) - T.conj().T @ T, T.conj().T], [T, np.zeros((M, M))]])
    idx = np.repeat(np.arange(2 * M), np.concatenate([i, j]))
    norm = math.prod(math.factorial(int(x)) for x in np.concatenate([i, j]))
    return float(permanent(big[np.ix_(idx, idx)]).real / norm)


__all__ = [
    "BargmannTriple",
    "ChoiAux",
    "TripleKind",
    "channel_from_choi_triple",
    "choi_aux",
    "choi_state_phase_space",
    "choi_state_triple",
    "coherent_triple",
    "displacement_triple",
    "fock_damping_triple",
    "interferometer_triple",
    "passive_probability",
    "permanent",
    "rotation_triple",
    "squeezed_vacuum_triple",
    "squeezer_triple",
    "triple_from_channel",
    "triple_from_mixed",
    "triple_from_pure",
    "triple_from_unitary",
    "unitary_triple_to_symplectic",
    "vacuum_triple",
]
