"""Phase-space description of Gaussian states, unitaries and channels.

All quadrature vectors use the ``xxpp`` ordering: the first ``M`` entries are
positions and the last ``M`` are momenta.  Covariance matrices carry units of
hbar, displacement vectors units of sqrt(hbar).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .settings import get_hbar

#: Tolerance on the uncertainty relation and on channel complete positivity.
PHYSICALITY_TOL = 1e-9
#: Tolerance on the symplectic condition of user supplied matrices.
SYMPLECTIC_TOL = 1e-9
#: Purity threshold used to classify a state as pure.
PURITY_TOL = 1e-6


def omega(num_modes: int) -> np.ndarray:
    r"""Symplectic form :math:`\Omega` in ``xxpp`` ordering."""
    eye = np.eye(num_modes)
    zero = np.zeros((num_modes, num_modes))
    return np.block([[zero, eye], [-eye, zero]])


def w_matrix(num_modes: int) -> np.ndarray:
    """Unitary mapping ladder operators to quadratures, ``r = sqrt(hbar) W z``."""
    eye = np.eye(num_modes)
    return np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2)


def xpxp_to_xxpp(num_modes: int) -> np.ndarray:
    """Index permutation that reorders an interleaved vector into ``xxpp``."""
    return np.concatenate([np.arange(0, 2 * num_modes, 2), np.arange(1, 2 * num_modes, 2)])


def is_symplectic(S, tol: float = SYMPLECTIC_TOL) -> bool:
    """Whether ``S`` satisfies ``S Omega S^T = Omega`` up to ``tol`` in Frobenius norm."""
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        return False
    if np.iscomplexobj(S) and np.abs(S.imag).max() > tol:
        return False
    om = omega(S.shape[0] // 2)
    return bool(np.linalg.norm(S @ om @ S.T - om) < tol)


def symplectic_defect(S) -> float:
    """Frobenius norm of ``S Omega S^T - Omega``."""
    S = np.asarray(S)
    om = omega(S.shape[0] // 2)
    return float(np.linalg.norm(S @ om @ S.T - om))


def _check_square(name, mat, size):
    if mat.shape != (size, size):
        raise ValueError(f"{name} must have shape {(size, size)}, got {mat.shape}")


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state given by its covariance matrix and mean vector.

    Args:
        cov: real symmetric ``2M x 2M`` covariance matrix.
        mean: real ``2M`` vector of means.
        hbar: value of hbar the moments are expressed in.
    """

    cov: np.ndarray
    mean: np.ndarray
    hbar: float = field(default_factory=get_hbar)

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        mean = np.array(self.mean, dtype=float).reshape(-1)
        if cov.ndim != 2 or cov.shape[0] % 2 or cov.shape[0] == 0:
            raise ValueError(f"covariance matrix must be 2M x 2M, got {cov.shape}")
        _check_square("cov", cov, cov.shape[0])
        if mean.shape != (cov.shape[0],):
            raise ValueError(f"mean vector must have length {cov.shape[0]}, got {mean.shape}")
        if np.linalg.norm(cov - cov.T) > PHYSICALITY_TOL * max(1.0, np.linalg.norm(cov)):
            raise ValueError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        hbar = get_hbar(self.hbar)
        M = cov.shape[0] // 2
        herm = cov + 0.5j * hbar * omega(M)
        if np.linalg.eigvalsh(herm).min() < -PHYSICALITY_TOL:
            raise ValueError("covariance matrix violates the uncertainty relation")
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "hbar", hbar)

    @property
    def num_modes(self) -> int:
        return self.cov.shape[0] // 2


@dataclass(frozen=True)
class ComplexState:
    """Gaussian state in the ladder-operator basis ``(sigma, mu)``."""

    sigma: np.ndarray
    mu: np.ndarray

    @property
    def num_modes(self) -> int:
        return self.sigma.shape[0] // 2


@dataclass(frozen=True)
class GaussianUnitary:
    """Gaussian unitary acting as ``r -> S r + d`` on the quadratures."""

    S: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        S = np.array(self.S, dtype=float)
        d = np.array(self.d, dtype=float).reshape(-1)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise ValueError(f"symplectic matrix must be 2M x 2M, got {S.shape}")
        if d.shape != (S.shape[0],):
            raise ValueError(f"displacement must have length {S.shape[0]}, got {d.shape}")
        if not is_symplectic(S, SYMPLECTIC_TOL):
            raise ValueError(f"matrix is not symplectic (defect {symplectic_defect(S):.2e})")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "d", d)

    @property
    def num_modes(self) -> int:
        return self.S.shape[0] // 2


@dataclass(frozen=True)
class GaussianChannel:
    """Gaussian channel ``(V, r) -> (X V X^T + Y, X r + d)``."""

    X: np.ndarray
    Y: np.ndarray
    d: np.ndarray
    hbar: float = field(default_factory=get_hbar)

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float)
        d = np.array(self.d, dtype=float).reshape(-1)
        if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] % 2:
            raise ValueError(f"X must be 2M x 2M, got {X.shape}")
        _check_square("Y", Y, X.shape[0])
        if d.shape != (X.shape[0],):
            raise ValueError(f"displacement must have length {X.shape[0]}, got {d.shape}")
        if np.linalg.norm(Y - Y.T) > PHYSICALITY_TOL * max(1.0, np.linalg.norm(Y)):
            raise ValueError("Y is not symmetric")
        Y = 0.5 * (Y + Y.T)
        hbar = get_hbar(self.hbar)
        om = omega(X.shape[0] // 2)
        herm = Y + 0.5j * hbar * om - 0.5j * hbar * X @ om @ X.T
        if np.linalg.eigvalsh(herm).min() < -PHYSICALITY_TOL:
            raise ValueError("(X, Y) do not define a completely positive channel")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "hbar", hbar)

    @property
    def num_modes(self) -> int:
        return self.X.shape[0] // 2


# ---------------------------------------------------------------------------
# states


def vacuum(num_modes: int, hbar: float | None = None) -> GaussianState:
    """Multimode vacuum, ``V = hbar/2 * 1``."""
    if num_modes < 1:
        raise ValueError("number of modes must be at least 1")
    hbar = get_hbar(hbar)
    return GaussianState(0.5 * hbar * np.eye(2 * num_modes), np.zeros(2 * num_modes), hbar)


def thermal_state(nbar, hbar: float | None = None) -> GaussianState:
    """Product of thermal states with mean photon numbers ``nbar``."""
    nbar = np.atleast_1d(np.asarray(nbar, dtype=float))
    if np.any(nbar < 0):
        raise ValueError("mean photon numbers must be non-negative")
    hbar = get_hbar(hbar)
    diag = np.concatenate([nbar, nbar]) + 0.5
    return GaussianState(hbar * np.diag(diag), np.zeros(2 * len(nbar)), hbar)


def coherent_state(alpha, hbar: float | None = None) -> GaussianState:
    """Product of coherent states ``|alpha>``."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    hbar = get_hbar(hbar)
    return apply_unitary(vacuum(len(alpha), hbar), displacement_gate(alpha, hbar))


def squeezed_vacuum(r, delta=0.0, hbar: float | None = None) -> GaussianState:
    """Single-mode squeezed vacuum ``S(r e^{i delta})|0>``."""
    return apply_unitary(vacuum(1, hbar), squeezer_gate(r, delta))


def quad_to_complex(state: GaussianState) -> ComplexState:
    """Moments in the ladder basis, ``sigma = W^dag V W / hbar``, ``mu = W^dag r / sqrt(hbar)``."""
    W = w_matrix(state.num_modes)
    sigma = W.conj().T @ state.cov @ W / state.hbar
    mu = W.conj().T @ state.mean / np.sqrt(state.hbar)
    return ComplexState(0.5 * (sigma + sigma.conj().T), mu)


def complex_to_quad(cstate: ComplexState, hbar: float | None = None) -> GaussianState:
    """Inverse of :func:`quad_to_complex`."""
    hbar = get_hbar(hbar)
    W = w_matrix(cstate.num_modes)
    cov = hbar * W @ cstate.sigma @ W.conj().T
    mean = np.sqrt(hbar) * W @ cstate.mu
    return GaussianState(cov.real, mean.real, hbar)


def purity(state: GaussianState) -> float:
    """Purity ``(hbar/2)^M / sqrt(det V)``."""
    det = np.linalg.det(state.cov)
    if det <= 0:
        raise ValueError("covariance matrix is singular")
    return float((0.5 * state.hbar) ** state.num_modes / np.sqrt(det))


def is_pure(state: GaussianState, tol: float = PURITY_TOL) -> bool:
    return abs(purity(state) - 1.0) < tol


# ---------------------------------------------------------------------------
# unitaries


def displacement_gate(gamma, hbar: float | None = None) -> GaussianUnitary:
    """Multimode displacement ``D(gamma)`` with ``d = sqrt(2 hbar) [Re gamma, Im gamma]``."""
    gamma = np.atleast_1d(np.asarray(gamma, dtype=complex))
    hbar = get_hbar(hbar)
    d = np.sqrt(2 * hbar) * np.concatenate([gamma.real, gamma.imag])
    return GaussianUnitary(np.eye(2 * len(gamma)), d)


def _rotation_matrix(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def rotation_gate(phi) -> GaussianUnitary:
    """Phase rotation ``exp(i phi a^dag a)``; an array of angles gives a product over modes."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    return interferometer_gate(np.diag(np.exp(1j * phi)))


def squeezer_gate(r: float, delta: float = 0.0) -> GaussianUnitary:
    """Single-mode squeezer ``S(r e^{i delta})``."""
    rot = _rotation_matrix(delta / 2)
    S = rot @ np.diag([np.exp(-r), np.exp(r)]) @ rot.T
    return GaussianUnitary(S, np.zeros(2))


def _passive_block(T):
    return np.block([[T.real, -T.imag], [T.imag, T.real]])


def interferometer_gate(U) -> GaussianUnitary:
    """Passive linear optics with mode unitary ``U``."""
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    if U.shape[0] != U.shape[1]:
        raise ValueError("interferometer matrix must be square")
    if np.linalg.norm(U.conj().T @ U - np.eye(len(U))) > 1e-10:
        raise ValueError("interferometer matrix is not unitary")
    return GaussianUnitary(_passive_block(U), np.zeros(2 * len(U)))


def beamsplitter_unitary(theta: float, phi: float) -> np.ndarray:
    """2x2 mode unitary of a beamsplitter with energy transmission ``cos^2 theta``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]])


def expand_symplectic(S, modes, num_modes: int) -> np.ndarray:
    """Embed a symplectic matrix acting on ``modes`` into ``num_modes`` modes."""
    S = np.asarray(S)
    modes = np.atleast_1d(modes)
    if S.shape != (2 * len(modes), 2 * len(modes)):
        raise ValueError("symplectic matrix does not match the number of modes")
    idx = np.concatenate([modes, modes + num_modes])
    out = np.eye(2 * num_modes, dtype=S.dtype)
    out[np.ix_(idx, idx)] = S
    return out


def compose_unitaries(first: GaussianUnitary, second: GaussianUnitary) -> GaussianUnitary:
    """Phase-space action of applying ``first`` and then ``second``."""
    return GaussianUnitary(second.S @ first.S, second.S @ first.d + second.d)


# ---------------------------------------------------------------------------
# channels


def loss_channel(eta: float, hbar: float | None = None) -> GaussianChannel:
    """Single-mode pure loss with energy transmission ``eta``."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmission must lie in [0, 1], got {eta}")
    hbar = get_hbar(hbar)
    eye = np.eye(2)
    return GaussianChannel(np.sqrt(eta) * eye, 0.5 * hbar * (1 - eta) * eye, np.zeros(2), hbar)


def amplifier_channel(g: float, hbar: float | None = None) -> GaussianChannel:
    """Single-mode phase-insensitive amplifier with gain ``g >= 1``."""
    if g < 1.0:
        raise ValueError(f"gain must be at least 1, got {g}")
    hbar = get_hbar(hbar)
    eye = np.eye(2)
    return GaussianChannel(np.sqrt(g) * eye, 0.5 * hbar * (g - 1) * eye, np.zeros(2), hbar)


def lossy_interferometer_channel(T, hbar: float | None = None) -> GaussianChannel:
    """Passive lossy network with transmission matrix ``T`` (singular values <= 1)."""
    T = np.atleast_2d(np.asarray(T, dtype=complex))
    if T.shape[0] != T.shape[1]:
        raise ValueError("transmission matrix must be square")
    if np.linalg.svd(T, compute_uv=False).max() > 1 + 1e-10:
        raise ValueError("transmission matrix has a singular value above 1")
    hbar = get_hbar(hbar)
    X = _passive_block(T)
    Y = 0.5 * hbar * (np.eye(len(X)) - X @ X.T)
    return GaussianChannel(X, Y, np.zeros(len(X)), hbar)


def unitary_channel(u: GaussianUnitary, hbar: float | None = None) -> GaussianChannel:
    """A Gaussian unitary viewed as a noiseless channel."""
    return GaussianChannel(u.S, np.zeros_like(u.S), u.d, get_hbar(hbar))


def apply_unitary(state: GaussianState, u: GaussianUnitary) -> GaussianState:
    if u.num_modes != state.num_modes:
        raise ValueError(f"mode mismatch: state has {state.num_modes}, unitary {u.num_modes}")
    return GaussianState(u.S @ state.cov @ u.S.T, u.S @ state.mean + u.d, state.hbar)


def apply_channel(state: GaussianState, c: GaussianChannel) -> GaussianState:
    if c.num_modes != state.num_modes:
        raise ValueError(f"mode mismatch: state has {state.num_modes}, channel {c.num_modes}")
    if not np.isclose(c.hbar, state.hbar):
        raise ValueError(f"hbar mismatch: state uses {state.hbar}, channel {c.hbar}")
    return GaussianState(c.X @ state.cov @ c.X.T + c.Y, c.X @ state.mean + c.d, state.hbar)
