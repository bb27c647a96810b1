"""Time-domain GBS interferometers of Borealis type and flattening of their A matrix."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BS_PHASE = np.pi / 2


@dataclass
class BorealisCircuit:
    """Layers of beamsplitters between modes ``i`` and ``i + tau``.

    Layer ``l`` uses ``tau = base**l`` and starts with a rotation on mode 0.

    Args:
        base: ``d``.
        depth: ``D``; the circuit has ``M = d**D`` modes.
        r: squeezing of every input mode.
        thetas: per layer, ``M - tau`` beamsplitter angles.
        phis: per layer rotation angle on mode 0.
    """

    base: int
    depth: int
    r: float = float(np.arcsinh(1.0))
    thetas: list = field(default_factory=list)
    phis: np.ndarray | None = None

    def __post_init__(self):
        if self.base < 2 or self.depth < 1:
            raise ValueError("need base >= 2 and depth >= 1")
        M = self.num_modes
        if not self.thetas:
            self.thetas = [np.zeros(M - t) for t in self.taus]
        self.thetas = [np.asarray(t, dtype=float) for t in self.thetas]
        for t, th in zip(self.taus, self.thetas):
            if th.shape != (M - t,):
                raise ValueError(f"layer with tau={t} needs {M - t} angles, got {th.shape}")
        self.phis = np.zeros(self.depth) if self.phis is None else np.asarray(self.phis, dtype=float)
        if self.phis.shape != (self.depth,):
            raise ValueError(f"need {self.depth} rotation angles")

    @property
    def num_modes(self) -> int:
        return self.base**self.depth

    @property
    def taus(self) -> list:
        return [self.base**layer for layer in range(self.depth)]

    @property
    def bs_params(self) -> list:
        """``(mode, tau, theta)`` for every beamsplitter in application order."""
        out = []
        for tau, th in zip(self.taus, self.thetas):
            out.extend((i, tau, float(t)) for i, t in enumerate(th))
        return out

    def get_params(self) -> np.ndarray:
        return np.concatenate([np.concatenate(self.thetas), self.phis])

    def with_params(self, params) -> "BorealisCircuit":
        params = np.asarray(params, dtype=float)
        thetas, pos = [], 0
        for tau in self.taus:
            n = self.num_modes - tau
            thetas.append(params[pos:pos + n])
            pos += n
        return BorealisCircuit(self.base, self.depth, self.r, thetas, params[pos:pos + self.depth])

    @classmethod
    def random(cls, base, depth, rng=None, r=float(np.arcsinh(1.0))):
        """Angles uniform in ``[-pi/2, pi/2]``."""
        rng = np.random.default_rng(rng)
        M = base**depth
        thetas = [rng.uniform(-np.pi / 2, np.pi / 2, M - base**layer) for layer in range(depth)]
        phis = rng.uniform(-np.pi / 2, np.pi / 2, depth)
        return cls(base, depth, r, thetas, phis)

    def gates(self):
        """Yield ``(kind, i, j, angle)``; ``kind`` is ``"rot"`` or ``"bs"``."""
        for layer, tau in enumerate(self.taus):
            yield "rot", 0, 0, self.phis[layer]
            for i, th in enumerate(self.thetas[layer]):
                yield "bs", i, i + tau, th


def _bs_block(theta):
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * BS_PHASE)
    return np.array([[c, -np.conj(e) * s], [e * s, c]])


def _bs_block_derivative(theta):
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * BS_PHASE)
    return np.array([[-s, -np.conj(e) * c], [e * c, -s]])


def circuit_unitary(circuit: BorealisCircuit) -> np.ndarray:
    """Mode unitary ``U = B_K ... B_1`` of the whole circuit."""
    M = circuit.num_modes
    U = np.eye(M, dtype=complex)
    for kind, i, j, ang in circuit.gates():
        if kind == "rot":
            U[i] *= np.exp(1j * ang)
        else:
            U[[i, j]] = _bs_block(ang) @ U[[i, j]]
    return U


def build_borealis_A(circuit: BorealisCircuit) -> np.ndarray:
    """``A = -U diag(tanh r) U^T`` of the output state."""
    U = circuit_unitary(circuit)
    A = -np.tanh(circuit.r) * U @ U.T
    return 0.5 * (A + A.T)


def flatness_cost(A) -> float:
    """``sum_ij (|A_ij|^2 - mean |A|^2)^2``."""
    P = np.abs(np.asarray(A)) ** 2
    return float(np.sum((P - P.mean()) ** 2))


def flatness_cost_and_grad(circuit: BorealisCircuit):
    """Cost and its gradient with respect to :meth:`BorealisCircuit.get_params`.

    Reverse sweep over the gate list: with ``df = Re tr(H dU)`` the derivative
    for gate ``k`` is ``Re tr(Pre_k H Post_k dB_k)``, where ``Pre_k`` is the
    product of the gates before ``k`` and ``Post_k`` of those after.
    """
    gates = list(circuit.gates())
    U = circuit_unitary(circuit)
    t = np.tanh(circuit.r)
    A = -t * U @ U.T
    P = np.abs(A) ** 2
    cost = float(np.sum((P - P.mean()) ** 2))
    G = 4 * (P - P.mean()) * A.conj()
    H = -2 * t * U.T @ G
    pre = U.copy()
    Q = H.copy()
    grads = np.zeros(len(gates))
    for k in range(len(gates) - 1, -1, -1):
        kind, i, j, ang = gates[k]
        if kind == "rot":
            pre[i] *= np.exp(-1j * ang)
            grads[k] = np.real(pre[i] @ Q[:, i] * 1j * np.exp(1j * ang))
            Q[:, i] *= np.exp(1j * ang)
        else:
            B = _bs_block(ang)
            pre[[i, j]] = B.conj().T @ pre[[i, j]]
            X = pre[[i, j]] @ Q[:, [i, j]]
            grads[k] = np.real(np.trace(X @ _bs_block_derivative(ang)))
            Q[:, [i, j]] = Q[:, [i, j]] @ B
    # reorder from gate order to (thetas..., phis)
    theta_grads, phi_grads = [], []
    for g, (kind, *_rest) in zip(grads, gates):
        (phi_grads if kind == "rot" else theta_grads).append(g)
    return cost, np.array(theta_grads + phi_grads)


def flatness_fd_grad(circuit: BorealisCircuit, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient of the flatness cost."""
    p = circuit.get_params()
    out = np.zeros_like(p)
    for k in range(len(p)):
        e = np.zeros_like(p)
        e[k] = h
        out[k] = (flatness_cost(build_borealis_A(circuit.with_params(p + e)))
                  - flatness_cost(build_borealis_A(circuit.with_params(p - e)))) / (2 * h)
    return out


def abs_histogram(A, bins: int = 64, value_range=None):
    """Histogram of ``|A_ij|``; returns ``(counts, edges)``."""
    vals = np.abs(np.asarray(A)).ravel()
    return np.histogram(vals, bins=bins, range=value_range)
