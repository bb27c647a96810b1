"""Riemannian gradient descent on the symplectic and unitary groups.

Real-parameter gradients of a cost ``L`` that depends on complex amplitudes
``G`` follow ``dL/dtheta = 2 Re[sum_k (dL/dG_k) (dG_k/dtheta)]`` where
``dL/dG_k`` is the Wirtinger derivative holding ``G*`` fixed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .bargmann import pure_triple_arrays
from .fock import fock_vjp, recurrence
from .phase_space import omega, symplectic_defect
from .settings import get_hbar

MANIFOLD_TOL = 1e-8


def matrix_exp(A) -> np.ndarray:
    """Matrix exponential (scaling and squaring with a Pade approximant)."""
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix exponential of a non-finite matrix")
    out = expm(A)
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix exponential overflowed")
    return out


@dataclass(frozen=True)
class SymplecticPoint:
    S: np.ndarray

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        defect = symplectic_defect(S)
        if defect >= MANIFOLD_TOL:
            raise ValueError(f"point left the symplectic group (defect {defect:.2e})")
        object.__setattr__(self, "S", S)


@dataclass(frozen=True)
class UnitaryPoint:
    M: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.M, dtype=complex)
        defect = np.linalg.norm(M.conj().T @ M - np.eye(len(M)))
        if defect >= MANIFOLD_TOL:
            raise ValueError(f"point left the unitary group (defect {defect:.2e})")
        object.__setattr__(self, "M", M)


@dataclass
class OptimizerConfig:
    """Hyperparameters of :func:`optimize`.

    Args:
        symplectic_lr: step size ``t`` of the geodesic update.
        euclidean_lr: step size of the displacement update.
        max_steps: step budget.
        seed: seed of the random initialization.
        fd_step: central difference step for the triple-map Jacobian.
        plateau_tol: cost change regarded as no progress.
        plateau_steps: consecutive no-progress steps that stop the run.
        geodesic: ``"exact"`` for the true geodesic, ``"literal"`` for the
            update ``S exp(-tY) exp(-t(Y - Y^T))``.
    """

    symplectic_lr: float = 0.1
    euclidean_lr: float = 0.1
    max_steps: int = 150
    seed: int = 7
    fd_step: float = 1e-6
    plateau_tol: float = 1e-9
    plateau_steps: int = 20
    geodesic: str = "exact"

    def __post_init__(self):
        if self.symplectic_lr <= 0 or self.euclidean_lr <= 0:
            raise ValueError("learning rates must be positive")
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")
        if self.geodesic not in ("exact", "literal"):
            raise ValueError(f"unknown geodesic variant {self.geodesic!r}")


# ---------------------------------------------------------------------------
# gradients and steps


def _sp_algebra_part(S, euclid_grad):
    om = omega(S.shape[0] // 2)
    Z = S.T @ euclid_grad
    return 0.5 * (Z + om @ Z.T @ om)


def riemannian_grad_sp(S, euclid_grad) -> np.ndarray:
    """Riemannian gradient on ``Sp(2n, R)`` for the left-invariant metric."""
    S = np.asarray(S, dtype=float)
    return S @ _sp_algebra_part(S, np.asarray(euclid_grad, dtype=float))


def riemannian_grad_u(M, euclid_grad) -> np.ndarray:
    """Riemannian gradient on ``U(n)``."""
    M = np.asarray(M, dtype=complex)
    Z = M.conj().T @ np.asarray(euclid_grad, dtype=complex)
    return M @ (0.5 * (Z - Z.conj().T))


def geodesic_step_sp(S, euclid_grad, t: float, variant: str = "exact") -> SymplecticPoint:
    """Move from ``S`` along the geodesic against the Riemannian gradient.

    Args:
        S: current symplectic matrix.
        euclid_grad: Euclidean gradient ``dL/dS``.
        t: step length.
        variant: ``"exact"`` uses ``S exp(-t Y^T) exp(-t (Y - Y^T))``, whose
            first-order direction is minus the Riemannian gradient;
            ``"literal"`` uses ``S exp(-t Y) exp(-t (Y - Y^T))``.

    Returns:
        The updated point.
    """
    S = np.asarray(S, dtype=float)
    Y = _sp_algebra_part(S, np.asarray(euclid_grad, dtype=float))
    first = Y.T if variant == "exact" else Y
    new = S @ matrix_exp(-t * first) @ matrix_exp(-t * (Y - Y.T))
    return SymplecticPoint(new)


def geodesic_step_u(M, euclid_grad, t: float) -> UnitaryPoint:
    M = np.asarray(M, dtype=complex)
    Z = M.conj().T @ np.asarray(euclid_grad, dtype=complex)
    Y = 0.5 * (Z - Z.conj().T)
    return UnitaryPoint(M @ matrix_exp(-t * Y))


def euclidean_step(d, grad, lr: float) -> np.ndarray:
    return np.asarray(d) - lr * np.asarray(grad)


def random_symplectic(num_modes: int, rng=None, scale: float = 0.25) -> np.ndarray:
    """``exp(Omega A)`` with ``A`` symmetric, entries drawn from ``N(0, scale^2)``."""
    rng = np.random.default_rng(rng)
    n = 2 * num_modes
    A = rng.normal(0.0, scale, size=(n, n))
    A = np.triu(A) + np.triu(A, 1).T
    return matrix_exp(omega(num_modes) @ A)


# ---------------------------------------------------------------------------
# cost over Fock amplitudes


def pure_state_map(hbar=None):
    """``(S, d) -> triple`` of the pure state ``D(d) S |0>``, unvalidated."""
    hbar = get_hbar(hbar)

    def fn(S, d):
        cov = 0.5 * hbar * S @ S.T
        return pure_triple_arrays(cov, d, hbar)

    return fn


@dataclass
class FockCost:
    """Cost defined on the Fock amplitudes of a Gaussian object built from ``(S, d)``.

    Args:
        cutoffs: Fock cutoffs of the generated tensor.
        amplitude_cost: maps the amplitude array to ``(cost, dcost/dG)``.
        triple_map: maps ``(S, d)`` to raw ``(A, b, c)``; defaults to the
            pure state ``D(d) S |0>``.
    """

    cutoffs: tuple
    amplitude_cost: Callable
    triple_map: Callable = field(default_factory=pure_state_map)

    def amplitudes(self, S, d):
        A, b, c = self.triple_map(S, d)
        return recurrence(A, b, c, self.cutoffs)

    def value(self, S, d) -> float:
        return float(self.amplitude_cost(self.amplitudes(S, d))[0])


def _triple_jacobian_contract(triple_map, S, d, grad, fd_step, train_d):
    """Contract the triple-map Jacobian with the triple cotangent by central differences."""
    gA, gb, gc = grad.dA, grad.db, grad.dc

    def directional(dS, dd):
        Ap, bp, cp = triple_map(S + fd_step * dS, d + fd_step * dd)
        Am, bm, cm = triple_map(S - fd_step * dS, d - fd_step * dd)
        val = np.sum(gA * (Ap - Am)) + gb @ (bp - bm) + gc * (cp - cm)
        return 2.0 * np.real(val) / (2.0 * fd_step)

    n = S.shape[0]
    dS = np.zeros_like(S)
    zero_d = np.zeros_like(d)
    for i in range(n):
        for j in range(n):
            E = np.zeros_like(S)
            E[i, j] = 1.0
            dS[i, j] = directional(E, zero_d)
    dd = np.zeros_like(d)
    if train_d:
        zero_S = np.zeros_like(S)
        for i in range(len(d)):
            e = np.zeros_like(d)
            e[i] = 1.0
            dd[i] = directional(zero_S, e)
    return dS, dd


def value_and_grad(cost: FockCost, S, d, fd_step: float = 1e-6, train_d: bool = True):
    """Cost and Euclidean gradients ``(L, dL/dS, dL/dd)``."""
    S = np.asarray(S, dtype=float)
    d = np.asarray(d, dtype=float)
    A, b, c = cost.triple_map(S, d)
    G = recurrence(A, b, c, cost.cutoffs)
    L, upstream = cost.amplitude_cost(G)
    if not np.isfinite(L):
        raise FloatingPointError(f"non-finite cost {L}")
    grad = fock_vjp((A, b, c), G, upstream)
    dS, dd = _triple_jacobian_contract(cost.triple_map, S, d, grad, fd_step, train_d)
    return float(L), dS, dd


def euclidean_cost_grad(problem, S, d, fd_step: float = 1e-6):
    """Euclidean gradients ``(dL/dS, dL/dd)`` of a Fock-amplitude cost."""
    cost = problem.cost if isinstance(problem, OptimizationProblem) else problem
    _, dS, dd = value_and_grad(cost, S, d, fd_step)
    return dS, dd


# ---------------------------------------------------------------------------
# optimization loop


@dataclass
class OptimizationProblem:
    """What to optimize.

    Args:
        cost: a :class:`FockCost`, or a callable ``(S, d) -> (L, dL/dS, dL/dd)``.
        S0: initial symplectic matrix.
        d0: initial displacement; zeros if omitted.
        train_d: whether displacements are updated.
    """

    cost: object
    S0: np.ndarray
    d0: np.ndarray | None = None
    train_d: bool = False

    def value_and_grad(self, S, d, fd_step):
        if isinstance(self.cost, FockCost):
            return value_and_grad(self.cost, S, d, fd_step, self.train_d)
        return self.cost(S, d)


@dataclass
class Trajectory:
    costs: list
    wall_ms: list
    S: np.ndarray
    d: np.ndarray
    best_cost: float
    best_S: np.ndarray
    best_d: np.ndarray
    stopped: str

    def to_rows(self):
        return [(i, c, w) for i, (c, w) in enumerate(zip(self.costs, self.wall_ms))]


def optimize(problem: OptimizationProblem, config: OptimizerConfig, callback=None) -> Trajectory:
    """Plain geodesic gradient descent.

    The run stops after ``config.max_steps`` updates or once the cost changed
    by less than ``plateau_tol`` for ``plateau_steps`` consecutive steps.
    ``costs[i]`` is the cost before update ``i``; the last entry is the cost at
    the returned point.
    """
    S = SymplecticPoint(problem.S0).S
    d = np.zeros(S.shape[0]) if problem.d0 is None else np.asarray(problem.d0, dtype=float).copy()
    costs, wall = [], []
    best = (np.inf, S, d)
    flat = 0
    stopped = "max_steps"
    start = time.perf_counter()
    for step in range(config.max_steps + 1):
        L, dS, dd = problem.value_and_grad(S, d, config.fd_step)
        if not np.isfinite(L):
            raise FloatingPointError(f"cost became {L} at step {step}")
        costs.append(L)
        wall.append(1e3 * (time.perf_counter() - start))
        if callback is not None:
            callback(step, L, S, d)
        if L < best[0]:
            best = (L, S.copy(), d.copy())
        if step and abs(costs[-1] - costs[-2]) < config.plateau_tol:
            flat += 1
            if flat >= config.plateau_steps:
                stopped = "plateau"
                break
        else:
            flat = 0
        if step == config.max_steps:
            break
        S = geodesic_step_sp(S, dS, config.symplectic_lr, config.geodesic).S
        if problem.train_d:
            d = euclidean_step(d, dd, config.euclidean_lr)
    return Trajectory(costs, wall, S, d, best[0], best[1], best[2], stopped)


__all__ = [
    "FockCost",
    "OptimizationProblem",
    "OptimizerConfig",
    "SymplecticPoint",
    "Trajectory",
    "UnitaryPoint",
    "euclidean_cost_grad",
    "euclidean_step",
    "geodesic_step_sp",
    "geodesic_step_u",
    "matrix_exp",
    "optimize",
    "pure_state_map",
    "random_symplectic",
    "riemannian_grad_sp",
    "riemannian_grad_u",
    "value_and_grad",
]
