import numpy as np
import pytest
from scipy.stats import unitary_group

from gfq.phase_space import omega


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_symmetric(rng, n, radius=0.9):
    """Complex symmetric matrix with largest eigenvalue modulus ``radius``."""
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = A + A.T
    return radius * A / np.abs(np.linalg.eigvals(A)).max()


def random_unitary(n, seed):
    return unitary_group.rvs(n, random_state=seed) if n > 1 else np.exp(2j * np.pi * np.random.default_rng(seed).random((1, 1)))


def random_symplectic_matrix(rng, num_modes, scale=0.3):
    from scipy.linalg import expm

    A = rng.normal(scale=scale, size=(2 * num_modes, 2 * num_modes))
    return expm(omega(num_modes) @ (A + A.T) / 2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
