import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfq import bargmann as bg
from gfq import fock
from gfq import phase_space as ps
from conftest import random_symmetric


def test_coherent_closed_form():
    psi = fock.hermite_renormalized(bg.coherent_triple(1.0), [10]).amps
    expected = [np.exp(-0.5) / math.sqrt(math.factorial(k)) for k in range(10)]
    assert np.allclose(psi, expected, atol=1e-15)


def test_squeezed_vacuum_odd_zero():
    psi = fock.hermite_renormalized(bg.squeezed_vacuum_triple(0.5), [20]).amps
    assert np.all(psi[1::2] == 0)


def test_first_order_is_c_times_b(rng):
    A = random_symmetric(rng, 3)
    b = rng.normal(size=3) + 1j * rng.normal(size=3)
    G = fock.recurrence(A, b, 0.3 - 0.1j, [2, 2, 2])
    for i in range(3):
        k = [0, 0, 0]
        k[i] = 1
        assert G[tuple(k)] == pytest.approx((0.3 - 0.1j) * b[i])
    assert G[0, 0, 0] == 0.3 - 0.1j


@pytest.mark.parametrize(
    "k, expected",
    [((0, 0), lambda A, b: 1.0), ((1, 1), lambda A, b: b[0] * b[1] + A[0, 1]), ((2, 0), lambda A, b: b[0] ** 2 + A[0, 0])],
)
def test_loop_hafnian_oracle_examples(rng, k, expected):
    A = random_symmetric(rng, 2)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert fock.loop_hafnian_oracle(A, b, k) == pytest.approx(expected(A, b))


def test_oracle_budget():
    with pytest.raises(ValueError):
        fock.loop_hafnian_oracle(np.zeros((1, 1)), [0], [9])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), ell=st.integers(1, 3))
def test_recurrence_matches_oracle(seed, ell):
    rng = np.random.default_rng(seed)
    A = random_symmetric(rng, ell, 0.8)
    b = rng.normal(size=ell) + 1j * rng.normal(size=ell)
    c = 0.5 + 0.2j
    G = fock.recurrence(A, b, c, [5] * ell)
    for k in fock.index_weight_iter(ell, 4):
        ref = fock.loop_hafnian_oracle(A, b, k)
        val = fock.sqrt_factorial(k) * G[k] / c
        assert abs(val - ref) <= 1e-10 * max(1.0, abs(ref))


def test_diagonal_scaling_property(rng):
    A = random_symmetric(rng, 2)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    E = np.array([0.7, -1.3 + 0.2j])
    G1 = fock.recurrence(E[:, None] * A * E[None, :], E * b, 1.0, [5, 5])
    G0 = fock.recurrence(A, b, 1.0, [5, 5])
    for k in fock.index_weight_iter(2, 4):
        assert G1[k] == pytest.approx(E[0] ** k[0] * E[1] ** k[1] * G0[k], rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("nbar", [0.5, 2.0])
def test_thermal_tensor(nbar):
    rho = fock.hermite_renormalized(bg.triple_from_mixed(ps.thermal_state(nbar)), [30, 30]).amps
    expected = np.diag([nbar**k / (nbar + 1) ** (k + 1) for k in range(30)])
    assert np.abs(rho - expected).max() < 1e-12


def test_mixed_tensor_hermitian_and_pure_consistency(rng):
    state = ps.apply_unitary(ps.squeezed_vacuum(0.4, 0.3), ps.displacement_gate(0.5 - 0.2j))
    noisy = ps.apply_channel(state, ps.loss_channel(0.8))
    amps = fock.hermite_renormalized(bg.triple_from_mixed(noisy), [15, 15])
    assert np.abs(amps.amps - amps.amps.conj().T).max() < 1e-12
    psi = fock.hermite_renormalized(bg.triple_from_pure(state), [15]).amps
    rho = fock.hermite_renormalized(bg.triple_from_mixed(state), [15, 15])
    assert np.abs(rho.density_matrix() - np.outer(psi, psi.conj())).max() < 1e-12


@pytest.mark.parametrize("alpha, r", [(1.0, 0.0), (0.8j, 0.5), (0.5, 0.9)])
def test_normalization(alpha, r):
    state = ps.apply_unitary(ps.squeezed_vacuum(r), ps.displacement_gate(alpha))
    psi = fock.hermite_renormalized(bg.triple_from_pure(state), [40])
    assert abs(fock.state_probability(psi) - 1) < 1e-6
    assert fock.tail_mass(psi) < 1e-6


def test_zero_cutoff_rejected():
    with pytest.raises(ValueError):
        fock.hermite_renormalized(bg.coherent_triple(0.1), [0])


def test_vjp_indicator_at_zero():
    t = bg.coherent_triple(0.5)
    G = fock.hermite_renormalized(t, [6])
    u = np.zeros(6, complex)
    u[0] = 1.0
    g = fock.fock_vjp(t, G, u)
    assert g.dc == pytest.approx(1.0) and np.allclose(g.db, 0) and np.allclose(g.dA, 0)


def _fd_triple_grad(A, b, c, cutoffs, u, h=1e-6):
    L = lambda A_, b_, c_: np.sum(u * fock.recurrence(A_, b_, c_, cutoffs))
    ell = len(b)
    dA = np.zeros((ell, ell), complex)
    for i in range(ell):
        for j in range(i, ell):
            E = np.zeros((ell, ell))
            E[i, j] = E[j, i] = 1
            val = (L(A + h * E, b, c) - L(A - h * E, b, c)) / (2 * h)
            dA[i, j] = dA[j, i] = val if i == j else val / 2
    db = np.array([(L(A, b + h * e, c) - L(A, b - h * e, c)) / (2 * h) for e in np.eye(ell)])
    dc = (L(A, b, c + h) - L(A, b, c - h)) / (2 * h)
    return dA, db, dc


@pytest.mark.parametrize("seed", range(5))
def test_vjp_against_finite_differences(seed):
    rng = np.random.default_rng(seed)
    ell = 2
    A = random_symmetric(rng, ell, 0.7)
    b = rng.normal(size=ell) + 1j * rng.normal(size=ell)
    c = 0.8 + 0.1j
    cut = [6, 5]
    u = rng.normal(size=cut) + 1j * rng.normal(size=cut)
    g = fock.fock_vjp((A, b, c), fock.recurrence(A, b, c, cut), u)
    dA, db, dc = _fd_triple_grad(A, b, c, cut, u)
    scale = max(np.abs(dA).max(), np.abs(db).max(), abs(dc))
    assert np.abs(g.dA - dA).max() < 1e-6 * scale
    assert np.abs(g.db - db).max() < 1e-6 * scale
    assert abs(g.dc - dc) < 1e-6 * scale
    assert np.allclose(g.dA, g.dA.T)


def test_coherent_probability_gradient():
    alpha = 1.0
    L = lambda a: abs(fock.recurrence(np.zeros((1, 1)), [a], np.exp(-abs(a) ** 2 / 2), [4])[1]) ** 2
    A, b, c = np.zeros((1, 1)), np.array([alpha], complex), np.exp(-0.5)
    G = fock.recurrence(A, b, c, [4])
    up = np.zeros(4, complex)
    up[1] = np.conj(G[1])
    g = fock.fock_vjp((A, b, c), G, up)
    # b only, with c held fixed: dL/db for real b is 2 Re[g.db]
    Lb = lambda x: abs(fock.recurrence(A, [x], c, [4])[1]) ** 2
    fd = (Lb(alpha + 1e-6) - Lb(alpha - 1e-6)) / 2e-6
    assert 2 * g.db[0].real == pytest.approx(fd, rel=1e-6)
    assert L(1.0) == pytest.approx(np.exp(-1.0))


def test_vjp_shape_mismatch():
    t = bg.coherent_triple(0.2)
    with pytest.raises(ValueError):
        fock.fock_vjp(t, fock.hermite_renormalized(t, [4]), np.zeros(5))


def test_project_product_state():
    a, b = bg.coherent_triple(0.4), bg.coherent_triple(0.3j)
    joint = bg.BargmannTriple(np.zeros((2, 2)), np.concatenate([a.b, b.b]), a.c * b.c, bg.TripleKind.PURE_STATE)
    G = fock.hermite_renormalized(joint, [10, 10])
    psi_a = fock.hermite_renormalized(a, [10]).amps
    psi_b = fock.hermite_renormalized(b, [10]).amps
    out, prob = fock.project_fock(G, {1: 0})
    assert np.allclose(out.amps, psi_b[0] * psi_a)
    assert prob == pytest.approx(abs(psi_b[0]) ** 2 * np.sum(abs(psi_a) ** 2))
    scalar, p = fock.project_fock(G, {0: 2, 1: 1})
    assert scalar.amps.shape == () and p == pytest.approx(abs(G.amps[2, 1]) ** 2)
    with pytest.raises(ValueError):
        fock.project_fock(G, {1: 10})


def test_project_two_mode_squeezed_heralds_fock_state():
    lam = 0.5
    tms = bg.BargmannTriple([[0, lam], [lam, 0]], [0, 0], np.sqrt(1 - lam**2), bg.TripleKind.PURE_STATE)
    G = fock.hermite_renormalized(tms, [8, 8])
    out, prob = fock.project_fock(G, {1: 3})
    assert fock.fidelity(out, np.eye(8)[3]) == pytest.approx(1.0)
    assert prob == pytest.approx((1 - lam**2) * lam**6)


def test_fidelity_utilities():
    x = np.array([0.3, 0.4j, 0.1])
    assert fock.fidelity(x, x) == pytest.approx(1.0)
    assert fock.fidelity(np.eye(3)[0], np.eye(3)[1]) == 0.0
    assert fock.state_probability(fock.normalize(x)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fock.normalize(np.zeros(3))
    with pytest.raises(ValueError):
        fock.fidelity(np.ones(2), np.ones(3))


def test_fock_tensor_json_round_trip():
    t = fock.hermite_renormalized(bg.coherent_triple([0.2, 0.1j]), [3, 4])
    back = fock.FockTensor.from_json(t.to_json())
    assert back.cutoffs == (3, 4) and np.array_equal(back.amps, t.amps)


def test_stability_report():
    good = fock.hermite_renormalized(bg.coherent_triple(0.5), [30])
    rep = fock.stability_report(good)
    assert rep["finite"] and rep["growth"] < 1e-10
    bad = fock.hermite_renormalized(bg.coherent_triple(6.0), [10])
    assert fock.stability_report(bad)["growth"] > 0.1
