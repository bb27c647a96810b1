import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfq import bargmann as bg
from gfq import phase_space as ps
from gfq.fock import hermite_renormalized
from conftest import random_symplectic_matrix, random_unitary


@pytest.mark.parametrize("nbar", [0.0, 0.5, 1.0, 3.0])
def test_thermal_triple(nbar):
    t = bg.triple_from_mixed(ps.thermal_state(nbar))
    assert np.allclose(t.A, nbar / (nbar + 1) * np.array([[0, 1], [1, 0]]), atol=1e-14)
    assert np.allclose(t.b, 0)
    assert t.c == pytest.approx(1 / (1 + nbar))


@pytest.mark.parametrize("r, eta", [(0.3, 0.9), (0.8, 0.5), (1.2, 0.2)])
@pytest.mark.parametrize("hbar", [1.0, 2.0])
def test_lossy_squeezed_triple(r, eta, hbar):
    state = ps.apply_channel(ps.apply_unitary(ps.vacuum(1, hbar), ps.squeezer_gate(r)), ps.loss_channel(eta, hbar))
    A = bg.triple_from_mixed(state).A
    coth = 1 / np.tanh(r)
    expected = eta / (coth**2 - (eta - 1) ** 2) * np.array([[-coth, 1 - eta], [1 - eta, -coth]])
    assert np.abs(A - expected).max() < 1e-12


@pytest.mark.parametrize("alpha, r, phi", [(0.3 + 0.2j, 0.5, 0.0), (-1.0 + 0.5j, 0.9, 1.3), (0.7j, 0.0, 0.4)])
def test_displaced_squeezed_pure_triple(alpha, r, phi):
    state = ps.apply_unitary(ps.squeezed_vacuum(r, phi), ps.displacement_gate(alpha))
    t = bg.triple_from_pure(state)
    assert t.A[0, 0] == pytest.approx(-np.tanh(r) * np.exp(1j * phi), abs=1e-12)
    assert t.b[0] == pytest.approx(alpha + np.conj(alpha) * np.exp(1j * phi) * np.tanh(r), abs=1e-12)


def test_coherent_pure_triple():
    alpha = 0.8 - 0.3j
    t = bg.triple_from_pure(ps.coherent_state(alpha))
    assert np.allclose(t.A, 0, atol=1e-14)
    assert t.b[0] == pytest.approx(alpha)
    assert t.c == pytest.approx(np.exp(-abs(alpha) ** 2 / 2))
    assert bg.triple_from_pure(ps.coherent_state(alpha), phase=0.7).c == pytest.approx(t.c * np.exp(0.7j))


def test_squeezed_modes_through_interferometer():
    r = np.array([0.3, 0.6, 0.9])
    U = random_unitary(3, 11)
    S = ps.interferometer_gate(U).S @ np.diag(np.concatenate([np.exp(-r), np.exp(r)]))
    t = bg.triple_from_pure(ps.apply_unitary(ps.vacuum(3), ps.GaussianUnitary(S, np.zeros(6))))
    assert np.abs(t.A - (-U @ np.diag(np.tanh(r)) @ U.T)).max() < 1e-12


def test_pure_rejects_mixed():
    with pytest.raises(ValueError):
        bg.triple_from_pure(ps.thermal_state(0.2))


def test_triple_validation():
    with pytest.raises(ValueError):
        bg.BargmannTriple([[0, 1], [0, 0]], [0, 0], 1.0)
    with pytest.raises(ValueError):
        bg.BargmannTriple([[1.5]], [0], 1.0, bg.TripleKind.PURE_STATE)
    with pytest.raises(ValueError):
        bg.BargmannTriple(0.5 * np.eye(2), [0, 0], 1.0, bg.TripleKind.UNITARY)
    with pytest.raises(ValueError):
        bg.BargmannTriple(np.zeros((3, 3)), np.zeros(3), 1.0, bg.TripleKind.MIXED_STATE)


def test_amplifier_triple():
    g = 2.0
    t = bg.triple_from_channel(ps.amplifier_channel(g))
    s, f = 1 / np.sqrt(g), (g - 1) / g
    expected = np.array([[0, s, f, 0], [s, 0, 0, 0], [f, 0, 0, s], [0, 0, s, 0]])
    assert np.abs(t.A - expected).max() < 1e-12
    assert np.allclose(t.b, 0) and t.c == pytest.approx(1 / g)


def lossy_t_closed_form(T):
    M = len(T)
    z, eye = np.zeros((M, M)), np.eye(M)
    return np.block(
        [
            [z, T.conj(), z, z],
            [T.conj().T, z, z, eye - T.conj().T @ T],
            [z, z, z, T],
            [z, eye - T.T @ T.conj(), T.T, z],
        ]
    )


@pytest.mark.parametrize("hbar", [1.0, 2.0])
def test_lossy_interferometer_triple(hbar):
    T = random_unitary(2, 4) @ np.diag([0.9, 0.4]) @ random_unitary(2, 5)
    t = bg.triple_from_channel(ps.lossy_interferometer_channel(T, hbar))
    assert np.abs(t.A - lossy_t_closed_form(T)).max() < 1e-12
    assert np.allclose(t.b, 0) and t.c == pytest.approx(1.0)


def test_identity_channel_triple():
    t = bg.triple_from_channel(ps.GaussianChannel(np.eye(2), np.zeros((2, 2)), np.zeros(2)))
    assert np.abs(t.A - lossy_t_closed_form(np.eye(1))).max() < 1e-14
    assert t.c == pytest.approx(1.0)


def test_loss_amplifier_duality():
    g = 2.0
    loss = bg.triple_from_channel(ps.loss_channel(1 / g)).A
    amp = bg.triple_from_channel(ps.amplifier_channel(g)).A
    perm = [1, 0, 3, 2]
    assert np.abs(loss[np.ix_(perm, perm)] - amp).max() < 1e-14


def test_fock_damping_tensor():
    beta = 0.5
    t = bg.fock_damping_triple(beta)
    amps = hermite_renormalized(t, 6).amps
    for k, l, i, j in itertools.product(range(6), repeat=4):
        expected = np.exp(-beta * (j + l)) if (i == j and k == l) else 0.0
        assert abs(amps[k, l, i, j] - expected) < 1e-14


@pytest.mark.parametrize(
    "channel",
    [ps.loss_channel(0.6), ps.amplifier_channel(1.5), ps.GaussianChannel(np.diag([0.9, 1.1]), np.diag([0.2, 0.3]), [0.2, -0.1])],
)
def test_channel_trace_preservation(channel):
    amps = hermite_renormalized(bg.triple_from_channel(channel), 30).amps
    for n in range(3):
        total = sum(amps[j, n, j, n] for j in range(30))
        assert abs(total - 1) < 1e-3


def test_unitary_triples_match_closed_forms():
    alpha = 0.4 - 0.9j
    d = bg.triple_from_unitary(ps.displacement_gate(alpha))
    ref = bg.displacement_triple(alpha)
    assert np.abs(d.A - ref.A).max() < 1e-12 and np.abs(d.b - ref.b).max() < 1e-12
    assert d.c == pytest.approx(ref.c)
    r, delta = 0.7, 1.1
    s = bg.triple_from_unitary(ps.squeezer_gate(r, delta))
    ref = bg.squeezer_triple(r, delta)
    assert np.abs(s.A - ref.A).max() < 1e-12 and np.allclose(s.b, 0)
    assert s.c == pytest.approx(1 / np.sqrt(np.cosh(r)))
    U = random_unitary(2, 9)
    w = bg.triple_from_unitary(ps.interferometer_gate(U))
    assert np.abs(w.A - bg.interferometer_triple(U).A).max() < 1e-12
    assert np.allclose(w.b, 0) and w.c == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(5))
def test_single_mode_unitary_against_decomposition(seed):
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.1, 1.5)
    p1, p2 = rng.uniform(0, 2 * np.pi, 2)
    S = ps.rotation_gate(p1).S @ np.diag([np.exp(-r), np.exp(r)]) @ ps.rotation_gate(p2).S
    t = bg.triple_from_unitary(ps.GaussianUnitary(S, np.zeros(2)))
    u1, u2 = np.exp(1j * p1), np.exp(1j * p2)
    th, sh = np.tanh(r), 1 / np.cosh(r)
    decomposed = np.array([[u1 * th * u1, -u1 * sh * u2], [-u2 * sh * u1, -u2 * th * u2]])
    # the decomposition formula carries the opposite overall sign
    assert np.abs(t.A - (-decomposed)).max() < 1e-12


def test_unitary_triple_is_unitary_and_fock_unitary(rng):
    S = random_symplectic_matrix(rng, 1, 0.3)
    t = bg.triple_from_unitary(ps.GaussianUnitary(S, [0.3, -0.2]))
    assert np.linalg.norm(t.A.conj().T @ t.A - np.eye(2)) < 1e-10
    U = hermite_renormalized(t, 30).amps
    block = (U.conj().T @ U)[:5, :5]
    assert np.abs(block - np.eye(5)).max() < 1e-3


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), phase=st.floats(-3, 3))
def test_unitary_symplectic_round_trip(seed, phase):
    rng = np.random.default_rng(seed)
    S = random_symplectic_matrix(rng, 2, 0.3)
    d = rng.normal(size=4)
    back = bg.unitary_triple_to_symplectic(bg.triple_from_unitary(ps.GaussianUnitary(S, d), phase))
    assert np.abs(back.S - S).max() < 1e-9
    assert np.abs(back.d - d).max() < 1e-9


@pytest.mark.parametrize("channel", [ps.loss_channel(0.5), ps.amplifier_channel(1.7),
                                     ps.lossy_interferometer_channel(0.8 * random_unitary(2, 2))])
def test_choi_state_matches_phase_space(channel):
    t = 0.6
    via_triple = bg.choi_state_triple(channel, t)
    via_moments = bg.triple_from_mixed(bg.choi_state_phase_space(channel, t))
    assert np.abs(via_triple.A - via_moments.A).max() < 1e-12
    assert np.abs(via_triple.b - via_moments.b).max() < 1e-12
    assert via_triple.c == pytest.approx(via_moments.c, abs=1e-12)


def test_choi_recovery_is_t_independent():
    ch = ps.GaussianChannel(np.sqrt(0.5) * np.eye(2), 0.5 * np.eye(2), [0.3, 0.1])
    a = bg.channel_from_choi_triple(bg.choi_state_triple(ch, 0.5), 0.5)
    b = bg.channel_from_choi_triple(bg.choi_state_triple(ch, 1.0), 1.0)
    assert np.abs(a.A - b.A).max() < 1e-10 and np.abs(a.b - b.b).max() < 1e-10
    assert abs(a.c - b.c) < 1e-10
    assert bg.choi_state_triple(ch, 0.5).c / bg.triple_from_channel(ch).c == pytest.approx(1 - np.tanh(0.5) ** 2)
    with pytest.raises(ValueError):
        bg.choi_state_triple(ch, 0.0)


def test_permanent_small():
    assert bg.permanent(np.zeros((0, 0))) == 1
    m = np.arange(1, 10).reshape(3, 3).astype(float)
    brute = sum(np.prod([m[i, p[i]] for i in range(3)]) for p in itertools.permutations(range(3)))
    assert bg.permanent(m) == pytest.approx(brute)


@pytest.mark.parametrize("i, j, expected", [((1,), (1,), 0.3), ((1,), (0,), 0.7), ((0,), (0,), 1.0), ((0,), (1,), 0.0)])
def test_passive_probability_single_mode(i, j, expected):
    assert bg.passive_probability([[np.sqrt(0.3)]], i, j) == pytest.approx(expected)


def test_passive_probability_identity_and_lossless():
    assert bg.passive_probability(np.eye(2), (1, 0), (1, 0)) == pytest.approx(1.0)
    U = random_unitary(2, 7)
    i, j = (2, 1), (1, 2)
    idx_i, idx_j = np.repeat([0, 1], i), np.repeat([0, 1], j)
    lossless = abs(bg.permanent(U[np.ix_(idx_j, idx_i)])) ** 2 / (2 * 1 * 1 * 2)
    assert bg.passive_probability(U, i, j) == pytest.approx(lossless)
    with pytest.raises(ValueError):
        bg.passive_probability(np.eye(2), (20, 0), (0, 20))
