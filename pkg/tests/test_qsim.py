"""Sparse simulator: gates, measurement, invariants."""

import math
import random

import numpy as np
import pytest
from scipy.stats import chisquare, unitary_group

from snackjack.qsim import (
    GAME_LAYOUT,
    ConfigurationError,
    Field,
    OneQubit,
    PredicatedPermutation,
    RegisterLayout,
    SimulationError,
    SparseState,
    TwoQubit,
    apply,
    expectation_probe,
    measure,
)

H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def test_game_layout():
    assert GAME_LAYOUT.n_qubits == 37
    assert GAME_LAYOUT.field("deck").offset == 0
    assert GAME_LAYOUT.field("d_strategy").offset == 36
    assert GAME_LAYOUT.field("control").width == 3
    with pytest.raises(ConfigurationError):
        GAME_LAYOUT.field("nope")


def test_layout_rejects_overlap():
    with pytest.raises(ConfigurationError):
        RegisterLayout([Field("a", 0, 4), Field("b", 3, 2)])


def test_field_helpers():
    f = Field("x", 4, 3)
    key = f.insert(0, 0b101)
    assert key == 0b101 << 4
    assert f.extract(key) == 0b101
    assert f.bits == (4, 5, 6)


def test_basis_and_norm():
    s = SparseState.basis(0b101, 3)
    assert s.support == 1
    assert s.norm_sq() == 1.0
    with pytest.raises(ConfigurationError):
        SparseState.basis(8, 3)


def test_non_unitary_rejected():
    with pytest.raises(ConfigurationError):
        OneQubit(np.array([[1, 0], [0, 2]]), 0)
    with pytest.raises(ConfigurationError):
        TwoQubit(np.eye(4) * 0.5, (0, 1))
    with pytest.raises(ConfigurationError):
        TwoQubit(np.eye(4), (1, 1))


def test_hadamard_and_cnot_make_bell_pair():
    s = SparseState.basis(0b00, 2)
    s = apply(s, OneQubit(H, 1))
    s = apply(s, TwoQubit(CNOT, (1, 0)))
    amps = dict(s.items())
    assert set(amps) == {0b00, 0b11}
    for a in amps.values():
        assert a == pytest.approx(1 / math.sqrt(2))
    probe = expectation_probe(s, (0, 1))
    assert probe == {0b00: pytest.approx(0.5), 0b11: pytest.approx(0.5)}


def test_permutation_swap_and_flip():
    gate = PredicatedPermutation(
        predicate=lambda k: bool(k & 1), swaps=((1, 2),), flips=(3,)
    )
    s = SparseState.basis(0b0011, 4)
    s = apply(s, gate)
    assert set(dict(s.items())) == {0b1101}
    # applied twice it returns to the start
    s = apply(s, gate)
    assert set(dict(s.items())) == {0b0011}


def test_permutation_predicate_must_not_touch_moved_bits():
    gate = PredicatedPermutation(
        predicate=lambda k: bool(k & 0b10), swaps=((1, 2),)
    )
    s = SparseState.basis(0b010, 3)
    with pytest.raises(SimulationError):
        apply(s, gate)


def test_norm_drift_over_many_gates():
    rng = np.random.default_rng(11)
    s = SparseState.basis(0b0000, 4)
    for i in range(1000):
        if rng.random() < 0.5:
            gate = OneQubit(
                unitary_group.rvs(2, random_state=rng), int(rng.integers(4))
            )
        else:
            a = int(rng.integers(4))
            b = (a + 1 + int(rng.integers(3))) % 4
            gate = TwoQubit(unitary_group.rvs(4, random_state=rng), (a, b))
        s = apply(s, gate)
    assert abs(s.norm_sq() - 1.0) < 1e-9


def test_measurement_statistics_chi_square():
    # |psi|^2 = 9/25, 16/25 via a rotation
    angle = math.asin(4 / 5)
    rot = np.array(
        [[math.cos(angle), -math.sin(angle)],
         [math.sin(angle), math.cos(angle)]],
        dtype=complex,
    )
    base = apply(SparseState.basis(0, 1), OneQubit(rot, 0))
    rng = random.Random(5)
    counts = {0: 0, 1: 0}
    n = 100_000
    for _ in range(n):
        outcome, _ = measure(base, (0,), rng)
        counts[outcome] += 1
    stat, p = chisquare(
        [counts[0], counts[1]], [n * 9 / 25, n * 16 / 25]
    )
    assert p > 1e-3


def test_measure_collapses_and_renormalizes():
    s = apply(SparseState.basis(0, 2), OneQubit(H, 0))
    s = apply(s, OneQubit(H, 1))
    outcome, collapsed = measure(s, (0,), random.Random(3))
    assert outcome in (0, 1)
    assert collapsed.norm_sq() == pytest.approx(1.0)
    for key in dict(collapsed.items()):
        assert (key & 1) == outcome


def test_measurement_determinism():
    def run(seed):
        rng = random.Random(seed)
        s = SparseState.basis(0, 3)
        for q in range(3):
            s = apply(s, OneQubit(H, q))
        outcomes = []
        for q in range(3):
            o, s = measure(s, (q,), rng)
            outcomes.append(o)
        return outcomes

    assert run(42) == run(42)
    runs = {tuple(run(seed)) for seed in range(20)}
    assert len(runs) > 1


def test_probe_is_exact_for_uniform_superpositions():
    s = SparseState.basis(0, 3)
    for q in range(3):
        s = apply(s, OneQubit(H, q))
    probe = expectation_probe(s, (0, 1, 2))
    assert sorted(probe) == list(range(8))
    assert all(p == 0.125 for p in probe.values())


def test_support_guard():
    s = SparseState({k: 0.5 for k in range(4)}, 13)
    amp = 1.0 / math.sqrt(5000)
    big = SparseState({k: amp for k in range(5000)}, 13)
    gate = OneQubit(H, 12)
    apply(s, gate)  # fine
    with pytest.raises(SimulationError):
        apply(big, gate)
