"""Entangling strategy layer over the two strategy bits.

Player and dealer each hold one strategy qubit, prepared as |p d> =
|01> (player stands by default, dealer draws).  An EWL-style
entangler J = cos(gamma/2) I - i sin(gamma/2) X(x)U wraps the player's
local move S: the circuit applies J, then S on the player bit, then
J^dagger.  Measuring the two bits afterwards selects one of four play
regimes:

* 01 - player stands, dealer draws (classical stand);
* 11 - player hits, dealer draws (classical hit);
* 00 - player stands, dealer frozen after the hole card;
* 10 - player hits, dealer frozen.

U = sin(theta) X + cos(theta) Z sets which regimes the entangled
component can reach.  gamma = 0 turns the layer off, so Y acts like X
and Z like the identity.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from .oracle import GameParams, PayoffQuadruple, StrategyOp
from .qsim import Field, OneQubit, RegisterLayout, SparseState, TwoQubit, apply

#: Player strategy bit is the high bit of the two-bit outcome.
STRATEGY_LAYOUT = RegisterLayout([
    Field("d_strategy", 0, 1),
    Field("p_strategy", 1, 1),
])

#: Initial strategy-bit assignment |p d> = |01>.
INITIAL_KEY = 0b01

STRATEGY_MATRICES: dict[StrategyOp, np.ndarray] = {
    StrategyOp.I: np.eye(2, dtype=complex),
    StrategyOp.X: np.array([[0, 1], [1, 0]], dtype=complex),
    StrategyOp.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    StrategyOp.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

#: Quadruple field observed by each two-bit outcome (p<<1)|d.
REGIME_FIELDS: dict[int, str] = {
    0b01: "e_std",
    0b11: "e_hit",
    0b00: "e_00",
    0b10: "e_10",
}

Strategy = Union[StrategyOp, np.ndarray]


def strategy_matrix(strategy: Strategy) -> np.ndarray:
    if isinstance(strategy, StrategyOp):
        return STRATEGY_MATRICES[strategy]
    return np.asarray(strategy, dtype=complex)


def entangler_u(theta: float) -> np.ndarray:
    """The dealer-side unitary steering the entangled component."""
    return (
        math.sin(theta) * STRATEGY_MATRICES[StrategyOp.X]
        + math.cos(theta) * STRATEGY_MATRICES[StrategyOp.Z]
    )


def build_entangler(params: GameParams) -> tuple[np.ndarray, np.ndarray]:
    """(J, J^dagger) on the player(x)dealer strategy bits."""
    half = params.gamma / 2.0
    j = (
        math.cos(half) * np.eye(4, dtype=complex)
        - 1j * math.sin(half) * np.kron(STRATEGY_MATRICES[StrategyOp.X], entangler_u(params.theta))
    )
    return j, j.conj().T


def _targets() -> tuple[int, int]:
    p = STRATEGY_LAYOUT.field("p_strategy").offset
    d = STRATEGY_LAYOUT.field("d_strategy").offset
    return (p, d)


def strategy_post_state(strategy: Strategy, params: GameParams) -> np.ndarray:
    """Post-protocol state J^dagger (S (x) I) J |01> as a length-4 vector.

    Runs through the sparse simulator gate by gate; index order is
    (player bit << 1) | dealer bit.
    """
    j, j_dag = build_entangler(params)
    targets = _targets()
    state = SparseState.basis(INITIAL_KEY, STRATEGY_LAYOUT.n_qubits)
    state = apply(state, TwoQubit(j, targets))
    state = apply(state, OneQubit(strategy_matrix(strategy), targets[0]))
    state = apply(state, TwoQubit(j_dag, targets))
    vec = np.zeros(4, dtype=complex)
    for key, amp in state.items():
        vec[key] = amp
    return vec


def outcome_distribution(strategy: Strategy, params: GameParams) -> np.ndarray:
    """Measurement probabilities of the four two-bit outcomes."""
    vec = strategy_post_state(strategy, params)
    probs = np.abs(vec) ** 2
    total = probs.sum()
    if not math.isclose(total, 1.0, abs_tol=1e-9):
        raise ValueError(f"post-state norm drifted to {total}")
    return probs / total


def expected_payoff(quad: PayoffQuadruple, strategy: Strategy, params: GameParams) -> float:
    """Protocol expectation of one strategy against one initial class."""
    probs = outcome_distribution(strategy, params)
    return float(
        sum(probs[o] * float(getattr(quad, f)) for o, f in REGIME_FIELDS.items())
    )
