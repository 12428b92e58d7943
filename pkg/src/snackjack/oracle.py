"""Exact snackjack expectations over the sixteen initial classes.

Everything here is combinatorial: payoffs are enumerated over
uniformly ordered deals of the eight distinguishable cards and kept as
`fractions.Fraction`, so downstream tables and regression constants
are exact, not sampled.

Each class carries four conditional expectations:

* ``e_std``  - player stands, dealer plays out her full drawing rule;
* ``e_hit``  - player draws one card, dealer plays out;
* ``e_00``   - player stands and the dealer freezes after the hole
  card (draws nothing further);
* ``e_10``   - player draws one card, dealer freezes after the hole.

The frozen variants only arise through the entangling protocol: they
are the payoffs of the two computational outcomes that have no
classical move attached.  ``ewl_payoffs`` mixes the four according to
the protocol's entangling angle gamma and its unitary angle theta, and
``overall_expectation`` weighs the per-class best over the deal
distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .rules import (
    DEALER_STANDS_ON,
    INITIAL_CLASSES,
    RANK_COUNTS,
    Hand,
    HandValue,
    InitialStateClass,
    Rank,
    hand_value,
    settle_values,
)

Number = Union[Fraction, float]

#: Tolerance for snapping an angle to one whose squared sine/cosine is exact.
ANGLE_SNAP = 1e-12

_FULL_COUNTS = (RANK_COUNTS[Rank.ACE], RANK_COUNTS[Rank.TWO], RANK_COUNTS[Rank.THREE])
_RANKS = (Rank.ACE, Rank.TWO, Rank.THREE)


class StrategyOp(Enum):
    """Single-qubit strategy unitaries the player may submit."""

    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def order(self) -> int:
        return "IXYZ".index(self.value)

    def __lt__(self, other: "StrategyOp") -> bool:
        return self.order < other.order


STRATEGY_ORDER: tuple[StrategyOp, ...] = (
    StrategyOp.I, StrategyOp.X, StrategyOp.Y, StrategyOp.Z,
)
CLASSICAL_OPS: tuple[StrategyOp, ...] = (StrategyOp.I, StrategyOp.X)


@dataclass(frozen=True)
class GameParams:
    """Protocol angles, both limited to the first quadrant."""

    gamma: float
    theta: float

    def __post_init__(self) -> None:
        for name, value in (("gamma", self.gamma), ("theta", self.theta)):
            if not -ANGLE_SNAP <= value <= math.pi / 2 + ANGLE_SNAP:
                raise ValueError(f"{name} must lie in [0, pi/2], got {value}")


@dataclass(frozen=True)
class PayoffQuadruple:
    """The four conditional expectations of one initial class."""

    e_std: Fraction
    e_hit: Fraction
    e_00: Fraction
    e_10: Fraction


@lru_cache(maxsize=None)
def _counts_value(n_ace: int, n_two: int, n_three: int) -> HandValue:
    """Hand value from rank multiplicities (slot identity is irrelevant)."""
    slots = []
    slots += [0, 1][:n_ace]
    slots += [2, 3][:n_two]
    slots += [4, 5, 6, 7][:n_three]
    return hand_value(Hand.of(*slots))


def _draws(deck: tuple[int, int, int]) -> Iterable[tuple[int, Fraction]]:
    """(rank index, probability) of the next uniform draw."""
    total = sum(deck)
    for i, n in enumerate(deck):
        if n:
            yield i, Fraction(n, total)


def _bump(counts: tuple[int, int, int], i: int, delta: int) -> tuple[int, int, int]:
    out = list(counts)
    out[i] += delta
    return tuple(out)  # type: ignore[return-value]


@lru_cache(maxsize=None)
def _dealer_outcomes(
    up: Rank, deck: tuple[int, int, int], frozen: bool
) -> tuple[tuple[HandValue, Fraction], ...]:
    """Distribution of the dealer's final value.

    The dealer always takes the hole card.  With ``frozen`` she stops
    there; otherwise she keeps drawing while her total is below 6.
    """
    results: dict[HandValue, Fraction] = {}

    def settle_leaf(value: HandValue, p: Fraction) -> None:
        results[value] = results.get(value, Fraction(0)) + p

    def drawing(counts: tuple[int, int, int], deck_now: tuple[int, int, int], p: Fraction) -> None:
        value = _counts_value(*counts)
        if frozen or value.bust or value.total >= DEALER_STANDS_ON:
            settle_leaf(value, p)
            return
        for i, q in _draws(deck_now):
            drawing(_bump(counts, i, 1), _bump(deck_now, i, -1), p * q)

    up_counts = _bump((0, 0, 0), _RANKS.index(up), 1)
    for i, q in _draws(deck):
        drawing(_bump(up_counts, i, 1), _bump(deck, i, -1), q)
    return tuple(results.items())


def _expect_vs_dealer(player: HandValue, up: Rank, deck: tuple[int, int, int], frozen: bool) -> Fraction:
    return sum(
        (settle_values(player, dv) * p for dv, p in _dealer_outcomes(up, deck, frozen)),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def enumerate_quadruple(cls: InitialStateClass) -> PayoffQuadruple:
    """Exact conditional payoffs of one initial class."""
    player = (0, 0, 0)
    for r in cls.player_ranks:
        player = _bump(player, _RANKS.index(r), 1)
    deck = _FULL_COUNTS
    for r in (*cls.player_ranks, cls.up_rank):
        deck = _bump(deck, _RANKS.index(r), -1)

    stand_value = _counts_value(*player)

    def hit_expect(frozen: bool) -> Fraction:
        total = Fraction(0)
        for i, q in _draws(deck):
            drawn = _counts_value(*_bump(player, i, 1))
            if drawn.bust:
                total += q * -1
            else:
                total += q * _expect_vs_dealer(drawn, cls.up_rank, _bump(deck, i, -1), frozen)
        return total

    return PayoffQuadruple(
        e_std=_expect_vs_dealer(stand_value, cls.up_rank, deck, frozen=False),
        e_hit=hit_expect(frozen=False),
        e_00=_expect_vs_dealer(stand_value, cls.up_rank, deck, frozen=True),
        e_10=hit_expect(frozen=True),
    )


def quadruples() -> tuple[PayoffQuadruple, ...]:
    """Payoff quadruples for all sixteen classes in row order."""
    return tuple(enumerate_quadruple(c) for c in INITIAL_CLASSES)


def class_weights() -> tuple[Fraction, ...]:
    """Probability of landing in each class under a uniform deal."""
    total = sum(c.cases for c in INITIAL_CLASSES)
    return tuple(Fraction(c.cases, total) for c in INITIAL_CLASSES)


def _trig_sq(angle: float) -> tuple[Number, Number]:
    """(sin^2, cos^2) of an angle, exact at 0, pi/4 and pi/2."""
    for special, sin2 in ((0.0, Fraction(0)), (math.pi / 4, Fraction(1, 2)), (math.pi / 2, Fraction(1))):
        if abs(angle - special) <= ANGLE_SNAP:
            return sin2, 1 - sin2
    s2 = math.sin(angle) ** 2
    return s2, 1.0 - s2


def _mul(a: Number, b: Number) -> Number:
    # Keep exact zeros exact so degenerate mixtures drop out entirely.
    if a == 0 or b == 0:
        return Fraction(0)
    if a == 1:
        return b
    if b == 1:
        return a
    return a * b


def ewl_payoffs(quad: PayoffQuadruple, params: GameParams) -> dict[StrategyOp, Number]:
    """Expected payoff of each strategy under the entangling protocol.

    The identity and bit-flip strategies stay classical (stand, hit)
    at every angle.  Y and Z interpolate: the entangling angle gamma
    mixes them toward hit resp. stand, and theta steers the entangled
    component between the classical payoff and its frozen-dealer
    counterpart.
    """
    sg2, cg2 = _trig_sq(params.gamma)
    st2, ct2 = _trig_sq(params.theta)
    y_val = _mul(cg2, quad.e_hit) + _mul(sg2, _mul(ct2, quad.e_std) + _mul(st2, quad.e_00))
    z_val = _mul(cg2, quad.e_std) + _mul(sg2, _mul(ct2, quad.e_hit) + _mul(st2, quad.e_10))
    return {
        StrategyOp.I: quad.e_std,
        StrategyOp.X: quad.e_hit,
        StrategyOp.Y: y_val,
        StrategyOp.Z: z_val,
    }


def _best(
    quad: PayoffQuadruple, params: GameParams, ops: Sequence[StrategyOp]
) -> tuple[Number, tuple[StrategyOp, ...]]:
    """Best payoff over ``ops`` and the argmax set in fixed order.

    When an interpolation coefficient is exactly zero the matching
    strategy is a convex combination of e_std and e_hit, so it cannot
    beat the classical pair; it is then left out of the running max to
    keep exact angles exact (float convex mixes can overshoot by one
    ulp).  It still joins the argmax set on exact ties.
    """
    payoffs = ewl_payoffs(quad, params)
    sg2, _ = _trig_sq(params.gamma)
    st2, _ = _trig_sq(params.theta)
    entangled_weight = _mul(sg2, st2)
    best: Number | None = None
    for op in ops:
        value = payoffs[op]
        if (
            op in (StrategyOp.Y, StrategyOp.Z)
            and entangled_weight == 0
            and not isinstance(value, Fraction)
        ):
            continue
        if best is None or value > best:
            best = value
    assert best is not None
    ties = tuple(op for op in ops if payoffs[op] == best)
    return best, ties


def basic_strategy(params: GameParams | None = None) -> tuple[tuple[StrategyOp, ...], ...]:
    """Argmax strategy set per class row.

    ``params=None`` restricts play to the classical pair {I, X};
    otherwise all four strategies compete at the given angles.  Ties
    are reported as sets, ordered I < X < Y < Z.
    """
    ops = CLASSICAL_OPS if params is None else STRATEGY_ORDER
    p = params if params is not None else GameParams(0.0, 0.0)
    return tuple(_best(q, p, ops)[1] for q in quadruples())


def overall_expectation(params: GameParams | None = None) -> Number:
    """Deal-weighted best payoff; exact whenever the angles are exact."""
    ops = CLASSICAL_OPS if params is None else STRATEGY_ORDER
    p = params if params is not None else GameParams(0.0, 0.0)
    total: Number = Fraction(0)
    for weight, quad in zip(class_weights(), quadruples()):
        value, _ = _best(quad, p, ops)
        total += weight * value
    return total


def sweep(gammas: Sequence[float], thetas: Sequence[float]) -> list[list[float]]:
    """Grid of overall expectations, indexed [gamma][theta]."""
    return [
        [float(overall_expectation(GameParams(g, t))) for t in thetas]
        for g in gammas
    ]
