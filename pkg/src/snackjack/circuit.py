"""Quantum circuit realization of a full snackjack hand.

The 37-qubit register (see qsim.GAME_LAYOUT) holds the deck occupancy,
a scratch copy of it, both hands, a three-qubit draw control, and the
two strategy bits.  A hand runs as:

1. classical uniform deal of two player cards and the upcard;
2. entangling strategy layer on the two strategy bits;
3. player draw round, gated on the player strategy bit;
4. dealer rounds: the hole card unconditionally, further draws gated
   on the dealer strategy bit and her drawing rule;
5. measurement of the strategy bits and settlement.

A draw round puts the control register into a uniform superposition
over the eight slots, copies the deck into the scratch register,
swaps the selected card into the target hand where the gating
predicate holds and the card is present, then measures the control.
If no gated branch received a card the round is retried; either way
the scratch copy is uncomputed so the next round starts clean.

Gating predicates never look at the card slot being moved (the hand
is evaluated with that slot masked out), which keeps every
conditioned swap an involution.

Two modes share all of this machinery.  In ``faithful`` mode the
strategy bits stay in superposition until the end; every draw acts on
all strategy branches at once and the bits are only measured at
settlement.  In ``early_collapse`` mode the strategy bits are
measured right after the entangling layer and the remaining play is
classical sampling with the same draw-and-retry protocol.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import sqrt
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import ewl
from .oracle import GameParams, StrategyOp
from .qsim import (
    GAME_LAYOUT,
    SimulationError,
    SparseState,
    measure,
)
from .rules import (
    DEALER_STANDS_ON,
    DECK_SIZE,
    INITIAL_CLASSES,
    Hand,
    HandValue,
    classify_initial,
    concrete_deals,
    hand_value,
    settle_values,
)

_DECK = GAME_LAYOUT.field("deck").offset
_COPY = GAME_LAYOUT.field("deck_copy").offset
_PHAND = GAME_LAYOUT.field("p_hand").offset
_CTRL = GAME_LAYOUT.field("control").offset
_PSTRAT = GAME_LAYOUT.field("p_strategy").offset
_DHAND = GAME_LAYOUT.field("d_hand").offset
_DSTRAT = GAME_LAYOUT.field("d_strategy").offset
_CTRL_MASK = GAME_LAYOUT.field("control").mask
_COPY_MASK = GAME_LAYOUT.field("deck_copy").mask
_CONTROL_FIELD = GAME_LAYOUT.field("control")
_FULL = (1 << DECK_SIZE) - 1

RETRY_LIMIT = 64
ROUND_LIMIT = 32
_INV_SQRT8 = 1.0 / sqrt(8.0)

Mode = str
FAITHFUL: Mode = "faithful"
EARLY_COLLAPSE: Mode = "early_collapse"


def _mask_hand(mask: int) -> Hand:
    return Hand.of(*(i for i in range(DECK_SIZE) if (mask >> i) & 1))


#: Hand value of every 8-bit occupancy mask, via the table rules.
HAND_VALUES: tuple[HandValue, ...] = tuple(
    hand_value(_mask_hand(m)) for m in range(256)
)
_TOTAL = tuple(v.total for v in HAND_VALUES)
_MUST_HIT = tuple(
    (not v.bust) and v.total < DEALER_STANDS_ON for v in HAND_VALUES
)
_POPC = tuple(m.bit_count() for m in range(256))

#: Flat settlement table indexed by (player_mask << 8) | dealer_mask.
SETTLE_TABLE: tuple[int, ...] = tuple(
    settle_values(HAND_VALUES[p], HAND_VALUES[d])
    for p in range(256)
    for d in range(256)
)

#: Concrete (player, player, up) slot triples per class row.
ROW_DEALS: dict[int, tuple[tuple[int, int, int], ...]] = {
    c.row: concrete_deals(c) for c in INITIAL_CLASSES
}


def player_gating(key: int, exclude_slot: Optional[int] = None) -> bool:
    """Player draws iff the strategy bit says hit and no card was taken yet."""
    if not (key >> _PSTRAT) & 1:
        return False
    h = (key >> _PHAND) & _FULL
    if exclude_slot is not None:
        h &= ~(1 << exclude_slot)
    return _POPC[h] == 2


def dealer_gating(key: int, exclude_slot: Optional[int] = None) -> bool:
    """Dealer takes the hole card unconditionally, then draws below 6
    only where her strategy bit is set."""
    h = (key >> _DHAND) & _FULL
    if exclude_slot is not None:
        h &= ~(1 << exclude_slot)
    if _POPC[h] == 1:
        return True
    return bool((key >> _DSTRAT) & 1) and _MUST_HIT[h]


_GATING: dict[str, Callable[[int, Optional[int]], bool]] = {
    "p_hand": player_gating,
    "d_hand": dealer_gating,
}
_HAND_OFFSET = {"p_hand": _PHAND, "d_hand": _DHAND}


def prepare_control(state: SparseState) -> SparseState:
    """Send the (shared, basis) control register to a uniform superposition."""
    amps = state.amps
    first = next(iter(amps))
    shared = (first >> _CTRL) & 7
    out: dict[int, complex] = {}
    for k, a in amps.items():
        if (k >> _CTRL) & 7 != shared:
            raise SimulationError("control register entangled across branches")
        base = k & ~_CTRL_MASK
        a8 = a * _INV_SQRT8
        for v in range(8):
            out[base | (v << _CTRL)] = a8
    return SparseState(out, state.n_qubits)


def copy_deck(state: SparseState) -> SparseState:
    """CNOT the deck register onto the (clean) scratch copy."""
    out: dict[int, complex] = {}
    for k, a in state.amps.items():
        if k & _COPY_MASK:
            raise SimulationError("deck copy register is not clean")
        out[k | ((k & _FULL) << _COPY)] = a
    return SparseState(out, state.n_qubits)


def hit_operator(
    state: SparseState,
    target: str,
    gating: Optional[Callable[[int, Optional[int]], bool]] = None,
) -> SparseState:
    """Swap the control-selected card into the target hand where the
    gating predicate holds and the scratch copy shows the card."""
    gate = gating or _GATING[target]
    hand_off = _HAND_OFFSET[target]
    out: dict[int, complex] = {}
    for k, a in state.amps.items():
        i = (k >> _CTRL) & 7
        if (k >> (_COPY + i)) & 1 and gate(k, i):
            k ^= (1 << (_DECK + i)) | (1 << (hand_off + i))
        out[k] = a
    return SparseState(out, state.n_qubits)


def _uncompute_copy(
    state: SparseState, slot: int, drawn: bool, hand_off: int
) -> SparseState:
    """Return the scratch copy to zero and reset the measured control.

    After a successful draw the copy no longer matches the deck on the
    drawn slot, so that bit is cleared against (deck | target hand)
    instead of the deck alone.  Branch bookkeeping guarantees the slot
    can never sit in the target hand from an *earlier* round when a
    draw just happened, so the correction is exact.
    """
    ctrl_reset = slot << _CTRL
    out: dict[int, complex] = {}
    if drawn:
        slot_bit = 1 << slot
        for k, a in state.amps.items():
            flip = ((k & _FULL & ~slot_bit) << _COPY) | ctrl_reset
            if (k >> slot) & 1 or (k >> (hand_off + slot)) & 1:
                flip |= slot_bit << _COPY
            out[k ^ flip] = a
    else:
        for k, a in state.amps.items():
            out[k ^ (((k & _FULL) << _COPY) | ctrl_reset)] = a
    return SparseState(out, state.n_qubits)


def _check_round_invariants(state: SparseState) -> None:
    for k in state.amps:
        if k & _COPY_MASK:
            raise SimulationError("scratch copy not cleaned after round")
        if k & _CTRL_MASK:
            raise SimulationError("control not reset after round")
        deck = k & _FULL
        ph = (k >> _PHAND) & _FULL
        dh = (k >> _DHAND) & _FULL
        if (deck | ph | dh) != _FULL or (deck & ph) or (deck & dh) or (ph & dh):
            raise SimulationError("card conservation violated")


def draw_round(
    state: SparseState,
    target: str,
    rng: random.Random,
    controls: Optional[list[int]] = None,
) -> tuple[SparseState, Optional[int], int]:
    """One measure-and-retry draw round against the target hand.

    Returns (state, accepted slot or None, number of retries).  The
    round is skipped when no branch is gated; otherwise the control is
    re-measured until at least one gated branch received a card.
    """
    gate = _GATING[target]
    hand_off = _HAND_OFFSET[target]
    if not any(gate(k, None) for k in state.amps):
        return state, None, 0
    retries = 0
    while True:
        state = prepare_control(state)
        state = copy_deck(state)
        state = hit_operator(state, target)
        slot, state = measure(state, _CONTROL_FIELD, rng)
        if controls is not None:
            controls.append(slot)
        drawn = any(
            (k >> (_COPY + slot)) & 1 and gate(k, slot)
            for k in state.amps
        )
        state = _uncompute_copy(state, slot, drawn, hand_off)
        _check_round_invariants(state)
        if drawn:
            return state, slot, retries
        retries += 1
        if retries > RETRY_LIMIT:
            raise SimulationError(
                f"draw round against {target} exceeded {RETRY_LIMIT} retries"
            )


@dataclass(frozen=True)
class DealSpec:
    """A concrete initial deal: two player slots and the upcard slot."""

    player_slots: tuple[int, int]
    up_slot: int

    @property
    def row(self) -> int:
        return classify_initial(self.player_hand, self.upcard).row

    @property
    def player_hand(self) -> Hand:
        return Hand.of(*self.player_slots)

    @property
    def upcard(self):
        from .rules import CardSlot

        return CardSlot(self.up_slot)


def deal_initial(rng: random.Random, row: Optional[int] = None) -> DealSpec:
    """Deal two player cards and the upcard uniformly over ordered deals.

    With ``row`` the deal is drawn uniformly from that class's
    concrete cases instead.
    """
    if row is not None:
        deals = ROW_DEALS[row]
        a, b, u = deals[int(rng.random() * len(deals))]
        return DealSpec((a, b), u)
    rnd = rng.random
    a = int(rnd() * 8)
    b = int(rnd() * 8)
    while b == a:
        b = int(rnd() * 8)
    u = int(rnd() * 8)
    while u == a or u == b:
        u = int(rnd() * 8)
    return DealSpec((min(a, b), max(a, b)), u)


@dataclass(frozen=True)
class GameConfig:
    """Everything needed to (re)play hands."""

    params: GameParams
    strategy: Union[StrategyOp, np.ndarray]
    mode: Mode = FAITHFUL
    seed: Optional[int] = None
    row: Optional[int] = None

    def __post_init__(self) -> None:
        if self.mode not in (FAITHFUL, EARLY_COLLAPSE):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def strategy_label(self) -> str:
        if isinstance(self.strategy, StrategyOp):
            return self.strategy.value
        return "custom"


@dataclass(frozen=True)
class GameRecord:
    """Full trace of one played hand."""

    row: int
    player_slots: tuple[int, ...]
    up_slot: int
    gamma: float
    theta: float
    strategy: str
    mode: Mode
    strategy_bits: tuple[int, int]
    control_outcomes: tuple[int, ...]
    retries: int
    player_final: tuple[int, ...]
    dealer_final: tuple[int, ...]
    player_total: int
    dealer_total: int
    payoff: int
    seed: Optional[int]

    def to_dict(self) -> dict:
        return {
            "row": self.row,
            "player_slots": list(self.player_slots),
            "up_slot": self.up_slot,
            "gamma": self.gamma,
            "theta": self.theta,
            "strategy": self.strategy,
            "mode": self.mode,
            "strategy_bits": list(self.strategy_bits),
            "control_outcomes": list(self.control_outcomes),
            "retries": self.retries,
            "player_final": list(self.player_final),
            "dealer_final": list(self.dealer_final),
            "player_total": self.player_total,
            "dealer_total": self.dealer_total,
            "payoff": self.payoff,
            "seed": self.seed,
        }


def _strategy_amplitudes(config: GameConfig) -> tuple[complex, ...]:
    """Post-entangling amplitudes of the four strategy-bit outcomes."""
    vec = ewl.strategy_post_state(config.strategy, config.params)
    return tuple(complex(x) for x in vec)


def _initial_state(deal: DealSpec, vec4: Sequence[complex]) -> SparseState:
    a, b = deal.player_slots
    u = deal.up_slot
    base = (
        (_FULL ^ (1 << a) ^ (1 << b) ^ (1 << u))
        | (((1 << a) | (1 << b)) << _PHAND)
        | ((1 << u) << _DHAND)
    )
    amps: dict[int, complex] = {}
    for idx in range(4):
        amp = vec4[idx]
        if amp != 0:
            key = base | ((idx >> 1) << _PSTRAT) | ((idx & 1) << _DSTRAT)
            amps[key] = amp
    return SparseState(amps, GAME_LAYOUT.n_qubits)


def _mask_slots(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(DECK_SIZE) if (mask >> i) & 1)


def _play_faithful(
    deal: DealSpec,
    vec4: Sequence[complex],
    rng: random.Random,
    controls: Optional[list[int]] = None,
) -> tuple[int, int, int, int, int, int]:
    """Play one faithful hand.

    Returns (payoff, p_bit, d_bit, p_mask, d_mask, retries).
    """
    state = _initial_state(deal, vec4)
    retries = 0
    rounds = 0
    while any(player_gating(k, None) for k in state.amps):
        state, _, r = draw_round(state, "p_hand", rng, controls)
        retries += r
        rounds += 1
        if rounds > ROUND_LIMIT:
            raise SimulationError("player phase failed to terminate")
    while any(dealer_gating(k, None) for k in state.amps):
        state, _, r = draw_round(state, "d_hand", rng, controls)
        retries += r
        rounds += 1
        if rounds > ROUND_LIMIT:
            raise SimulationError("dealer phase failed to terminate")
    p_bit, state = measure(state, (_PSTRAT,), rng)
    d_bit, state = measure(state, (_DSTRAT,), rng)
    if state.support != 1:
        raise SimulationError(
            f"register not classical at settlement: support {state.support}"
        )
    norm = state.norm_sq()
    if abs(norm - 1.0) > 1e-9:
        raise SimulationError(f"norm drifted to {norm} over one hand")
    key = next(iter(state.amps))
    p_mask = (key >> _PHAND) & _FULL
    d_mask = (key >> _DHAND) & _FULL
    payoff = SETTLE_TABLE[(p_mask << 8) | d_mask]
    return payoff, p_bit, d_bit, p_mask, d_mask, retries


def _play_early(
    deal: DealSpec,
    cum: Sequence[float],
    rng: random.Random,
    controls: Optional[list[int]] = None,
) -> tuple[int, int, int, int, int, int]:
    """Play one hand with the strategy bits collapsed up front.

    ``cum`` is the cumulative distribution of the four strategy-bit
    outcomes in index order (p<<1)|d.  Draws use the same uniform
    slot-measure-and-retry protocol as the faithful path, just on a
    single classical branch.
    """
    rnd = rng.random
    a, b = deal.player_slots
    u = deal.up_slot
    deck = _FULL ^ (1 << a) ^ (1 << b) ^ (1 << u)
    p_mask = (1 << a) | (1 << b)
    d_mask = 1 << u

    r = rnd()
    outcome = 0
    while cum[outcome] <= r:
        outcome += 1
    p_bit = outcome >> 1
    d_bit = outcome & 1

    retries = 0

    def draw(hand: int) -> tuple[int, int]:
        nonlocal deck, retries
        while True:
            s = int(rnd() * 8)
            if controls is not None:
                controls.append(s)
            bit = 1 << s
            if deck & bit:
                deck ^= bit
                return hand | bit, s
            retries += 1
            if retries > RETRY_LIMIT * ROUND_LIMIT:
                raise SimulationError("draw sampling failed to terminate")

    if p_bit:
        p_mask, _ = draw(p_mask)
    d_mask, _ = draw(d_mask)
    if d_bit:
        while _MUST_HIT[d_mask]:
            d_mask, _ = draw(d_mask)
    payoff = SETTLE_TABLE[(p_mask << 8) | d_mask]
    return payoff, p_bit, d_bit, p_mask, d_mask, retries


def _outcome_cumulative(config: GameConfig) -> tuple[float, ...]:
    probs = ewl.outcome_distribution(config.strategy, config.params)
    acc = 0.0
    cum = []
    for p in probs:
        acc += float(p)
        cum.append(acc)
    cum[-1] = 1.0 + 1e-12
    return tuple(cum)


def play_hand(
    config: GameConfig,
    rng: Optional[random.Random] = None,
    deal: Optional[DealSpec] = None,
) -> GameRecord:
    """Play one hand end to end and return its full record."""
    if rng is None:
        rng = random.Random(config.seed)
    if deal is None:
        deal = deal_initial(rng, config.row)
    controls: list[int] = []
    if config.mode == FAITHFUL:
        vec4 = _strategy_amplitudes(config)
        payoff, p_bit, d_bit, p_mask, d_mask, retries = _play_faithful(
            deal, vec4, rng, controls
        )
    else:
        cum = _outcome_cumulative(config)
        payoff, p_bit, d_bit, p_mask, d_mask, retries = _play_early(
            deal, cum, rng, controls
        )
    return GameRecord(
        row=deal.row,
        player_slots=deal.player_slots,
        up_slot=deal.up_slot,
        gamma=config.params.gamma,
        theta=config.params.theta,
        strategy=config.strategy_label,
        mode=config.mode,
        strategy_bits=(p_bit, d_bit),
        control_outcomes=tuple(controls),
        retries=retries,
        player_final=_mask_slots(p_mask),
        dealer_final=_mask_slots(d_mask),
        player_total=_TOTAL[p_mask],
        dealer_total=_TOTAL[d_mask],
        payoff=payoff,
        seed=config.seed,
    )


@dataclass
class MonteCarloResult:
    """Aggregated payoff statistics over many sampled hands."""

    n: int
    mean: float
    stderr: float
    payoff_counts: dict[int, int]
    per_row: dict[int, tuple[int, float]] = field(default_factory=dict)

    @property
    def counts_vector(self) -> tuple[int, int, int]:
        return (
            self.payoff_counts.get(-1, 0),
            self.payoff_counts.get(0, 0),
            self.payoff_counts.get(1, 0),
        )


#: Row of each concrete (a, b, u) deal triple, a < b.
_ROW_OF: dict[tuple[int, int, int], int] = {
    triple: row for row, triples in ROW_DEALS.items() for triple in triples
}


def _run_early(
    config: GameConfig, n: int, rng: random.Random, row_acc: dict[int, list[int]]
) -> dict[int, int]:
    """Inlined early-collapse sampling loop; this is the bulk hot path."""
    cum = _outcome_cumulative(config)
    c0, c1, c2, c3 = cum
    counts = {-1: 0, 0: 0, 1: 0}
    rnd = rng.random
    must_hit = _MUST_HIT
    settle = SETTLE_TABLE
    track = config.row is None
    deals = ROW_DEALS[config.row] if config.row is not None else None
    m = len(deals) if deals is not None else 0
    guard = RETRY_LIMIT * ROUND_LIMIT
    for _ in range(n):
        if deals is not None:
            a, b, u = deals[int(rnd() * m)]
        else:
            a = int(rnd() * 8)
            b = int(rnd() * 8)
            while b == a:
                b = int(rnd() * 8)
            u = int(rnd() * 8)
            while u == a or u == b:
                u = int(rnd() * 8)
        deck = _FULL ^ (1 << a) ^ (1 << b) ^ (1 << u)
        p_mask = (1 << a) | (1 << b)
        d_mask = 1 << u

        r = rnd()
        if r < c1:
            p_bit = 0
            d_bit = 0 if r < c0 else 1
        else:
            p_bit = 1
            d_bit = 0 if r < c2 else 1

        misses = 0
        if p_bit:
            while True:
                s = 1 << int(rnd() * 8)
                if deck & s:
                    deck ^= s
                    p_mask |= s
                    break
                misses += 1
                if misses > guard:
                    raise SimulationError("draw sampling failed to terminate")
        while True:
            s = 1 << int(rnd() * 8)
            if deck & s:
                deck ^= s
                d_mask |= s
                break
            misses += 1
            if misses > guard:
                raise SimulationError("draw sampling failed to terminate")
        if d_bit:
            while must_hit[d_mask]:
                s = 1 << int(rnd() * 8)
                if deck & s:
                    deck ^= s
                    d_mask |= s
                    continue
                misses += 1
                if misses > guard:
                    raise SimulationError("draw sampling failed to terminate")

        payoff = settle[(p_mask << 8) | d_mask]
        counts[payoff] += 1
        if track:
            key = (a, b, u) if a < b else (b, a, u)
            acc = row_acc.setdefault(_ROW_OF[key], [0, 0])
            acc[0] += 1
            acc[1] += payoff
    return counts


def _run_faithful(
    config: GameConfig, n: int, rng: random.Random, row_acc: dict[int, list[int]]
) -> dict[int, int]:
    vec4 = _strategy_amplitudes(config)
    counts = {-1: 0, 0: 0, 1: 0}
    track = config.row is None
    deals = ROW_DEALS[config.row] if config.row is not None else None
    m = len(deals) if deals is not None else 0
    rnd = rng.random
    for _ in range(n):
        if deals is not None:
            a, b, u = deals[int(rnd() * m)]
            deal = DealSpec((a, b), u)
        else:
            deal = deal_initial(rng)
        payoff = _play_faithful(deal, vec4, rng)[0]
        counts[payoff] += 1
        if track:
            key = (*deal.player_slots, deal.up_slot)
            acc = row_acc.setdefault(_ROW_OF[key], [0, 0])
            acc[0] += 1
            acc[1] += payoff
    return counts


def monte_carlo(config: GameConfig, n: int) -> MonteCarloResult:
    """Sample ``n`` hands under one configuration.

    Records are skipped so large sweeps stay fast; per-row counts and
    means are tracked whenever the deal is not pinned to one row.
    """
    rng = random.Random(config.seed)
    row_acc: dict[int, list[int]] = {}
    if config.mode == FAITHFUL:
        counts = _run_faithful(config, n, rng, row_acc)
    else:
        counts = _run_early(config, n, rng, row_acc)
    total = sum(v * k for k, v in counts.items())
    mean = total / n
    second = sum(v * k * k for k, v in counts.items()) / n
    var = max(second - mean * mean, 0.0)
    stderr = sqrt(var / n)
    per_row = {
        row: (cnt, s / cnt) for row, (cnt, s) in sorted(row_acc.items())
    }
    return MonteCarloResult(
        n=n, mean=mean, stderr=stderr, payoff_counts=counts, per_row=per_row
    )
