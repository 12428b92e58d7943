"""Game circuit: deals, draw protocol, both play modes."""

import math
import random
from fractions import Fraction as F

import pytest
from scipy.stats import chi2_contingency, chisquare

from snackjack import circuit, ewl, oracle
from snackjack.circuit import (
    EARLY_COLLAPSE,
    FAITHFUL,
    DealSpec,
    GameConfig,
    SETTLE_TABLE,
    deal_initial,
    dealer_gating,
    draw_round,
    monte_carlo,
    play_hand,
    player_gating,
    prepare_control,
)
from snackjack.oracle import GameParams, StrategyOp
from snackjack.qsim import SimulationError, SparseState
from snackjack.rules import Hand, hand_value, settle

HALF_PI = math.pi / 2


def basis_state(deal, p_bit, d_bit):
    vec = [0j] * 4
    vec[(p_bit << 1) | d_bit] = 1 + 0j
    return circuit._initial_state(deal, vec)


def state_key(state):
    assert state.support == 1
    return next(iter(state.amps))


def test_settle_table_matches_rules():
    for p_mask in range(256):
        for d_mask in range(0, 256, 7):
            if p_mask & d_mask:
                continue
            p = Hand.of(*(i for i in range(8) if (p_mask >> i) & 1))
            d = Hand.of(*(i for i in range(8) if (d_mask >> i) & 1))
            assert SETTLE_TABLE[(p_mask << 8) | d_mask] == settle(p, d).payoff


def test_deal_is_uniform_over_classes():
    from snackjack.rules import INITIAL_CLASSES

    rng = random.Random(12)
    n = 50_000
    counts = {c.row: 0 for c in INITIAL_CLASSES}
    for _ in range(n):
        counts[deal_initial(rng).row] += 1
    expected = [n * c.cases / 168 for c in INITIAL_CLASSES]
    _, p = chisquare(list(counts.values()), expected)
    assert p > 1e-3


def test_fixed_row_deal_is_uniform_over_cases():
    rng = random.Random(3)
    triples = circuit.ROW_DEALS[13]
    counts = {t: 0 for t in triples}
    n = 24_000
    for _ in range(n):
        d = deal_initial(rng, row=13)
        counts[(d.player_slots[0], d.player_slots[1], d.up_slot)] += 1
    _, p = chisquare(list(counts.values()))
    assert p > 1e-3
    assert all(d >= 0 for d in counts.values())


def test_gating_predicates():
    deal = DealSpec((0, 4), 2)  # player A,3; up deuce
    hit = state_key(basis_state(deal, 1, 1))
    stand = state_key(basis_state(deal, 0, 1))
    assert player_gating(hit, None)
    assert not player_gating(stand, None)
    # dealer owes the hole card regardless of her strategy bit
    assert dealer_gating(hit, None)
    assert dealer_gating(state_key(basis_state(deal, 0, 0)), None)


def test_player_round_draws_exactly_one_card():
    rng = random.Random(9)
    deal = DealSpec((0, 4), 2)
    state = basis_state(deal, 1, 1)
    state, slot, _ = draw_round(state, "p_hand", rng)
    key = state_key(state)
    assert slot is not None
    p_mask = (key >> 16) & 0xFF
    assert p_mask.bit_count() == 3
    assert (p_mask >> slot) & 1
    assert not (key & (0xFF << 8))  # scratch copy clean
    assert not player_gating(key, None)  # no second draw
    state, slot2, _ = draw_round(state, "p_hand", rng)
    assert slot2 is None


def test_dealer_phase_stops_on_soft_six():
    # dealer up ace, hole deuce: soft six stands immediately
    rng = random.Random(1)
    deal = DealSpec((4, 5), 0)
    state = basis_state(deal, 0, 1)
    forced_hole = None
    for seed in range(200):
        rng = random.Random(seed)
        s, slot, _ = draw_round(state.copy(), "d_hand", rng)
        if slot == 2 or slot == 3:
            forced_hole = s
            break
    assert forced_hole is not None
    key = state_key(forced_hole)
    d_mask = (key >> 28) & 0xFF
    assert hand_value(Hand.of(*(i for i in range(8) if (d_mask >> i) & 1))).total == 6
    assert not dealer_gating(key, None)


def test_retry_leaves_registers_unchanged():
    rng = random.Random(0)
    deal = DealSpec((0, 4), 2)
    state = basis_state(deal, 1, 1)
    before = state_key(state)
    for seed in range(300):
        controls = []
        s, slot, retries = draw_round(state.copy(), "p_hand", random.Random(seed), controls)
        if retries:
            # every rejected measurement saw a dealt slot
            dealt = {0, 4, 2}
            assert all(c in dealt for c in controls[:-1])
            key = state_key(s)
            # deck and dealer registers only changed by the accepted draw
            assert (key >> 28) & 0xFF == (before >> 28) & 0xFF
            return
    pytest.fail("no retried round found")


def test_prepare_control_rejects_entangled_control():
    deal = DealSpec((0, 4), 2)
    state = basis_state(deal, 1, 1)
    key = next(iter(state.amps))
    bad = SparseState(
        {key: 1 / math.sqrt(2), key ^ (1 << 24): 1 / math.sqrt(2)}, 37
    )
    with pytest.raises(SimulationError):
        prepare_control(bad)


def test_play_hand_record_is_consistent():
    cfg = GameConfig(
        params=GameParams(math.pi / 4, HALF_PI),
        strategy=StrategyOp.Y,
        mode=FAITHFUL,
        seed=123,
    )
    rec = play_hand(cfg)
    assert rec.payoff in (-1, 0, 1)
    assert rec.strategy_bits[0] in (0, 1) and rec.strategy_bits[1] in (0, 1)
    assert set(rec.player_slots) <= set(rec.player_final)
    assert rec.up_slot in rec.dealer_final
    player = Hand.of(*rec.player_final)
    dealer = Hand.of(*rec.dealer_final)
    assert rec.player_total == hand_value(player).total
    assert rec.dealer_total == hand_value(dealer).total
    assert rec.payoff == settle(player, dealer).payoff
    assert not set(rec.player_final) & set(rec.dealer_final)
    # player draws at most one card
    assert len(rec.player_final) <= 3


@pytest.mark.parametrize("mode", [FAITHFUL, EARLY_COLLAPSE])
def test_play_hand_replay_determinism(mode):
    cfg = GameConfig(
        params=GameParams(math.pi / 3, math.pi / 4),
        strategy=StrategyOp.Z,
        mode=mode,
        seed=77,
    )
    assert play_hand(cfg) == play_hand(cfg)


def test_monte_carlo_deterministic_and_counted():
    cfg = GameConfig(
        params=GameParams(0.0, 0.0), strategy=StrategyOp.I,
        mode=EARLY_COLLAPSE, seed=5,
    )
    a = monte_carlo(cfg, 5000)
    b = monte_carlo(cfg, 5000)
    assert a.payoff_counts == b.payoff_counts
    assert sum(a.payoff_counts.values()) == 5000
    assert sum(cnt for cnt, _ in a.per_row.values()) == 5000


def test_strategy_bit_frequencies_match_protocol():
    # Y at gamma=pi/4, theta=pi/2 -> P(00)=1/2, P(11)=1/2
    cfg = GameConfig(
        params=GameParams(math.pi / 4, HALF_PI), strategy=StrategyOp.Y,
        mode=FAITHFUL, seed=31, row=13,
    )
    import dataclasses

    counts = {0: 0, 3: 0}
    n = 2000
    for i in range(n):
        rec = play_hand(dataclasses.replace(cfg, seed=9000 + i))
        bits = (rec.strategy_bits[0] << 1) | rec.strategy_bits[1]
        assert bits in counts
        counts[bits] += 1
    assert abs(counts[0] / n - 0.5) < 4 * math.sqrt(0.25 / n)


def test_oracle_agreement_quick_faithful():
    # row 1, Z at full entanglement: payoff must average e_10 = 2/5
    cfg = GameConfig(
        params=GameParams(HALF_PI, HALF_PI), strategy=StrategyOp.Z,
        mode=FAITHFUL, seed=17, row=1,
    )
    res = monte_carlo(cfg, 20_000)
    want = float(F(2, 5))
    assert abs(res.mean - want) <= 4 * max(res.stderr, 1e-9)


def test_mode_equivalence_quick():
    p = GameParams(math.pi / 4, HALF_PI)
    tables = []
    for mode in (FAITHFUL, EARLY_COLLAPSE):
        cfg = GameConfig(params=p, strategy=StrategyOp.Y, mode=mode, seed=2, row=6)
        tables.append(monte_carlo(cfg, 20_000).counts_vector)
    import numpy as np

    table = np.array(tables)
    table = table[:, table.sum(axis=0) > 0]
    _, pval, _, _ = chi2_contingency(table, correction=False)
    assert pval > 1e-3


def test_hadamard_strategy_at_gamma_zero_mixes_stand_and_hit():
    quad = oracle.quadruples()[12]
    cfg = GameConfig(
        params=GameParams(0.0, 0.0), strategy=ewl.HADAMARD,
        mode=FAITHFUL, seed=8, row=13,
    )
    res = monte_carlo(cfg, 20_000)
    want = (float(quad.e_std) + float(quad.e_hit)) / 2
    assert abs(res.mean - want) <= 4 * max(res.stderr, 1e-9)


def test_custom_strategy_must_be_unitary():
    import numpy as np

    cfg = GameConfig(
        params=GameParams(0.0, 0.0),
        strategy=np.array([[1.0, 0.0], [0.0, 2.0]]),
        mode=FAITHFUL,
        seed=1,
    )
    with pytest.raises(Exception):
        play_hand(cfg)


def test_bad_mode_rejected():
    with pytest.raises(ValueError):
        GameConfig(params=GameParams(0, 0), strategy=StrategyOp.I, mode="quick")
