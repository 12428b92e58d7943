"""Deck, valuation, dealer rule and settlement semantics."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from snackjack.rules import (
    DECK_SIZE,
    INITIAL_CLASSES,
    CardSlot,
    ClassificationError,
    DeckMask,
    Hand,
    InvalidHandError,
    Rank,
    SLOT_RANKS,
    classify_initial,
    concrete_deals,
    dealer_must_hit,
    hand_value,
    settle,
    settle_values,
)

distinct_hands = st.lists(
    st.integers(0, DECK_SIZE - 1), min_size=0, max_size=6, unique=True
).map(lambda idx: Hand.of(*idx))


def test_slot_ranks():
    assert SLOT_RANKS == (
        Rank.ACE, Rank.ACE, Rank.TWO, Rank.TWO,
        Rank.THREE, Rank.THREE, Rank.THREE, Rank.THREE,
    )
    assert CardSlot(0).rank == Rank.ACE
    assert CardSlot(7).rank == Rank.THREE
    with pytest.raises(ValueError):
        CardSlot(8)


def test_duplicate_slot_rejected():
    with pytest.raises(InvalidHandError):
        Hand.of(3, 3)


@pytest.mark.parametrize(
    "slots, total, soft, natural",
    [
        ((), 0, False, False),
        ((0,), 4, True, False),        # lone ace counts high
        ((0, 1), 5, True, False),      # A,A: only one ace fits high
        ((0, 4), 7, True, True),       # natural 7
        ((2, 3), 4, False, False),
        ((4, 5), 6, False, False),
        ((2, 4), 5, False, False),
        ((0, 2), 6, True, False),      # soft 6
        ((0, 1, 2), 7, True, False),   # A,A,2: 1+1+2 promotes to 7
        ((0, 1, 4), 5, False, False),  # A,A,3: promotion would bust
        ((4, 5, 6), 9, False, False),  # 3,3,3 busts
        ((0, 4, 5), 7, False, False),  # ace forced low
        ((2, 3, 4), 7, False, False),  # drawn 7, not natural
    ],
)
def test_hand_values(slots, total, soft, natural):
    v = hand_value(Hand.of(*slots))
    assert v.total == total
    assert v.soft == soft
    assert v.natural == natural
    assert v.bust == (total > 7)


def test_natural_requires_two_cards():
    assert hand_value(Hand.of(0, 4)).natural
    assert hand_value(Hand.of(1, 7)).natural
    assert not hand_value(Hand.of(0, 4, 2)).natural
    assert not hand_value(Hand.of(0, 1)).natural


@given(distinct_hands)
def test_value_is_order_invariant(hand):
    reversed_hand = Hand(tuple(reversed(hand.cards)))
    assert hand_value(hand) == hand_value(reversed_hand)


@given(distinct_hands)
def test_bust_iff_total_exceeds_target(hand):
    v = hand_value(hand)
    assert v.bust == (v.total > 7)
    if v.soft:
        assert Rank.ACE in [c.rank for c in hand.cards]
        assert v.total <= 7


def test_dealer_rule():
    assert dealer_must_hit(Hand.of(2, 3))          # hard 4
    assert not dealer_must_hit(Hand.of(0, 2))      # soft 6 stands
    assert not dealer_must_hit(Hand.of(0, 4))      # natural 7
    assert dealer_must_hit(Hand.of(0, 1))          # soft 5
    assert not dealer_must_hit(Hand.of(4, 5, 6))   # busted


@given(distinct_hands)
def test_dealer_never_hits_busted(hand):
    v = hand_value(hand)
    if v.bust:
        assert not dealer_must_hit(hand)
    else:
        assert dealer_must_hit(hand) == (v.total < 6)


def test_settlement_fixed_points():
    natural = Hand.of(0, 4)
    drawn7 = Hand.of(2, 3, 4)
    assert settle(natural, drawn7).payoff == 1
    assert settle(drawn7, natural).payoff == -1
    assert settle(natural, Hand.of(1, 5)).payoff == 0   # both naturals push
    assert settle(drawn7, Hand.of(2, 5, 3)).payoff == 0
    assert settle(Hand.of(4, 5, 6), Hand.of(0, 1, 2, 3)).payoff == -1  # both bust
    assert settle(Hand.of(2, 3), Hand.of(4, 5, 6)).payoff == 1  # dealer bust
    assert settle(Hand.of(0, 2), Hand.of(4, 5)).payoff == 0     # 6 vs 6


@given(distinct_hands, distinct_hands)
def test_player_bust_always_loses(player, dealer):
    if hand_value(player).bust:
        assert settle_values(hand_value(player), hand_value(dealer)) == -1


@given(distinct_hands, distinct_hands)
def test_settlement_antisymmetric_without_naturals(player, dealer):
    pv, dv = hand_value(player), hand_value(dealer)
    if pv.bust or dv.bust or pv.natural or dv.natural:
        return
    assert settle_values(pv, dv) == -settle_values(dv, pv)


def test_classes_enumeration():
    assert len(INITIAL_CLASSES) == 16
    assert [c.cases for c in INITIAL_CLASSES] == [
        2, 4, 2, 4, 12, 12, 12, 4, 4, 16, 8, 16, 24, 16, 8, 24,
    ]
    assert sum(c.cases for c in INITIAL_CLASSES) == 168
    assert [c.row for c in INITIAL_CLASSES] == list(range(1, 17))


def test_concrete_deals_cover_classes():
    seen = set()
    for cls in INITIAL_CLASSES:
        deals = concrete_deals(cls)
        assert len(deals) == cls.cases
        for a, b, u in deals:
            assert a < b and u not in (a, b)
            assert classify_initial(Hand.of(a, b), CardSlot(u)).row == cls.row
            seen.add((a, b, u))
    assert len(seen) == 168


def test_classify_rejects_bad_deals():
    with pytest.raises(ClassificationError):
        classify_initial(Hand.of(0, 1, 2), CardSlot(3))
    with pytest.raises(InvalidHandError):
        classify_initial(Hand.of(0, 1), CardSlot(0))


def test_deck_mask():
    full = DeckMask.full()
    assert full.count == 8
    rest = full.without(0, 5)
    assert not rest.present(0) and rest.present(1)
    assert rest.slots() == (1, 2, 3, 4, 6, 7)
    with pytest.raises(ValueError):
        rest.without(0)
