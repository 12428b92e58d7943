"""Snackjack table rules.

Snackjack is blackjack shrunk to an eight-card deck: two aces, two
deuces, four treys.  The target total is 7.  An ace counts 1 or 4,
whichever helps without busting; a hand counting an ace as 4 is soft.
A two-card ace-trey hand is a natural, the strongest 7.  The player
may draw at most one card; the dealer draws until her total reaches 6
or more (a soft 6 stands).  Wins pay even money, so every payoff is
-1, 0, or +1 from the player's side.

Cards are physically distinguishable: the deck is modelled as eight
slots with a fixed rank per slot, and hands/decks are sets of slots.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from itertools import combinations
from math import comb

TARGET = 7
DEALER_STANDS_ON = 6
DECK_SIZE = 8
ACE_HIGH_BONUS = 3  # counting an ace as 4 instead of 1 adds 3


class Rank(IntEnum):
    ACE = 1
    TWO = 2
    THREE = 3


#: Fixed rank of each deck slot: slots 0-1 aces, 2-3 deuces, 4-7 treys.
SLOT_RANKS: tuple[Rank, ...] = (
    Rank.ACE, Rank.ACE,
    Rank.TWO, Rank.TWO,
    Rank.THREE, Rank.THREE, Rank.THREE, Rank.THREE,
)

#: How many copies of each rank the full deck holds.
RANK_COUNTS: dict[Rank, int] = {Rank.ACE: 2, Rank.TWO: 2, Rank.THREE: 4}


class InvalidHandError(ValueError):
    """A hand references the same deck slot more than once."""


class ClassificationError(LookupError):
    """An initial deal does not belong to any reachable class."""


@dataclass(frozen=True, order=True)
class CardSlot:
    """One physical card, identified by its deck slot."""

    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < DECK_SIZE:
            raise ValueError(f"slot index out of range: {self.index}")

    @property
    def rank(self) -> Rank:
        return SLOT_RANKS[self.index]


@dataclass(frozen=True)
class Hand:
    """An unordered set of distinct cards."""

    cards: tuple[CardSlot, ...]

    def __post_init__(self) -> None:
        if len({c.index for c in self.cards}) != len(self.cards):
            raise InvalidHandError(f"duplicate slots in hand: {self.cards}")

    @classmethod
    def of(cls, *indices: int) -> "Hand":
        return cls(tuple(CardSlot(i) for i in indices))

    @property
    def ranks(self) -> tuple[Rank, ...]:
        return tuple(sorted(c.rank for c in self.cards))

    @property
    def mask(self) -> int:
        m = 0
        for c in self.cards:
            m |= 1 << c.index
        return m

    def add(self, card: CardSlot) -> "Hand":
        return Hand(self.cards + (card,))

    def __len__(self) -> int:
        return len(self.cards)


@dataclass(frozen=True)
class DeckMask:
    """Which of the eight slots are still in the shoe."""

    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < (1 << DECK_SIZE):
            raise ValueError(f"deck mask out of range: {self.bits:#x}")

    @classmethod
    def full(cls) -> "DeckMask":
        return cls((1 << DECK_SIZE) - 1)

    def present(self, slot: int) -> bool:
        return bool((self.bits >> slot) & 1)

    def without(self, *slots: int) -> "DeckMask":
        bits = self.bits
        for s in slots:
            if not (bits >> s) & 1:
                raise ValueError(f"slot {s} already out of the deck")
            bits &= ~(1 << s)
        return DeckMask(bits)

    @property
    def count(self) -> int:
        return self.bits.bit_count()

    def slots(self) -> tuple[int, ...]:
        return tuple(i for i in range(DECK_SIZE) if (self.bits >> i) & 1)


@dataclass(frozen=True)
class HandValue:
    """Resolved value of a hand under the ace 1-or-4 rule."""

    total: int
    soft: bool
    natural: bool
    bust: bool


@dataclass(frozen=True)
class Settlement:
    """Player-side payoff of a finished hand: -1 loss, 0 push, +1 win."""

    payoff: int


def hand_value(hand: Hand) -> HandValue:
    """Value a hand.

    Totals use the low ace value, then one ace is promoted to 4 when
    that still fits under the target; the promoted hand is soft.  Only
    a two-card ace-trey hand is a natural.
    """
    ranks = [c.rank for c in hand.cards]
    base = sum(int(r) for r in ranks)
    soft = False
    total = base
    if Rank.ACE in ranks and base + ACE_HIGH_BONUS <= TARGET:
        total = base + ACE_HIGH_BONUS
        soft = True
    natural = len(ranks) == 2 and sorted(ranks) == [Rank.ACE, Rank.THREE]
    return HandValue(total=total, soft=soft, natural=natural, bust=total > TARGET)


def dealer_must_hit(hand: Hand) -> bool:
    """Dealer drawing rule: hit strictly below 6, stand on soft 6 or better."""
    v = hand_value(hand)
    return not v.bust and v.total < DEALER_STANDS_ON


def settle_values(player: HandValue, dealer: HandValue) -> int:
    """Payoff given both final hand values.

    A player bust loses outright, even to a dealer bust.  A natural
    beats any non-natural hand, including a drawn 7; two naturals push.
    Otherwise the higher total wins and equal totals push.
    """
    if player.bust:
        return -1
    if dealer.bust:
        return 1
    if player.natural or dealer.natural:
        if player.natural and dealer.natural:
            return 0
        return 1 if player.natural else -1
    if player.total != dealer.total:
        return 1 if player.total > dealer.total else -1
    return 0


def settle(player: Hand, dealer: Hand) -> Settlement:
    return Settlement(settle_values(hand_value(player), hand_value(dealer)))


@dataclass(frozen=True)
class InitialStateClass:
    """One equivalence class of initial deals.

    Deals are grouped by the player's two ranks and the dealer's
    upcard rank; ``cases`` counts the distinguishable-card deals that
    collapse onto the class (they total 168 over all sixteen rows).
    """

    row: int
    player_ranks: tuple[Rank, Rank]
    up_rank: Rank
    cases: int

    @property
    def composition(self) -> tuple[int, int, int]:
        """Player rank multiplicities as (aces, deuces, treys)."""
        return (
            sum(1 for r in self.player_ranks if r == Rank.ACE),
            sum(1 for r in self.player_ranks if r == Rank.TWO),
            sum(1 for r in self.player_ranks if r == Rank.THREE),
        )


def _pair_ways(pair: tuple[Rank, Rank]) -> int:
    if pair[0] == pair[1]:
        return comb(RANK_COUNTS[pair[0]], 2)
    return RANK_COUNTS[pair[0]] * RANK_COUNTS[pair[1]]


def _build_classes() -> tuple[InitialStateClass, ...]:
    pairs = [
        (Rank.ACE, Rank.ACE),
        (Rank.TWO, Rank.TWO),
        (Rank.THREE, Rank.THREE),
        (Rank.ACE, Rank.TWO),
        (Rank.ACE, Rank.THREE),
        (Rank.TWO, Rank.THREE),
    ]
    rows = []
    row = 1
    for pair in pairs:
        for up in (Rank.ACE, Rank.TWO, Rank.THREE):
            up_left = RANK_COUNTS[up] - sum(1 for r in pair if r == up)
            if up_left <= 0:
                continue
            rows.append(
                InitialStateClass(
                    row=row,
                    player_ranks=pair,
                    up_rank=up,
                    cases=_pair_ways(pair) * up_left,
                )
            )
            row += 1
    return tuple(rows)


#: The sixteen reachable initial classes, in fixed row order.
INITIAL_CLASSES: tuple[InitialStateClass, ...] = _build_classes()

_CLASS_BY_KEY = {
    (c.player_ranks, c.up_rank): c for c in INITIAL_CLASSES
}


def classify_initial(player: Hand, upcard: CardSlot) -> InitialStateClass:
    """Map a concrete two-card deal plus upcard to its class row."""
    if len(player) != 2:
        raise ClassificationError(f"initial hand must hold 2 cards, got {len(player)}")
    if upcard.index in {c.index for c in player.cards}:
        raise InvalidHandError("upcard already dealt to the player")
    key = (player.ranks, upcard.rank)
    try:
        return _CLASS_BY_KEY[key]
    except KeyError:  # pragma: no cover - every 2+1 deal is classifiable
        raise ClassificationError(f"no class for {key}") from None


def concrete_deals(cls: InitialStateClass) -> tuple[tuple[int, int, int], ...]:
    """All (player slot, player slot, upcard slot) triples in a class."""
    out = []
    for a, b in combinations(range(DECK_SIZE), 2):
        if tuple(sorted((SLOT_RANKS[a], SLOT_RANKS[b]))) != cls.player_ranks:
            continue
        for u in range(DECK_SIZE):
            if u in (a, b) or SLOT_RANKS[u] != cls.up_rank:
                continue
            out.append((a, b, u))
    assert len(out) == cls.cases
    return tuple(out)
