"""Stateful play sessions behind the HTTP API.

A session walks the cycle awaiting_deal -> awaiting_strategy ->
resolved -> (deal again).  Angles may be changed between hands; the
values in force when a hand is dealt are pinned to that hand.  A
seeded session replays identically for the same action sequence.
"""

from __future__ import annotations

import random
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from .circuit import (
    FAITHFUL,
    DealSpec,
    GameConfig,
    GameRecord,
    Mode,
    deal_initial,
    play_hand,
)
from .formats import RANK_LABELS, strategy_payoff_entries
from .oracle import GameParams, StrategyOp, basic_strategy
from .rules import SLOT_RANKS

AWAITING_DEAL = "awaiting_deal"
AWAITING_STRATEGY = "awaiting_strategy"
RESOLVED = "resolved"


class UnknownSessionError(KeyError):
    pass


class PhaseError(RuntimeError):
    """An action arrived in the wrong phase of the deal cycle."""


@dataclass
class PendingHand:
    deal: DealSpec
    params: GameParams

    @property
    def row(self) -> int:
        return self.deal.row


@dataclass
class Session:
    id: str
    params: GameParams
    mode: Mode
    seed: Optional[int]
    rng: random.Random
    bankroll: int = 0
    phase: str = AWAITING_DEAL
    pending: Optional[PendingHand] = None
    history: list[GameRecord] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def view(self) -> dict:
        out = {
            "id": self.id,
            "gamma": self.params.gamma,
            "theta": self.params.theta,
            "mode": self.mode,
            "seed": self.seed,
            "bankroll": self.bankroll,
            "phase": self.phase,
            "hands_played": len(self.history),
            "pending": None,
        }
        if self.pending is not None:
            deal = self.pending.deal
            out["pending"] = {
                "row": self.pending.row,
                "gamma": self.pending.params.gamma,
                "theta": self.pending.params.theta,
                "player": [_card_view(s) for s in deal.player_slots],
                "upcard": _card_view(deal.up_slot),
            }
        return out


def _card_view(slot: int) -> dict:
    return {"slot": slot, "rank": RANK_LABELS[SLOT_RANKS[slot]]}


class SessionStore:
    """Thread-safe registry of live sessions."""

    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(
        self,
        gamma: float,
        theta: float,
        seed: Optional[int] = None,
        mode: Mode = FAITHFUL,
    ) -> Session:
        session = Session(
            id=uuid.uuid4().hex,
            params=GameParams(gamma, theta),
            mode=mode,
            seed=seed,
            rng=random.Random(seed),
        )
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSessionError(session_id) from None

    def set_params(self, session: Session, gamma: float, theta: float) -> None:
        """Angles apply from the next deal on; rejected mid-hand."""
        with session.lock:
            if session.phase == AWAITING_STRATEGY:
                raise PhaseError("cannot change angles while a hand is pending")
            session.params = GameParams(gamma, theta)

    def deal(self, session: Session) -> dict:
        with session.lock:
            if session.phase == AWAITING_STRATEGY:
                raise PhaseError("hand already dealt; choose a strategy")
            deal = deal_initial(session.rng)
            session.pending = PendingHand(deal=deal, params=session.params)
            session.phase = AWAITING_STRATEGY
            return session.view()

    def strategies(self, session: Session) -> dict:
        """Exact payoffs and the best-set hint for the pending hand."""
        with session.lock:
            if session.phase != AWAITING_STRATEGY or session.pending is None:
                raise PhaseError("no hand is awaiting a strategy")
            pending = session.pending
            best = basic_strategy(pending.params)[pending.row - 1]
            return {
                "row": pending.row,
                "strategies": strategy_payoff_entries(pending.row, pending.params),
                "hint": [op.value for op in best],
            }

    def act(self, session: Session, strategy: StrategyOp) -> dict:
        with session.lock:
            if session.phase != AWAITING_STRATEGY or session.pending is None:
                raise PhaseError("no hand is awaiting a strategy")
            pending = session.pending
            hand_seed = session.rng.getrandbits(32)
            config = GameConfig(
                params=pending.params,
                strategy=strategy,
                mode=session.mode,
                seed=hand_seed,
            )
            record = play_hand(config, deal=pending.deal)
            session.history.append(record)
            session.bankroll += record.payoff
            session.pending = None
            session.phase = RESOLVED
            return {
                "record": record.to_dict(),
                "payoff": record.payoff,
                "bankroll": session.bankroll,
                "phase": session.phase,
            }

    def history(self, session: Session) -> list[dict]:
        with session.lock:
            return [r.to_dict() for r in session.history]
