"""Quantized snackjack: exact oracle, sparse circuit simulation, interfaces."""

from .circuit import (
    EARLY_COLLAPSE,
    FAITHFUL,
    DealSpec,
    GameConfig,
    GameRecord,
    MonteCarloResult,
    deal_initial,
    monte_carlo,
    play_hand,
)
from .oracle import (
    GameParams,
    PayoffQuadruple,
    StrategyOp,
    basic_strategy,
    class_weights,
    enumerate_quadruple,
    ewl_payoffs,
    overall_expectation,
    quadruples,
    sweep,
)
from .rules import (
    CardSlot,
    DeckMask,
    Hand,
    HandValue,
    InitialStateClass,
    Rank,
    Settlement,
    classify_initial,
    dealer_must_hit,
    hand_value,
    settle,
)

__version__ = "0.1.0"

__all__ = [
    "CardSlot",
    "DeckMask",
    "DealSpec",
    "EARLY_COLLAPSE",
    "FAITHFUL",
    "GameConfig",
    "GameParams",
    "GameRecord",
    "Hand",
    "HandValue",
    "InitialStateClass",
    "MonteCarloResult",
    "PayoffQuadruple",
    "Rank",
    "Settlement",
    "StrategyOp",
    "basic_strategy",
    "class_weights",
    "classify_initial",
    "deal_initial",
    "dealer_must_hit",
    "enumerate_quadruple",
    "ewl_payoffs",
    "hand_value",
    "monte_carlo",
    "overall_expectation",
    "play_hand",
    "quadruples",
    "settle",
    "sweep",
    "__version__",
]
