"""Finite, checkable models of rainbow Ramsey reductions: stage colorings,
limit tables, stage constructions, exhaustive solvers and property checkers."""

from .core_model import (
    StageColoring, TailWindow, Tournament, classify_stability, is_free,
    is_prerainbow, is_rainbow, is_thin, is_transitive, pair_decode, pair_encode,
)
from .oracles import LimitFunction, MockFunctional, MockHaltingTable
from .solvers import BudgetExhausted

__all__ = [
    "StageColoring", "TailWindow", "Tournament", "classify_stability", "is_free",
    "is_prerainbow", "is_rainbow", "is_thin", "is_transitive", "pair_decode",
    "pair_encode", "LimitFunction", "MockFunctional", "MockHaltingTable",
    "BudgetExhausted",
]
__version__ = "0.1.0"
