"""
Sim package：策略介面、trace replay 與評估情境。
"""

from .replay import RECORD_COLUMNS, SCHEMA_VERSION, Recovery, SimRecord, SimReport, fulfill, replay
from .scenarios import scenario_grid
from .strategies import (
    STRATEGY_NAMES,
    FixedAlphaStrategy,
    GreedyStrategy,
    GssStrategy,
    SpotVerseStrategy,
    Strategy,
    build_strategies,
)

__all__ = [
    "RECORD_COLUMNS",
    "SCHEMA_VERSION",
    "STRATEGY_NAMES",
    "FixedAlphaStrategy",
    "GreedyStrategy",
    "GssStrategy",
    "Recovery",
    "SimRecord",
    "SimReport",
    "SpotVerseStrategy",
    "Strategy",
    "build_strategies",
    "fulfill",
    "replay",
    "scenario_grid",
]
