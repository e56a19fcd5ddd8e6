from .search import (
    GOLDEN,
    ROUNDED_PHI,
    GssConfig,
    GssResult,
    efficiency,
    evaluate_alpha,
    iteration_bound,
    search,
)

__all__ = [
    "GOLDEN",
    "ROUNDED_PHI",
    "GssConfig",
    "GssResult",
    "efficiency",
    "evaluate_alpha",
    "iteration_bound",
    "search",
]
