from .strategies import (
    BaselineConfig,
    greedy,
    spotverse_filter,
    spotverse_node,
    spotverse_pod,
    spotverse_score,
)

__all__ = [
    "BaselineConfig",
    "greedy",
    "spotverse_filter",
    "spotverse_node",
    "spotverse_pod",
    "spotverse_score",
]
