"""
把各選擇方法包成同一介面，供 compare 與 replay 使用。

每個策略都會先排除快取中 active 的候選；GSS 策略透過 reoptimize 完成排除。
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from core.baselines import BaselineConfig, greedy, spotverse_node, spotverse_pod
from core.gss import GssConfig, efficiency, evaluate_alpha, search
from core.model import Allocation, EfficiencyReport, InstanceCandidate, PodSpec
from core.preprocess import enrich
from core.resilience import UnavailableOfferingsCache, reoptimize

logger = logging.getLogger(__name__)

Outcome = Tuple[Allocation, EfficiencyReport]


class Strategy(ABC):
    name: str = ""

    @abstractmethod
    def allocate(
        self,
        candidates: Sequence[InstanceCandidate],
        spec: PodSpec,
        cache: Optional[UnavailableOfferingsCache] = None,
        now: int = 0,
    ) -> Outcome:
        ...

    @staticmethod
    def _visible(
        candidates: Sequence[InstanceCandidate],
        cache: Optional[UnavailableOfferingsCache],
        now: int,
    ) -> List[InstanceCandidate]:
        if cache is None:
            return list(candidates)
        active = cache.active_ids(now)
        return [c for c in candidates if c.id not in active]


class GssStrategy(Strategy):
    name = "gss-ilp"

    def __init__(self, cfg: Optional[GssConfig] = None):
        self.cfg = cfg or GssConfig()

    def allocate(self, candidates, spec, cache=None, now=0) -> Outcome:
        enriched = enrich(candidates, spec)
        if cache is None:
            result = search(enriched, spec, self.cfg)
        else:
            result = reoptimize(enriched, spec, cache, now, self.cfg)
        return result.best_allocation, result.best_report


class FixedAlphaStrategy(Strategy):
    def __init__(self, alpha: float):
        self.alpha = alpha
        self.name = f"alpha-{alpha:g}"

    def allocate(self, candidates, spec, cache=None, now=0) -> Outcome:
        enriched = enrich(self._visible(candidates, cache, now), spec)
        return evaluate_alpha(enriched, spec, self.alpha)


class GreedyStrategy(Strategy):
    name = "greedy"

    def allocate(self, candidates, spec, cache=None, now=0) -> Outcome:
        enriched = enrich(self._visible(candidates, cache, now), spec)
        allocation = greedy(enriched, spec)
        return allocation, efficiency(allocation, enriched, spec)


class SpotVerseStrategy(Strategy):
    def __init__(self, per_pod: bool, cfg: Optional[BaselineConfig] = None):
        self.per_pod = per_pod
        self.cfg = cfg or BaselineConfig()
        self.name = "spotverse-pod" if per_pod else "spotverse-node"

    def allocate(self, candidates, spec, cache=None, now=0) -> Outcome:
        visible = self._visible(candidates, cache, now)
        pick = spotverse_pod if self.per_pod else spotverse_node
        allocation = pick(visible, spec, self.cfg)
        # 效率以同一份 workload 縮放後的 benchmark 計算
        enriched = enrich(visible, spec, drop_zero_t3=False)
        return allocation, efficiency(allocation, enriched, spec)


STRATEGY_NAMES = (
    "gss-ilp",
    "greedy",
    "spotverse-node",
    "spotverse-pod",
    "alpha-0",
    "alpha-0.5",
    "alpha-1",
)


def build_strategies(
    names: Optional[Sequence[str]] = None,
    gss_cfg: Optional[GssConfig] = None,
    baseline_cfg: Optional[BaselineConfig] = None,
) -> List[Strategy]:
    """依名稱建立策略；未知名稱丟出 ValueError。"""
    factories: Dict[str, Callable[[], Strategy]] = {
        "gss-ilp": lambda: GssStrategy(gss_cfg),
        "greedy": GreedyStrategy,
        "spotverse-node": lambda: SpotVerseStrategy(False, baseline_cfg),
        "spotverse-pod": lambda: SpotVerseStrategy(True, baseline_cfg),
        "alpha-0": lambda: FixedAlphaStrategy(0.0),
        "alpha-0.5": lambda: FixedAlphaStrategy(0.5),
        "alpha-1": lambda: FixedAlphaStrategy(1.0),
    }
    strategies = []
    for name in names or STRATEGY_NAMES:
        if name not in factories:
            raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")
        strategies.append(factories[name]())
    return strategies
