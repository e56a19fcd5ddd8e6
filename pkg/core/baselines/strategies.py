"""
比較用的基線策略：

- greedy：依 BS/SP（單節點的 performance-cost）排序，在 T3 內由上往下配置。
- spotverse_node / spotverse_pod：先以 SPS 與中斷頻率濾除高風險候選，
  再挑單節點最便宜（或每 pod 最便宜）的型號；不受 T3 限制。
"""
from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from core.config import config
from core.errors import InsufficientCapacity, NoCandidatesPassFilter
from core.model import Allocation, EnrichedCandidate, InstanceCandidate, PodSpec, build_allocation
from core.preprocess import enrich

logger = logging.getLogger(__name__)


class BaselineConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    spotverse_threshold: float = Field(default_factory=lambda: config.spotverse_threshold, ge=0.0)
    # SpotVerse 每個型號的節點上限；None 表示不設限
    max_nodes_per_type: Optional[int] = Field(None, ge=1)


def _allocation(counts: Dict[str, int], chosen: Sequence[EnrichedCandidate]) -> Allocation:
    return build_allocation(
        counts,
        {c.id: c.pod_capacity for c in chosen},
        {c.id: c.spot_price for c in chosen},
    )


def greedy(enriched: Sequence[EnrichedCandidate], spec: PodSpec) -> Allocation:
    ranked = sorted(enriched, key=lambda c: (-(c.scaled_benchmark / c.spot_price), c.id))
    remaining = spec.req_pod
    counts: Dict[str, int] = {}
    for cand in ranked:
        if remaining <= 0:
            break
        x = min(cand.t3, math.ceil(remaining / cand.pod_capacity))
        if x <= 0:
            continue
        counts[cand.id] = x
        remaining -= cand.pod_capacity * x

    if remaining > 0:
        available = sum(c.pod_capacity * c.t3 for c in enriched)
        raise InsufficientCapacity(spec.req_pod, available)
    return _allocation(counts, ranked)


def spotverse_score(candidate: InstanceCandidate) -> Optional[int]:
    """(3 − SPS) + IF；資料缺漏時回傳 None。"""
    if candidate.sps_single is None or candidate.interrupt_freq is None:
        return None
    return (3 - candidate.sps_single) + candidate.interrupt_freq


def spotverse_filter(candidates: Sequence[InstanceCandidate], cfg: BaselineConfig) -> List[InstanceCandidate]:
    survivors = []
    for cand in candidates:
        score = spotverse_score(cand)
        if score is None:
            logger.warning(" [SpotVerse] %s 缺少 sps_single / interrupt_freq，視為未通過", cand.id)
            continue
        if score > cfg.spotverse_threshold:
            continue
        survivors.append(cand)
    if not survivors:
        raise NoCandidatesPassFilter(f"no candidate has a SPS/IF score <= {cfg.spotverse_threshold}")
    return survivors


def _spotverse(
    candidates: Sequence[InstanceCandidate],
    spec: PodSpec,
    cfg: BaselineConfig,
    sort_key: Callable[[EnrichedCandidate], float],
) -> Allocation:
    enriched = enrich(spotverse_filter(candidates, cfg), spec, drop_zero_t3=False)
    ranked = sorted(enriched, key=lambda c: (sort_key(c), c.id))

    remaining = spec.req_pod
    counts: Dict[str, int] = {}
    for cand in ranked:
        if remaining <= 0:
            break
        x = math.ceil(remaining / cand.pod_capacity)
        if cfg.max_nodes_per_type is not None:
            x = min(x, cfg.max_nodes_per_type)
        counts[cand.id] = x
        remaining -= cand.pod_capacity * x

    if remaining > 0:
        raise InsufficientCapacity(spec.req_pod, spec.req_pod - remaining)
    return _allocation(counts, ranked)


def spotverse_node(
    candidates: Sequence[InstanceCandidate],
    spec: PodSpec,
    cfg: Optional[BaselineConfig] = None,
) -> Allocation:
    return _spotverse(candidates, spec, cfg or BaselineConfig(), lambda c: c.spot_price)


def spotverse_pod(
    candidates: Sequence[InstanceCandidate],
    spec: PodSpec,
    cfg: Optional[BaselineConfig] = None,
) -> Allocation:
    return _spotverse(candidates, spec, cfg or BaselineConfig(), lambda c: c.spot_price / c.pod_capacity)
