"""
Metric Preprocessor：pod 容量、工作負載感知的 benchmark 縮放、不可行候選過濾與 min-normalizer。
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import EmptyCandidateSet, NoFeasibleCandidates
from core.model import EnrichedCandidate, InstanceCandidate, PodSpec, Workload, validate_pod_spec

logger = logging.getLogger(__name__)


class Normalizers(BaseModel):
    model_config = ConfigDict(frozen=True)

    perf_min: float = Field(..., gt=0)
    sp_min: float = Field(..., gt=0)


def _exact(x: float) -> Fraction:
    # 以十進位字串轉換，0.3 / 0.1 才會剛好等於 3
    return Fraction(repr(float(x)))


def pod_capacity(candidate: InstanceCandidate, spec: PodSpec) -> int:
    """min(floor(cpu / req_cpu), floor(mem / req_mem))；實例太小時回傳 0。"""
    by_cpu = math.floor(_exact(candidate.cpu) / _exact(spec.req_cpu))
    by_mem = math.floor(_exact(candidate.mem) / _exact(spec.req_mem))
    return max(0, min(by_cpu, by_mem))


def _matches(candidate: InstanceCandidate, workload: Workload) -> bool:
    if workload == Workload.NETWORK:
        return candidate.network_optimized
    if workload == Workload.DISK:
        return candidate.disk_optimized
    if workload == Workload.DISK_AND_NETWORK:
        # 兩個旗標都有也只縮放一次
        return candidate.network_optimized or candidate.disk_optimized
    return False


def scale_benchmark(candidate: InstanceCandidate, workload: Workload) -> float:
    """
    符合偏好的候選：BS × (OP / OP_base)。
    缺少 base 價格時維持原值並記錄 warning；比值小於 1 也照樣套用。
    """
    workload = Workload(workload)
    if not _matches(candidate, workload):
        return candidate.benchmark
    if candidate.base_ondemand_price is None:
        logger.warning(
            " [Preprocess] %s 符合 %s 偏好但缺少 base_ondemand_price，benchmark 不縮放",
            candidate.id,
            workload.value,
        )
        return candidate.benchmark
    return candidate.benchmark * (candidate.ondemand_price / candidate.base_ondemand_price)


def enrich(
    candidates: Iterable[InstanceCandidate],
    spec: PodSpec,
    *,
    drop_zero_t3: bool = True,
) -> List[EnrichedCandidate]:
    """
    DatasetPreProcessing：計算 Pod_i 與 Perf_i，濾掉 Pod_i = 0（以及 T3_i = 0）的候選。

    SpotVerse 基線不受 T3 限制，呼叫時傳 drop_zero_t3=False。
    """
    validate_pod_spec(spec)
    enriched: List[EnrichedCandidate] = []
    dropped_pod = dropped_t3 = 0
    for cand in candidates:
        pods = pod_capacity(cand, spec)
        if pods == 0:
            dropped_pod += 1
            continue
        if drop_zero_t3 and cand.t3 == 0:
            dropped_t3 += 1
            continue
        scaled = scale_benchmark(cand, spec.workload)
        enriched.append(
            EnrichedCandidate(
                base=cand,
                pod_capacity=pods,
                scaled_benchmark=scaled,
                perf=scaled * pods,
            )
        )

    if dropped_pod or dropped_t3:
        logger.info(
            " [Preprocess] %s: 濾除 %d 個放不下 pod、%d 個 T3=0 的候選",
            spec.label(),
            dropped_pod,
            dropped_t3,
        )
    if not enriched:
        raise NoFeasibleCandidates(f"no candidate can host a {spec.label()} pod with T3 > 0")
    return enriched


def normalizers(enriched: Sequence[EnrichedCandidate]) -> Normalizers:
    if len(enriched) == 0:
        raise EmptyCandidateSet("normalizers need at least one candidate")
    perfs = np.array([c.perf for c in enriched], dtype=np.float64)
    prices = np.array([c.spot_price for c in enriched], dtype=np.float64)
    return Normalizers(perf_min=float(perfs.min()), sp_min=float(prices.min()))
