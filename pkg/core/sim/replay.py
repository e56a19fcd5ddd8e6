"""
Trace replay：依序處理市場快照，套用中斷事件到 Unavailable Offerings Cache，
對每個策略重新配置並以 T3 模擬實際可取得的節點數。

同樣的 trace、事件與設定會產生逐位元組相同的報表（不含任何執行時間戳）。
"""
from __future__ import annotations

import logging
from typing import Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict

from core.errors import EmptyTrace, SpotOptError, UnknownCandidate
from core.model import Allocation, EfficiencyReport, InterruptEvent, MarketSnapshot, PodSpec
from core.preprocess import pod_capacity
from core.resilience import UnavailableOfferingsCache, record_interrupt
from core.sim.strategies import Strategy

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

RECORD_COLUMNS = [
    "timestamp",
    "snapshot_index",
    "strategy",
    "e_total",
    "e_perf_cost",
    "e_over_pods",
    "alpha",
    "hourly_cost",
    "requested_nodes",
    "fulfilled_nodes",
    "allocated_pods",
    "fulfilled_pods",
    "coverage_met",
    "max_per_type",
    "exceeds_t3",
    "excluded_offerings",
    "error",
]


class SimRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    timestamp: int
    snapshot_index: int
    strategy: str
    allocation: Optional[Allocation] = None
    report: Optional[EfficiencyReport] = None
    requested_nodes: int = 0
    fulfilled_nodes: int = 0
    fulfilled_pods: int = 0
    coverage_met: bool = False
    max_per_type: int = 0
    exceeds_t3: bool = False
    excluded_offerings: int = 0
    error: Optional[str] = None


class Recovery(BaseModel):
    model_config = ConfigDict(frozen=True)

    event_t: int
    candidate_id: str
    strategy: str
    latency: Optional[int] = None


class SimReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: PodSpec
    records: List[SimRecord]
    recoveries: List[Recovery]

    def rows(self) -> List[Dict]:
        out = []
        for r in self.records:
            out.append(
                {
                    "timestamp": r.timestamp,
                    "snapshot_index": r.snapshot_index,
                    "strategy": r.strategy,
                    "e_total": r.report.e_total if r.report else None,
                    "e_perf_cost": r.report.e_perf_cost if r.report else None,
                    "e_over_pods": r.report.e_over_pods if r.report else None,
                    "alpha": r.report.alpha if r.report else None,
                    "hourly_cost": r.allocation.hourly_cost if r.allocation else None,
                    "requested_nodes": r.requested_nodes,
                    "fulfilled_nodes": r.fulfilled_nodes,
                    "allocated_pods": r.allocation.total_pods_allocated if r.allocation else 0,
                    "fulfilled_pods": r.fulfilled_pods,
                    "coverage_met": r.coverage_met,
                    "max_per_type": r.max_per_type,
                    "exceeds_t3": r.exceeds_t3,
                    "excluded_offerings": r.excluded_offerings,
                    "error": r.error or "",
                }
            )
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows(), columns=RECORD_COLUMNS)

    def to_payload(self) -> Dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "spec": self.spec.model_dump(mode="json"),
            "records": [r.model_dump(mode="json") for r in self.records],
            "recoveries": [r.model_dump(mode="json") for r in self.recoveries],
        }


def fulfill(
    allocation: Union[Allocation, Mapping[str, int]],
    snapshot: MarketSnapshot,
) -> Dict[str, int]:
    """granted_i = min(x_i, 快照當下的 t3_i)。"""
    counts = allocation.entries if isinstance(allocation, Allocation) else allocation
    by_id = snapshot.by_id()
    granted: Dict[str, int] = {}
    for cid, x in counts.items():
        cand = by_id.get(cid)
        if cand is None:
            raise UnknownCandidate(cid)
        granted[cid] = min(int(x), cand.t3)
    return granted


def _record(
    strategy: Strategy,
    snapshot: MarketSnapshot,
    index: int,
    spec: PodSpec,
    cache: UnavailableOfferingsCache,
) -> SimRecord:
    now = snapshot.timestamp
    excluded = len(cache.active_ids(now) & set(snapshot.by_id()))
    try:
        allocation, report = strategy.allocate(snapshot.candidates, spec, cache, now)
    except SpotOptError as e:
        logger.info(" [Replay] t=%d %s 失敗：%s", now, strategy.name, e)
        return SimRecord(
            timestamp=now,
            snapshot_index=index,
            strategy=strategy.name,
            excluded_offerings=excluded,
            error=str(e),
        )

    by_id = snapshot.by_id()
    granted = fulfill(allocation, snapshot)
    fulfilled_pods = sum(pod_capacity(by_id[cid], spec) * g for cid, g in granted.items())
    return SimRecord(
        timestamp=now,
        snapshot_index=index,
        strategy=strategy.name,
        allocation=allocation,
        report=report,
        requested_nodes=allocation.node_count,
        fulfilled_nodes=sum(granted.values()),
        fulfilled_pods=fulfilled_pods,
        coverage_met=fulfilled_pods >= spec.req_pod,
        max_per_type=allocation.max_per_type,
        exceeds_t3=any(x > by_id[cid].t3 for cid, x in allocation.entries.items()),
        excluded_offerings=excluded,
    )


def _recoveries(
    applied: List[tuple],
    records: List[SimRecord],
    strategies: Sequence[Strategy],
) -> List[Recovery]:
    """恢復延遲 = 第一個滿足需求的快照 index − 事件後第一個快照 index + 1。"""
    covered: Dict[str, List[bool]] = {s.name: [] for s in strategies}
    for r in records:
        covered[r.strategy].append(r.coverage_met)

    out = []
    for event, first_idx in applied:
        for s in strategies:
            flags = covered[s.name]
            latency = None
            for idx in range(first_idx, len(flags)):
                if flags[idx]:
                    latency = idx - first_idx + 1
                    break
            out.append(Recovery(event_t=event.t, candidate_id=event.candidate_id, strategy=s.name, latency=latency))
    return out


def replay(
    trace: Sequence[MarketSnapshot],
    events: Sequence[InterruptEvent],
    spec: PodSpec,
    strategies: Sequence[Strategy],
    ttl: Optional[int] = None,
) -> SimReport:
    """
    快照 k 之前套用時間落在 (t_{k-1}, t_k] 的事件（第一個快照吃掉所有 t ≤ t_0 的事件）。
    單一策略失敗只記錄在該格，不中斷整個 replay。
    """
    if not trace:
        raise EmptyTrace("trace has no snapshots")

    cache = UnavailableOfferingsCache(ttl)
    pending = sorted(events, key=lambda e: e.t)
    cursor = 0
    applied: List[tuple] = []
    records: List[SimRecord] = []

    for index, snapshot in enumerate(trace):
        while cursor < len(pending) and pending[cursor].t <= snapshot.timestamp:
            record_interrupt(cache, pending[cursor])
            applied.append((pending[cursor], index))
            cursor += 1
        for strategy in strategies:
            records.append(_record(strategy, snapshot, index, spec, cache))
        logger.info(" [Replay] snapshot %d/%d (t=%d) done", index + 1, len(trace), snapshot.timestamp)

    if cursor < len(pending):
        logger.warning(" [Replay] %d 個事件晚於最後一個快照，未套用", len(pending) - cursor)

    return SimReport(spec=spec, records=records, recoveries=_recoveries(applied, records, strategies))
