"""
領域型別：PodSpec、候選實例、前處理後的候選、配置結果與效率報告。

所有型別皆為 frozen pydantic model，可跨執行緒共用。
"""
from __future__ import annotations

import math
from enum import Enum
from typing import Dict, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.errors import InvalidSpec


class Workload(str, Enum):
    GENERAL = "general"
    NETWORK = "network"
    DISK = "disk"
    DISK_AND_NETWORK = "disk-network"


def make_candidate_id(instance_type: str, region: str, az: str) -> str:
    """同一型號在不同 AZ 視為不同候選。"""
    return f"{instance_type}/{region}/{az}"


class PodSpec(BaseModel):
    """使用者需求：每個 pod 的 vCPU / GiB、pod 總數與工作負載偏好。"""

    model_config = ConfigDict(frozen=True)

    req_cpu: float
    req_mem: float
    req_pod: int
    workload: Workload = Workload.GENERAL

    def label(self) -> str:
        return f"({self.req_pod}, {self.req_cpu:g}, {self.req_mem:g})"


def validate_pod_spec(spec: PodSpec) -> PodSpec:
    if not (spec.req_cpu > 0 and math.isfinite(spec.req_cpu)):
        raise InvalidSpec("req_cpu")
    if not (spec.req_mem > 0 and math.isfinite(spec.req_mem)):
        raise InvalidSpec("req_mem")
    if spec.req_pod < 1:
        raise InvalidSpec("req_pod", "must be at least 1")
    return spec


class InstanceCandidate(BaseModel):
    """單一 AZ 內的一個 spot 實例型號。"""

    model_config = ConfigDict(frozen=True)

    id: str
    instance_type: str
    region: str
    az: str
    cpu: float = Field(..., gt=0)
    mem: float = Field(..., gt=0)
    spot_price: float = Field(..., gt=0)
    ondemand_price: float = Field(..., gt=0)
    base_ondemand_price: Optional[float] = Field(None, gt=0)
    benchmark: float = Field(..., gt=0)
    t3: int = Field(..., ge=0)
    network_optimized: bool = False
    disk_optimized: bool = False
    sps_single: Optional[int] = Field(None, ge=1, le=3)
    interrupt_freq: Optional[int] = Field(None, ge=0)

    @model_validator(mode="before")
    @classmethod
    def _fill_id(cls, data):
        if isinstance(data, dict) and not data.get("id"):
            parts = (data.get("instance_type"), data.get("region"), data.get("az"))
            if all(parts):
                data = {**data, "id": make_candidate_id(*parts)}
        return data

    @model_validator(mode="after")
    def _id_matches_parts(self):
        expected = make_candidate_id(self.instance_type, self.region, self.az)
        if self.id != expected:
            raise ValueError(f"id {self.id!r} does not match {expected!r}")
        return self

    @property
    def capability(self) -> str:
        if self.network_optimized and self.disk_optimized:
            return Workload.DISK_AND_NETWORK.value
        if self.network_optimized:
            return Workload.NETWORK.value
        if self.disk_optimized:
            return Workload.DISK.value
        return Workload.GENERAL.value


class EnrichedCandidate(BaseModel):
    """前處理後的候選：Pod_i、(可能已縮放的) benchmark 與 Perf_i。"""

    model_config = ConfigDict(frozen=True)

    base: InstanceCandidate
    pod_capacity: int = Field(..., ge=1)
    scaled_benchmark: float = Field(..., gt=0)
    perf: float = Field(..., gt=0)

    @model_validator(mode="after")
    def _perf_identity(self):
        if self.perf != self.scaled_benchmark * self.pod_capacity:
            raise ValueError("perf must equal scaled_benchmark * pod_capacity")
        return self

    @property
    def id(self) -> str:
        return self.base.id

    @property
    def spot_price(self) -> float:
        return self.base.spot_price

    @property
    def t3(self) -> int:
        return self.base.t3


class Allocation(BaseModel):
    """每個候選配置的實例數 x_i（只保留 x_i > 0），依 id 排序。"""

    model_config = ConfigDict(frozen=True)

    entries: Dict[str, int]
    total_pods_allocated: int
    hourly_cost: float
    alpha: Optional[float] = None
    objective: Optional[float] = None

    @property
    def node_count(self) -> int:
        return sum(self.entries.values())

    @property
    def max_per_type(self) -> int:
        return max(self.entries.values(), default=0)

    def count(self, candidate_id: str) -> int:
        return self.entries.get(candidate_id, 0)


def build_allocation(
    counts: Mapping[str, int],
    capacities: Mapping[str, int],
    prices: Mapping[str, float],
    *,
    alpha: Optional[float] = None,
    objective: Optional[float] = None,
) -> Allocation:
    """由 x_i 計算 Σ Pod_i·x_i 與 Σ SP_i·x_i。"""
    entries = {cid: int(x) for cid, x in sorted(counts.items()) if x > 0}
    pods = sum(capacities[cid] * x for cid, x in entries.items())
    cost = math.fsum(prices[cid] * x for cid, x in entries.items())
    return Allocation(
        entries=entries,
        total_pods_allocated=pods,
        hourly_cost=cost,
        alpha=alpha,
        objective=objective,
    )


class EfficiencyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    e_perf_cost: float
    e_over_pods: float
    e_total: float
    alpha: Optional[float] = None


class MarketSnapshot(BaseModel):
    """某時間點的候選集合（取代即時 SpotLake 資料）。"""

    model_config = ConfigDict(frozen=True)

    timestamp: int
    candidates: Tuple[InstanceCandidate, ...]

    @model_validator(mode="after")
    def _unique_ids(self):
        ids = [c.id for c in self.candidates]
        if len(ids) != len(set(ids)):
            raise ValueError("candidate ids must be unique within a snapshot")
        return self

    def by_id(self) -> Dict[str, InstanceCandidate]:
        return {c.id: c for c in self.candidates}


class InterruptEvent(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    t: int
    kind: Literal["interrupt"] = "interrupt"
    candidate_id: str = Field(..., min_length=1)
