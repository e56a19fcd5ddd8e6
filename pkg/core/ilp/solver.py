"""
單一 α 下的實例數選擇問題：

    min Σ c_i·x_i   s.t.  Σ Pod_i·x_i ≥ demand,  0 ≤ x_i ≤ T3_i,  x_i 為整數
    c_i = −α·(Perf_i / Perf_min) + (1 − α)·(SP_i / SP_min)

這是帶上下界的最小成本覆蓋背包。c_i < 0 的候選直接取滿 T3_i，
其餘以需求維度上的動態規劃精確求解（bounded count 以二進位拆分成 0/1 物品）。

比較全部在整數上進行：每個浮點係數以 as_integer_ratio() 展開後放大到共同分母。
同為最佳解時依序比較總 pod 數（越少越好）與依 id 排列的數量向量（字典序越大越好）。
"""
from __future__ import annotations

import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config import config
from core.errors import InsufficientCapacity, OracleTooLarge, ProblemTooLarge
from core.model import Allocation, EnrichedCandidate, PodSpec, build_allocation
from core.preprocess import Normalizers, normalizers

logger = logging.getLogger(__name__)


class IlpProblem(BaseModel):
    model_config = ConfigDict(frozen=True)

    ids: Tuple[str, ...]
    coefficients: Tuple[float, ...]
    capacities: Tuple[int, ...]
    bounds: Tuple[int, ...]
    prices: Tuple[float, ...]
    demand: int = Field(..., ge=1)
    alpha: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _consistent(self):
        n = len(self.ids)
        if not (len(self.coefficients) == len(self.capacities) == len(self.bounds) == len(self.prices) == n):
            raise ValueError("per-candidate vectors must have the same length")
        if len(set(self.ids)) != n:
            raise ValueError("candidate ids must be unique")
        if any(b < 1 for b in self.bounds):
            raise ValueError("bounds must be >= 1")
        if any(p < 1 for p in self.capacities):
            raise ValueError("capacities must be >= 1")
        if not all(math.isfinite(c) for c in self.coefficients):
            raise ValueError("coefficients must be finite")
        return self

    @property
    def max_pods(self) -> int:
        return sum(p * b for p, b in zip(self.capacities, self.bounds))


def build_problem(
    enriched: Sequence[EnrichedCandidate],
    spec: PodSpec,
    alpha: float,
    norms: Optional[Normalizers] = None,
) -> IlpProblem:
    """由前處理後的候選組出 IlpProblem；T3 = 0 的候選不進入問題。"""
    norms = norms or normalizers(enriched)
    usable = sorted((c for c in enriched if c.t3 > 0), key=lambda c: c.id)
    return IlpProblem(
        ids=tuple(c.id for c in usable),
        coefficients=tuple(
            -alpha * (c.perf / norms.perf_min) + (1.0 - alpha) * (c.spot_price / norms.sp_min) for c in usable
        ),
        capacities=tuple(c.pod_capacity for c in usable),
        bounds=tuple(c.t3 for c in usable),
        prices=tuple(c.spot_price for c in usable),
        demand=spec.req_pod,
        alpha=alpha,
    )


def integer_coefficients(coefficients: Sequence[float]) -> List[int]:
    """把浮點係數放大到共同的 2 的冪次分母，比例完全保留。"""
    ratios = [float(c).as_integer_ratio() for c in coefficients]
    if not ratios:
        return []
    scale = max(den for _, den in ratios)
    return [num * (scale // den) for num, den in ratios]


def objective(problem: IlpProblem, counts: Dict[str, int]) -> float:
    index = {cid: i for i, cid in enumerate(problem.ids)}
    return math.fsum(problem.coefficients[index[cid]] * x for cid, x in counts.items())


def _to_allocation(problem: IlpProblem, counts: Dict[str, int]) -> Allocation:
    return build_allocation(
        counts,
        dict(zip(problem.ids, problem.capacities)),
        dict(zip(problem.ids, problem.prices)),
        alpha=problem.alpha,
        objective=objective(problem, counts),
    )


def _check_capacity(problem: IlpProblem) -> None:
    available = problem.max_pods
    if available < problem.demand:
        raise InsufficientCapacity(problem.demand, available)


def _cover_dp(
    caps: List[int],
    bounds: List[int],
    keys: List[int],
    demand: int,
) -> List[int]:
    """
    最小化 Σ key_i·x_i，使 Σ cap_i·x_i ≥ demand。

    g[k][d]：只用第 k..m-1 個候選覆蓋 d 個 pod 的最小成本（超出的覆蓋量截在 0）。
    回推時由前往後，對每個候選取能維持最佳值的最大 x。
    """
    m = len(caps)
    inf = sum(k * b for k, b in zip(keys, bounds)) + 1
    tables: List[List[int]] = [[]] * (m + 1)
    cur = [0] + [inf] * demand
    tables[m] = cur
    for k in range(m - 1, -1, -1):
        remaining = bounds[k]
        size = 1
        while remaining > 0:
            take = min(size, remaining)
            w = caps[k] * take
            cost = keys[k] * take
            head = [min(v, cost) for v in cur[1 : w + 1]]
            tail = [min(v, u + cost) for v, u in zip(cur[w + 1 :], cur[1 : demand + 1 - w])]
            cur = [0] + head + tail
            remaining -= take
            size *= 2
        tables[k] = cur

    counts = [0] * m
    d = demand
    for k in range(m):
        target = tables[k][d]
        nxt = tables[k + 1]
        for x in range(bounds[k], -1, -1):
            rest = max(0, d - caps[k] * x)
            if x * keys[k] + nxt[rest] == target:
                counts[k] = x
                d = rest
                break
    return counts


def solve(problem: IlpProblem, *, max_demand: Optional[int] = None) -> Allocation:
    """精確求解；容量不足時丟出 InsufficientCapacity（附缺口）。"""
    _check_capacity(problem)
    limit = config.max_demand if max_demand is None else max_demand

    order = sorted(range(len(problem.ids)), key=lambda i: problem.ids[i])
    scaled = integer_coefficients(problem.coefficients)

    counts: Dict[str, int] = {}
    covered = 0
    for i in order:
        if scaled[i] < 0:
            counts[problem.ids[i]] = problem.bounds[i]
            covered += problem.capacities[i] * problem.bounds[i]

    residual = max(0, problem.demand - covered)
    rest = [i for i in order if scaled[i] >= 0]
    if residual > 0:
        if residual > limit:
            raise ProblemTooLarge(residual, limit)
        caps = [problem.capacities[i] for i in rest]
        # 超過 ceil(residual / Pod_i) 的數量只會更差
        bounds = [min(problem.bounds[i], -(-residual // problem.capacities[i])) for i in rest]
        weight = sum(c * b for c, b in zip(caps, bounds)) + 1
        keys = [scaled[i] * weight + problem.capacities[i] for i in rest]
        for i, x in zip(rest, _cover_dp(caps, bounds, keys, residual)):
            counts[problem.ids[i]] = x

    logger.debug(" [ILP] α=%.6f saturated=%d residual=%d", problem.alpha, len(order) - len(rest), residual)
    return _to_allocation(problem, counts)


def brute_force_solve(problem: IlpProblem, *, limit: Optional[int] = None) -> Allocation:
    """窮舉所有 0 ≤ x_i ≤ T3_i 的數量向量；測試用的 oracle。"""
    _check_capacity(problem)
    limit = config.oracle_limit if limit is None else limit
    size = math.prod(b + 1 for b in problem.bounds)
    if size > limit:
        raise OracleTooLarge(size, limit)

    order = sorted(range(len(problem.ids)), key=lambda i: problem.ids[i])
    scaled = integer_coefficients(problem.coefficients)
    caps = [problem.capacities[i] for i in order]
    coef = [scaled[i] for i in order]

    best_key = None
    best: Tuple[int, ...] = ()
    for xs in itertools.product(*(range(problem.bounds[i] + 1) for i in order)):
        pods = sum(c * x for c, x in zip(caps, xs))
        if pods < problem.demand:
            continue
        key = (sum(c * x for c, x in zip(coef, xs)), pods, tuple(-x for x in xs))
        if best_key is None or key < best_key:
            best_key, best = key, xs

    return _to_allocation(problem, {problem.ids[i]: x for i, x in zip(order, best)})
