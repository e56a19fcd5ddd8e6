"""
α 的 Golden Section Search：每個 α 解一次 ILP，以 E_Total 作為要最大化的目標。

E_Total 對 α 是階梯狀而非嚴格單峰，因此回傳的是「所有評估過的點」中最好的解，
並在迴圈前多評估一次 α = 0（純成本），結果必定不劣於純成本解。
"""
from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config import config
from core.errors import EmptyAllocation, UnknownCandidate
from core.ilp import IlpProblem, build_problem, solve
from core.model import Allocation, EfficiencyReport, EnrichedCandidate, PodSpec
from core.preprocess import Normalizers, normalizers

logger = logging.getLogger(__name__)

# 搜尋幾何用精確值；iteration_bound 預設用公開的四捨五入常數
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
ROUNDED_PHI = 0.618

Solver = Callable[[IlpProblem], Allocation]


class GssConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(default_factory=lambda: config.default_epsilon, gt=0.0, lt=1.0)
    phi: float = GOLDEN
    alpha_lo: float = 0.0
    alpha_hi: float = 1.0
    probe_alpha_zero: bool = True

    @model_validator(mode="after")
    def _bracket(self):
        if not self.alpha_lo < self.alpha_hi:
            raise ValueError("alpha_lo must be < alpha_hi")
        if not 0.0 < self.phi < 1.0:
            raise ValueError("phi must be in (0, 1)")
        return self


class GssResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    best_allocation: Allocation
    best_report: EfficiencyReport
    evaluations: List[Tuple[float, float]]
    iteration_count: int
    brackets: List[Tuple[float, float]]
    probe_report: Optional[EfficiencyReport] = None

    @property
    def best_alpha(self) -> float:
        return self.best_report.alpha

    @property
    def improvement_over_probe(self) -> Optional[float]:
        """E_Total 相對 α = 0 解的比值（probe 關閉時為 None）。"""
        if self.probe_report is None or self.probe_report.e_total == 0:
            return None
        return self.best_report.e_total / self.probe_report.e_total


def iteration_bound(epsilon: float, phi: float = ROUNDED_PHI, width: float = 1.0) -> int:
    """⌈log(ε / width) / log(φ)⌉ + 1：把區間縮到 ε 以下所需的 ILP 評估次數。"""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be in (0, 1)")
    return math.ceil(math.log(epsilon / width) / math.log(phi)) + 1


def efficiency(
    allocation: Allocation,
    enriched: Sequence[EnrichedCandidate],
    spec: PodSpec,
) -> EfficiencyReport:
    """
    E_PerfCost = Σ BS_i·x_i / SP_i
    E_OverPods = Req_pod / Σ Pod_i·x_i
    E_Total    = E_PerfCost × E_OverPods
    """
    if not allocation.entries:
        raise EmptyAllocation("allocation has no instances")
    by_id: Dict[str, EnrichedCandidate] = {c.id: c for c in enriched}
    terms = []
    pods = 0
    for cid, x in allocation.entries.items():
        cand = by_id.get(cid)
        if cand is None:
            raise UnknownCandidate(cid)
        terms.append(cand.scaled_benchmark * x / cand.spot_price)
        pods += cand.pod_capacity * x
    e_perf_cost = math.fsum(terms)
    e_over_pods = spec.req_pod / pods
    return EfficiencyReport(
        e_perf_cost=e_perf_cost,
        e_over_pods=e_over_pods,
        e_total=e_perf_cost * e_over_pods,
        alpha=allocation.alpha,
    )


def evaluate_alpha(
    enriched: Sequence[EnrichedCandidate],
    spec: PodSpec,
    alpha: float,
    solver: Solver = solve,
    norms: Optional[Normalizers] = None,
) -> Tuple[Allocation, EfficiencyReport]:
    """固定 α 解一次 ILP 並計算效率。"""
    allocation = solver(build_problem(enriched, spec, alpha, norms))
    return allocation, efficiency(allocation, enriched, spec)


def search(
    enriched: Sequence[EnrichedCandidate],
    spec: PodSpec,
    cfg: Optional[GssConfig] = None,
    solver: Solver = solve,
) -> GssResult:
    cfg = cfg or GssConfig()
    norms = normalizers(enriched)
    phi = cfg.phi

    evaluations: List[Tuple[float, float]] = []
    best: Optional[Tuple[Allocation, EfficiencyReport]] = None

    def run(alpha: float) -> float:
        nonlocal best
        allocation, report = evaluate_alpha(enriched, spec, alpha, solver, norms)
        evaluations.append((alpha, report.e_total))
        logger.debug(" [GSS] α=%.6f E_Total=%.6g pods=%d", alpha, report.e_total, allocation.total_pods_allocated)
        if best is None or report.e_total > best[1].e_total:
            best = (allocation, report)
        return report.e_total

    probe_report = None
    if cfg.probe_alpha_zero:
        run(0.0)
        probe_report = best[1]

    lo, hi = cfg.alpha_lo, cfg.alpha_hi
    brackets = [(lo, hi)]
    a1 = hi - phi * (hi - lo)
    a2 = lo + phi * (hi - lo)
    e1 = run(a1)
    e2 = run(a2)

    while True:
        # 平手走 ≥ 分支（縮右側）
        shrink_right = e1 >= e2
        if shrink_right:
            hi = a2
            a2, e2 = a1, e1
        else:
            lo = a1
            a1, e1 = a2, e2
        brackets.append((lo, hi))
        if hi - lo <= cfg.epsilon:
            break
        if shrink_right:
            a1 = hi - phi * (hi - lo)
            e1 = run(a1)
        else:
            a2 = lo + phi * (hi - lo)
            e2 = run(a2)

    allocation, report = best
    logger.info(
        " [GSS] %s: %d 次評估，最佳 α=%.4f E_Total=%.6g",
        spec.label(),
        len(evaluations),
        report.alpha,
        report.e_total,
    )
    return GssResult(
        best_allocation=allocation,
        best_report=report,
        evaluations=evaluations,
        iteration_count=len(evaluations),
        brackets=brackets,
        probe_report=probe_report,
    )
