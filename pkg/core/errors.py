"""
領域錯誤定義：所有可預期的失敗都繼承 SpotOptError，CLI 依類別對應 exit code。
"""
from __future__ import annotations

from typing import Optional


class SpotOptError(Exception):
    """所有領域錯誤的基底類別。"""


class InvalidSpec(SpotOptError):
    def __init__(self, field: str, reason: str = "must be positive"):
        self.field = field
        self.reason = reason
        super().__init__(f"InvalidSpec({field}): {reason}")


class ParseError(SpotOptError):
    """輸入檔解析失敗；line 從 1 起算（header 為第 1 行）。"""

    def __init__(self, line: int, column: Optional[str], reason: str, path: Optional[str] = None):
        self.line = line
        self.column = column
        self.reason = reason
        self.path = path
        where = f"{path}:" if path else ""
        col = f" column {column!r}" if column else ""
        super().__init__(f"ParseError at {where}line {line}{col}: {reason}")


class DuplicateId(SpotOptError):
    def __init__(self, candidate_id: str):
        self.candidate_id = candidate_id
        super().__init__(f"DuplicateId: {candidate_id}")


class NonMonotonicTimestamps(SpotOptError):
    def __init__(self, timestamp: int):
        self.timestamp = timestamp
        super().__init__(f"NonMonotonicTimestamps: snapshot {timestamp} is not strictly increasing")


class EmptyTrace(SpotOptError):
    pass


class NoFeasibleCandidates(SpotOptError):
    """前處理後沒有任何可放置 pod 且 T3 > 0 的候選。"""


class EmptyCandidateSet(SpotOptError):
    pass


class InsufficientCapacity(SpotOptError):
    """
    可分配的 pod 容量不足。

    available 為 Σ Pod_i·T3_i（或基線策略的可用上限）；
    excluded_pods 為因 Unavailable Offerings Cache 被排除的候選原本可提供的容量。
    """

    def __init__(self, demand: int, available: int, excluded_pods: int = 0):
        self.demand = demand
        self.available = available
        self.excluded_pods = excluded_pods
        self.gap = demand - available
        msg = f"InsufficientCapacity: need {demand} pods, only {available} allocatable (gap {self.gap})"
        if excluded_pods:
            msg += f"; excluded offerings would add {excluded_pods}"
        super().__init__(msg)


class ProblemTooLarge(SpotOptError):
    def __init__(self, residual_demand: int, limit: int):
        self.residual_demand = residual_demand
        self.limit = limit
        super().__init__(f"ProblemTooLarge: residual demand {residual_demand} exceeds {limit}")


class OracleTooLarge(SpotOptError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"OracleTooLarge: {size} count vectors exceed {limit}")


class EmptyAllocation(SpotOptError):
    pass


class NoCandidatesPassFilter(SpotOptError):
    pass


class UnknownCandidate(SpotOptError):
    def __init__(self, candidate_id: str):
        self.candidate_id = candidate_id
        super().__init__(f"UnknownCandidate: {candidate_id}")
