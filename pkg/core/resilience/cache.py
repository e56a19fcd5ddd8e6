"""
Spot 中斷處理：Unavailable Offerings Cache 與排除快取項目後的重新最佳化。

快取以完整候選 id（type/region/az）為 key；要排除整個型號時，把該型號所有 AZ 都記錄進來。
"""
from __future__ import annotations

import logging
import threading
from typing import Dict, Optional, Sequence, Set

from core.config import config
from core.errors import InsufficientCapacity
from core.gss import GssConfig, GssResult, search
from core.gss.search import Solver
from core.ilp import solve
from core.model import EnrichedCandidate, InterruptEvent, PodSpec

logger = logging.getLogger(__name__)


class UnavailableOfferingsCache:
    """candidate id -> 到期時間；now < expiry 時為 active。單一寫入者、多讀取者。"""

    def __init__(self, ttl: Optional[int] = None):
        self.ttl = config.cache_ttl_sec if ttl is None else int(ttl)
        if self.ttl < 0:
            raise ValueError("ttl must be >= 0")
        self._entries: Dict[str, int] = {}
        self._lock = threading.Lock()

    def record(self, candidate_id: str, t: int) -> int:
        """記錄（或刷新）一筆中斷，回傳到期時間。亂序事件不會把到期時間往前調。"""
        expiry = t + self.ttl
        with self._lock:
            current = self._entries.get(candidate_id)
            if current is None or expiry > current:
                self._entries[candidate_id] = expiry
            return self._entries[candidate_id]

    def expiry(self, candidate_id: str) -> Optional[int]:
        with self._lock:
            return self._entries.get(candidate_id)

    def is_active(self, candidate_id: str, now: int) -> bool:
        exp = self.expiry(candidate_id)
        return exp is not None and now < exp

    def active_ids(self, now: int) -> Set[str]:
        with self._lock:
            return {cid for cid, exp in self._entries.items() if now < exp}

    def entries(self) -> Dict[str, int]:
        with self._lock:
            return dict(self._entries)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def record_interrupt(cache: UnavailableOfferingsCache, event: InterruptEvent) -> UnavailableOfferingsCache:
    expiry = cache.record(event.candidate_id, event.t)
    logger.info(" [Cache] %s 中斷於 t=%d，排除至 t=%d", event.candidate_id, event.t, expiry)
    return cache


def reoptimize(
    enriched: Sequence[EnrichedCandidate],
    spec: PodSpec,
    cache: UnavailableOfferingsCache,
    now: int,
    cfg: Optional[GssConfig] = None,
    solver: Solver = solve,
) -> GssResult:
    """排除 active 的快取項目後重跑 GSS；容量不足時錯誤中附上被排除候選原可提供的 pod 數。"""
    active = cache.active_ids(now)
    kept = [c for c in enriched if c.id not in active]
    excluded = [c for c in enriched if c.id in active]
    excluded_pods = sum(c.pod_capacity * c.t3 for c in excluded)
    available = sum(c.pod_capacity * c.t3 for c in kept)

    if excluded:
        logger.info(" [Reoptimize] t=%d 排除 %d 個候選（%d pods）", now, len(excluded), excluded_pods)
    if not kept or available < spec.req_pod:
        raise InsufficientCapacity(spec.req_pod, available, excluded_pods)
    return search(kept, spec, cfg, solver)
