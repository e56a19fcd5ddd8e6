"""
端到端節點選擇流程：讀取候選 -> 前處理 -> GSS + ILP -> 報表。
"""
import logging
from typing import Dict, List, Optional, Sequence

from core.config import config
from core.gss import GssConfig, GssResult, search
from core.ingest import load_candidates
from core.model import Allocation, EnrichedCandidate, InstanceCandidate, PodSpec, Workload, validate_pod_spec
from core.preprocess import enrich
from core.resilience import UnavailableOfferingsCache, reoptimize
from core.sim import SCHEMA_VERSION
from shared.file_manager import file_manager

logger = logging.getLogger(__name__)


def allocation_payload(allocation: Allocation) -> Dict:
    return {
        "entries": dict(allocation.entries),
        "total_pods_allocated": allocation.total_pods_allocated,
        "hourly_cost": allocation.hourly_cost,
        "node_count": allocation.node_count,
        "max_per_type": allocation.max_per_type,
    }


def capability_share(allocation: Allocation, enriched: Sequence[EnrichedCandidate]) -> Dict[str, float]:
    """各能力類別（general / network / disk / disk-network）佔的節點比例。"""
    by_id = {c.id: c for c in enriched}
    share = {w.value: 0.0 for w in Workload}
    total = allocation.node_count
    if total == 0:
        return share
    for cid, x in allocation.entries.items():
        share[by_id[cid].base.capability] += x / total
    return share


class NodeSelectionPipeline:
    def __init__(self, gss_config: Optional[GssConfig] = None):
        self.gss_config = gss_config or GssConfig()

    def run(
        self,
        candidates_path: str,
        spec: PodSpec,
        *,
        exclude: Sequence[str] = (),
        run_name: Optional[str] = None,
    ) -> Dict:
        validate_pod_spec(spec)
        logger.info(" [Pipeline] Start: %s workload=%s", spec.label(), spec.workload.value)

        candidates = self._step_1_load(candidates_path)
        enriched = self._step_2_preprocess(candidates, spec)
        result = self._step_3_search(enriched, spec, exclude)
        payload = self._step_4_report(result, enriched, spec, exclude)

        if run_name:
            output_path = file_manager.get_output_file_path(run_name, "optimize.json")
            file_manager.save_json(payload, output_path, backup=True)
            logger.info(" [Pipeline] Output: %s", output_path)

        logger.info(" [Pipeline] Complete")
        return payload

    def _step_1_load(self, candidates_path: str) -> List[InstanceCandidate]:
        logger.info(" --- Step 1: Load candidates ---")
        return load_candidates(candidates_path)

    def _step_2_preprocess(self, candidates: List[InstanceCandidate], spec: PodSpec) -> List[EnrichedCandidate]:
        logger.info(" --- Step 2: Preprocess ---")
        enriched = enrich(candidates, spec)
        logger.info(" [Pipeline] %d / %d candidates feasible", len(enriched), len(candidates))
        return enriched

    def _step_3_search(
        self,
        enriched: List[EnrichedCandidate],
        spec: PodSpec,
        exclude: Sequence[str],
    ) -> GssResult:
        logger.info(" --- Step 3: Golden Section Search (ε=%g) ---", self.gss_config.epsilon)
        if not exclude:
            return search(enriched, spec, self.gss_config)
        # --exclude 與中斷事件走同一條排除路徑
        cache = UnavailableOfferingsCache(config.cache_ttl_sec)
        for cid in exclude:
            cache.record(cid, 0)
        return reoptimize(enriched, spec, cache, 0, self.gss_config)

    def _step_4_report(
        self,
        result: GssResult,
        enriched: List[EnrichedCandidate],
        spec: PodSpec,
        exclude: Sequence[str],
    ) -> Dict:
        logger.info(" --- Step 4: Report ---")
        return {
            "schema_version": SCHEMA_VERSION,
            "spec": spec.model_dump(mode="json"),
            "allocation": allocation_payload(result.best_allocation),
            "efficiency": result.best_report.model_dump(mode="json"),
            "alpha": result.best_alpha,
            "iteration_count": result.iteration_count,
            "evaluations": [{"alpha": a, "e_total": e} for a, e in result.evaluations],
            "alpha_zero_probe": result.probe_report is not None,
            "improvement_over_alpha_zero": result.improvement_over_probe,
            "capability_share": capability_share(result.best_allocation, enriched),
            "excluded": sorted(exclude),
        }
