"""
命令列介面：python -m core <command>

    optimize     GSS + ILP 選出實例組合
    sweep-alpha  在 α 格點上逐一解 ILP（E_Total 對 α 的曲線）
    compare      在評估情境上比較所有策略，以 gss-ilp 正規化
    simulate     trace replay，輸出 JSON 與 CSV 報表
    tolerance    不同 ε 下的評估次數與結果品質

stdout 只輸出 JSON payload；log 一律寫到 stderr（等級由 SPOT_OPT_LOG 控制）。
Exit code：0 成功、2 輸入錯誤、3 容量不足。
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError
from tqdm import tqdm

from core.baselines import BaselineConfig
from core.config import config
from core.errors import (
    DuplicateId,
    EmptyTrace,
    InsufficientCapacity,
    InvalidSpec,
    NoCandidatesPassFilter,
    NoFeasibleCandidates,
    NonMonotonicTimestamps,
    ParseError,
    ProblemTooLarge,
    SpotOptError,
)
from core.gss import GssConfig, evaluate_alpha, iteration_bound, search
from core.ingest import load_candidates, load_events, load_trace
from core.model import PodSpec, Workload, validate_pod_spec
from core.preprocess import enrich, normalizers
from core.run_pipeline import NodeSelectionPipeline
from core.sim import SCHEMA_VERSION, STRATEGY_NAMES, build_strategies, replay, scenario_grid
from shared.file_manager import file_manager

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPACITY = 3

_INPUT_ERRORS = (
    InvalidSpec,
    ParseError,
    DuplicateId,
    NonMonotonicTimestamps,
    EmptyTrace,
    ProblemTooLarge,
    FileNotFoundError,
    ValidationError,
    ValueError,
)
_CAPACITY_ERRORS = (InsufficientCapacity, NoFeasibleCandidates, NoCandidatesPassFilter)

DEFAULT_TOLERANCES = "0.1,0.05,0.01,0.005,0.001"


def configure_logging(level: str) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def _progress(items, desc: str):
    return tqdm(items, desc=desc, file=sys.stderr, disable=not sys.stderr.isatty())


def _csv_list(raw: str) -> List[str]:
    return [s.strip() for s in raw.split(",") if s.strip()]


def _spec_from(args: argparse.Namespace) -> PodSpec:
    spec = PodSpec(
        req_cpu=args.cpu,
        req_mem=args.mem,
        req_pod=args.pods,
        workload=Workload(args.workload),
    )
    return validate_pod_spec(spec)


def _gss_config(args: argparse.Namespace) -> GssConfig:
    epsilon = config.default_epsilon if args.epsilon is None else args.epsilon
    return GssConfig(epsilon=epsilon)


# ==========================================
# Commands
# ==========================================


def cmd_optimize(args: argparse.Namespace) -> Dict:
    pipeline = NodeSelectionPipeline(_gss_config(args))
    return pipeline.run(args.candidates, _spec_from(args), exclude=args.exclude or (), run_name=args.run)


def cmd_sweep_alpha(args: argparse.Namespace) -> Dict:
    spec = _spec_from(args)
    if not 0.0 < args.step <= 1.0:
        raise ValueError("--step must be in (0, 1]")
    enriched = enrich(load_candidates(args.candidates), spec)
    norms = normalizers(enriched)

    # {0, step, 2·step, ...} 再補上 1；step 不整除 1 時最後一格較短
    grid = np.unique(np.round(np.append(np.arange(0.0, 1.0, args.step), 1.0), 12))

    rows = []
    for alpha in _progress(grid, "sweep-alpha"):
        allocation, report = evaluate_alpha(enriched, spec, float(alpha), norms=norms)
        rows.append(
            {
                "alpha": float(alpha),
                "e_total": report.e_total,
                "e_perf_cost": report.e_perf_cost,
                "e_over_pods": report.e_over_pods,
                "hourly_cost": allocation.hourly_cost,
                "pods": allocation.total_pods_allocated,
                "nodes": allocation.node_count,
                "gss_choice": False,
            }
        )

    result = search(enriched, spec, _gss_config(args))
    nearest = int(np.argmin(np.abs(grid - result.best_alpha)))
    rows[nearest]["gss_choice"] = True

    if args.plot:
        from core.plots import plot_sweep

        plot_sweep(rows, result.best_alpha, args.plot)

    return {
        "schema_version": SCHEMA_VERSION,
        "spec": spec.model_dump(mode="json"),
        "step": args.step,
        "rows": rows,
        "gss": {
            "alpha": result.best_alpha,
            "e_total": result.best_report.e_total,
            "iteration_count": result.iteration_count,
        },
    }


def _summarize(rows: List[Dict], names: Sequence[str]) -> Dict[str, Dict]:
    """每個策略的正規化 E_Total 平均、gss-ilp 相對改善與單型號最大節點數分佈。"""
    summary = {}
    for name in names:
        mine = [r for r in rows if r["strategy"] == name and r["error"] is None]
        normalized = [r["normalized"] for r in mine if r["normalized"] is not None]
        improvement = [1.0 / r["normalized"] - 1.0 for r in mine if r["normalized"]]
        over_alpha_zero = [r["improvement_over_alpha_zero"] for r in mine if r["improvement_over_alpha_zero"]]
        max_counts = np.array([r["max_per_type"] for r in mine], dtype=np.int64)
        summary[name] = {
            "scenarios_ok": len(mine),
            "scenarios_failed": sum(1 for r in rows if r["strategy"] == name and r["error"] is not None),
            "mean_normalized": float(np.mean(normalized)) if normalized else None,
            "mean_gss_improvement": float(np.mean(improvement)) if improvement else None,
            "mean_improvement_over_alpha_zero": float(np.mean(over_alpha_zero)) if over_alpha_zero else None,
            "exceeds_t3_scenarios": sum(1 for r in mine if r["exceeds_t3"]),
            "max_per_type": (
                {
                    "min": int(max_counts.min()),
                    "median": float(np.median(max_counts)),
                    "max": int(max_counts.max()),
                }
                if len(max_counts)
                else None
            ),
        }
    return summary


def _alpha_zero_e_total(candidates, spec: PodSpec) -> Optional[float]:
    """同一情境下純成本（α = 0）解的 E_Total；不論 alpha-0 策略是否被選入都會計算。"""
    try:
        _, report = evaluate_alpha(enrich(candidates, spec), spec, 0.0)
    except SpotOptError:
        return None
    return report.e_total


def cmd_compare(args: argparse.Namespace) -> Dict:
    candidates = load_candidates(args.candidates)
    t3 = {c.id: c.t3 for c in candidates}
    names = _csv_list(args.strategies) if args.strategies else list(STRATEGY_NAMES)
    if "gss-ilp" not in names:
        names.insert(0, "gss-ilp")
    strategies = build_strategies(
        names,
        _gss_config(args),
        BaselineConfig(spotverse_threshold=args.threshold) if args.threshold is not None else None,
    )
    workload = Workload(args.workload)

    rows: List[Dict] = []
    for spec in _progress(scenario_grid(workload), "compare"):
        cells = []
        for strategy in strategies:
            cell = {
                "scenario": spec.label(),
                "req_pod": spec.req_pod,
                "req_cpu": spec.req_cpu,
                "req_mem": spec.req_mem,
                "strategy": strategy.name,
                "e_total": None,
                "normalized": None,
                "hourly_cost": None,
                "nodes": 0,
                "pods": 0,
                "max_per_type": 0,
                "exceeds_t3": False,
                "improvement_over_alpha_zero": None,
                "error": None,
            }
            try:
                allocation, report = strategy.allocate(candidates, spec)
                cell.update(
                    e_total=report.e_total,
                    hourly_cost=allocation.hourly_cost,
                    nodes=allocation.node_count,
                    pods=allocation.total_pods_allocated,
                    max_per_type=allocation.max_per_type,
                    exceeds_t3=any(x > t3[cid] for cid, x in allocation.entries.items()),
                )
            except SpotOptError as e:
                cell["error"] = str(e)
            cells.append(cell)

        reference = next(c["e_total"] for c in cells if c["strategy"] == "gss-ilp")
        alpha_zero = _alpha_zero_e_total(candidates, spec)
        for cell in cells:
            if reference and cell["e_total"] is not None:
                cell["normalized"] = cell["e_total"] / reference
            if alpha_zero and cell["e_total"] is not None:
                cell["improvement_over_alpha_zero"] = cell["e_total"] / alpha_zero
        rows.extend(cells)

    summary = _summarize(rows, [s.name for s in strategies])

    if args.table:
        import pandas as pd

        file_manager.save_table(pd.DataFrame(rows), Path(args.table))
    if args.plot:
        from core.plots import plot_compare

        plot_compare(summary, args.plot)

    return {
        "schema_version": SCHEMA_VERSION,
        "workload": workload.value,
        "strategies": [s.name for s in strategies],
        "rows": rows,
        "summary": summary,
    }


def cmd_simulate(args: argparse.Namespace) -> Dict:
    spec = _spec_from(args)
    trace = load_trace(args.trace)
    events = load_events(args.events) if args.events else []
    names = _csv_list(args.strategies) if args.strategies else list(STRATEGY_NAMES[:4])
    strategies = build_strategies(names, _gss_config(args))

    report = replay(trace, events, spec, strategies, ttl=args.ttl)

    out_dir = Path(args.out) if args.out else file_manager.get_output_dir(args.run)
    json_path = out_dir / "sim_report.json"
    table_path = out_dir / "sim_records.csv"
    file_manager.save_json(report.to_payload(), json_path, backup=False)
    file_manager.save_table(report.to_frame(), table_path)

    return {
        "schema_version": SCHEMA_VERSION,
        "report_json": str(json_path),
        "report_table": str(table_path),
        "snapshots": len(trace),
        "events": len(events),
        "records": len(report.records),
        "recoveries": [r.model_dump(mode="json") for r in report.recoveries],
    }


def cmd_tolerance(args: argparse.Namespace) -> Dict:
    spec = _spec_from(args)
    enriched = enrich(load_candidates(args.candidates), spec)
    tolerances = sorted((float(x) for x in _csv_list(args.epsilons)), reverse=True)

    rows = []
    for eps in _progress(tolerances, "tolerance"):
        started = time.perf_counter()
        result = search(enriched, spec, GssConfig(epsilon=eps))
        elapsed = time.perf_counter() - started
        rows.append(
            {
                "epsilon": eps,
                "evaluations": result.iteration_count,
                "iteration_bound": iteration_bound(eps),
                "alpha": result.best_alpha,
                "e_total": result.best_report.e_total,
                # wall-clock，每次執行都不同，不屬於可重現輸出
                "solve_seconds": elapsed,
            }
        )
    finest = rows[-1]["e_total"] if rows else None
    for row in rows:
        row["relative_to_finest"] = row["e_total"] / finest if finest else None

    return {"schema_version": SCHEMA_VERSION, "spec": spec.model_dump(mode="json"), "rows": rows}


# ==========================================
# Parser
# ==========================================


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pods", type=int, required=True, help="requested pod 總數")
    p.add_argument("--cpu", type=float, required=True, help="每個 pod 的 vCPU")
    p.add_argument("--mem", type=float, required=True, help="每個 pod 的 GiB")
    _add_workload_arg(p)


def _add_workload_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--workload",
        choices=[w.value for w in Workload],
        default=Workload.GENERAL.value,
        help="工作負載偏好（預設 general）",
    )


def _add_epsilon_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, default=None, help="GSS 停止門檻（預設 SPOT_OPT_EPSILON 或 0.01）")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m core", description="Spot instance pool recommender")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="GSS + ILP 選出實例組合")
    p.add_argument("--candidates", required=True, help="候選 CSV")
    _add_spec_args(p)
    _add_epsilon_arg(p)
    p.add_argument("--exclude", nargs="*", default=[], help="排除的候選 id")
    p.add_argument("--run", default=None, help="同時寫入 data/<run>/output/optimize.json")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("sweep-alpha", help="α 格點上的 E_Total")
    p.add_argument("--candidates", required=True)
    _add_spec_args(p)
    _add_epsilon_arg(p)
    p.add_argument("--step", type=float, default=config.sweep_step, help="α 格點間距（預設 0.01）")
    p.add_argument("--plot", default=None, help="輸出 PNG 路徑")
    p.set_defaults(handler=cmd_sweep_alpha)

    p = sub.add_parser("compare", help="評估情境上比較所有策略")
    p.add_argument("--candidates", required=True)
    _add_workload_arg(p)
    _add_epsilon_arg(p)
    p.add_argument("--strategies", default=None, help=f"逗號分隔，預設 {','.join(STRATEGY_NAMES)}")
    p.add_argument("--threshold", type=float, default=None, help="SpotVerse 的 SPS/IF 門檻")
    p.add_argument("--table", default=None, help="另存扁平 CSV 表格")
    p.add_argument("--plot", default=None, help="輸出 PNG 路徑")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("simulate", help="trace replay")
    p.add_argument("--trace", required=True, help="快照目錄（<epoch>.csv）")
    p.add_argument("--events", default=None, help="中斷事件 JSON lines")
    _add_spec_args(p)
    _add_epsilon_arg(p)
    p.add_argument("--strategies", default=None, help="逗號分隔，預設 gss-ilp,greedy,spotverse-node,spotverse-pod")
    p.add_argument("--ttl", type=int, default=None, help="Unavailable Offerings Cache TTL 秒數")
    p.add_argument("--out", default=None, help="報表輸出目錄（預設 data/<run>/output）")
    p.add_argument("--run", default="simulate")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("tolerance", help="不同 ε 的評估次數與品質")
    p.add_argument("--candidates", required=True)
    _add_spec_args(p)
    p.add_argument("--epsilons", default=DEFAULT_TOLERANCES)
    p.set_defaults(handler=cmd_tolerance)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(config.log_level)
    logger.debug("config: %s", config.to_dict())

    try:
        payload = args.handler(args)
    except _CAPACITY_ERRORS as e:
        logger.error("%s", e)
        return EXIT_CAPACITY
    except (_INPUT_ERRORS + (SpotOptError,)) as e:
        logger.error("%s", e)
        return EXIT_INPUT

    sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    return EXIT_OK
