"""
α sweep 曲線與策略比較長條圖（PNG，Agg backend，不需要顯示器）。
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_sweep(rows: List[Dict], gss_alpha: Optional[float], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ok = [r for r in rows if r.get("e_total") is not None]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([r["alpha"] for r in ok], [r["e_total"] for r in ok], drawstyle="steps-post", label="E_Total")
    if gss_alpha is not None:
        ax.axvline(gss_alpha, color="tab:red", linestyle="--", label=f"GSS α={gss_alpha:.3f}")
    ax.set_xlabel("α")
    ax.set_ylabel("E_Total")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_compare(summary: Dict[str, Dict], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(summary)
    values = [summary[n].get("mean_normalized") or 0.0 for n in names]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar(names, values, color="tab:blue")
    ax.axhline(1.0, color="black", linewidth=0.8)
    ax.set_ylabel("normalized E_Total (gss-ilp = 1.0)")
    ax.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
