"""
共用 fixtures：候選資料集路徑、候選建構 helper、整個評估情境的 compare 結果（session 內只跑一次）。
"""
import os
import sys
from pathlib import Path

import pytest

# 確保專案根在 path，以便 import core
script_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(os.path.dirname(script_dir))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from core.model import InstanceCandidate, make_candidate_id  # noqa: E402

FIXTURES = Path(script_dir) / "fixtures"

# ≥ 比較允許的相對誤差；「嚴格大於」需要的最小差距
REL_TOL = 1e-12
STRICT_MARGIN = 1e-9


def geq(a: float, b: float) -> bool:
    return a >= b - REL_TOL * max(abs(a), abs(b))


def strictly_greater(a: float, b: float) -> bool:
    return a > b + STRICT_MARGIN * max(abs(a), abs(b))


def make_candidate(name: str = "m5.large", az: str = "us-east-1a", **overrides) -> InstanceCandidate:
    region = az[:-1]
    data = dict(
        id=make_candidate_id(name, region, az),
        instance_type=name,
        region=region,
        az=az,
        cpu=4,
        mem=8,
        spot_price=0.05,
        ondemand_price=0.17,
        benchmark=10000,
        t3=20,
        sps_single=3,
        interrupt_freq=0,
    )
    data.update(overrides)
    return InstanceCandidate(**data)


@pytest.fixture
def fixture_30() -> Path:
    return FIXTURES / "candidates_30.csv"


@pytest.fixture
def fixture_8() -> Path:
    return FIXTURES / "candidates_8.csv"


@pytest.fixture
def workload_fixture() -> Path:
    return FIXTURES / "workload_3.csv"


@pytest.fixture(scope="session")
def compare_30():
    """compare 在 30 個候選 × 20 個情境上的 payload。"""
    from core.cli import build_parser, cmd_compare

    args = build_parser().parse_args(["compare", "--candidates", str(FIXTURES / "candidates_30.csv")])
    return cmd_compare(args)
