"""
讀取候選資料集（CSV）、市場快照目錄與中斷事件（JSON lines），轉成驗證過的領域物件。

格式細節見 docs/INPUT_FORMATS.md。行號從 1 起算，header 為第 1 行。
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import pandas as pd
from pydantic import ValidationError

from core.errors import DuplicateId, NonMonotonicTimestamps, ParseError
from core.model import InstanceCandidate, InterruptEvent, MarketSnapshot, make_candidate_id

logger = logging.getLogger(__name__)

CANDIDATE_COLUMNS = [
    "id",
    "instance_type",
    "region",
    "az",
    "vcpu",
    "mem_gib",
    "spot_price",
    "ondemand_price",
    "base_ondemand_price",
    "coremark_single",
    "t3",
    "network_optimized",
    "disk_optimized",
    "sps_single",
    "interrupt_freq",
]

# CSV 欄位 -> InstanceCandidate 欄位
_FIELD_TO_COLUMN = {
    "cpu": "vcpu",
    "mem": "mem_gib",
    "benchmark": "coremark_single",
}
_COLUMN_TO_FIELD = {v: k for k, v in _FIELD_TO_COLUMN.items()}

_POSITIVE_FLOATS = ("vcpu", "mem_gib", "spot_price", "ondemand_price", "coremark_single")


def _parse_float(raw: str, line: int, column: str, path: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(line, column, f"not a number: {raw!r}", path)
    if not math.isfinite(value):
        raise ParseError(line, column, f"not finite: {raw!r}", path)
    return value


def _parse_int(raw: str, line: int, column: str, path: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(line, column, f"not an integer: {raw!r}", path)


def _parse_bool(raw: str, line: int, column: str, path: str) -> bool:
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise ParseError(line, column, f"expected true/false, got {raw!r}", path)


def _column_of(err: ValidationError) -> Optional[str]:
    for e in err.errors():
        if e.get("loc"):
            field = str(e["loc"][0])
            return _FIELD_TO_COLUMN.get(field, field)
    return None


def _row_to_candidate(row: Dict[str, str], line: int, path: str) -> InstanceCandidate:
    # 欄位不足的列會被 pandas 補成 NaN
    values = {k: (v.strip() if isinstance(v, str) else "") for k, v in row.items()}

    for col in ("id", "instance_type", "region", "az"):
        if not values[col]:
            raise ParseError(line, col, "required value is blank", path)

    data: Dict[str, object] = {
        "id": values["id"],
        "instance_type": values["instance_type"],
        "region": values["region"],
        "az": values["az"],
    }
    for col in _POSITIVE_FLOATS:
        if not values[col]:
            raise ParseError(line, col, "required value is blank", path)
        number = _parse_float(values[col], line, col, path)
        if number <= 0:
            raise ParseError(line, col, f"must be positive, got {values[col]}", path)
        data[_COLUMN_TO_FIELD.get(col, col)] = number

    if values["base_ondemand_price"]:
        base = _parse_float(values["base_ondemand_price"], line, "base_ondemand_price", path)
        if base <= 0:
            raise ParseError(line, "base_ondemand_price", "must be positive", path)
        data["base_ondemand_price"] = base

    if not values["t3"]:
        raise ParseError(line, "t3", "required value is blank", path)
    data["t3"] = _parse_int(values["t3"], line, "t3", path)

    data["network_optimized"] = _parse_bool(values["network_optimized"], line, "network_optimized", path)
    data["disk_optimized"] = _parse_bool(values["disk_optimized"], line, "disk_optimized", path)

    for col in ("sps_single", "interrupt_freq"):
        if values[col]:
            data[col] = _parse_int(values[col], line, col, path)

    expected = make_candidate_id(values["instance_type"], values["region"], values["az"])
    if values["id"] != expected:
        raise ParseError(line, "id", f"expected {expected!r}", path)

    try:
        return InstanceCandidate(**data)
    except ValidationError as e:
        raise ParseError(line, _column_of(e), str(e.errors()[0].get("msg", e)), path)


def _decode_utf8(data: bytes, path: str) -> str:
    """整份解碼；失敗時回報壞掉的位元組所在的行號。"""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        raise ParseError(line, None, "invalid UTF-8", path)


def _malformed_line(text: str, width: int) -> int:
    # pandas 的 ParserError 不一定帶行號，改用 csv 找出欄位數不符的那一行
    reader = csv.reader(io.StringIO(text))
    for record in reader:
        if len(record) > width:
            return reader.line_num
    return 1


def load_candidates(path) -> List[InstanceCandidate]:
    """讀取候選 CSV；header 必須與 CANDIDATE_COLUMNS 完全相同。"""
    path = Path(path)
    text = _decode_utf8(path.read_bytes(), str(path))
    try:
        # 保留空白行，列 index 才能對回實際行號
        df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        raise ParseError(1, None, "file is empty (header row missing)", str(path))
    except pd.errors.ParserError as e:
        line = _malformed_line(text, len(CANDIDATE_COLUMNS))
        raise ParseError(line, None, f"malformed CSV: {e}", str(path))

    if list(df.columns) != CANDIDATE_COLUMNS:
        raise ParseError(1, None, f"header must be exactly {','.join(CANDIDATE_COLUMNS)}", str(path))

    candidates: List[InstanceCandidate] = []
    seen = set()
    for idx, row in enumerate(df.to_dict(orient="records")):
        if all(not (isinstance(v, str) and v.strip()) for v in row.values()):
            continue
        cand = _row_to_candidate(row, idx + 2, str(path))
        if cand.id in seen:
            raise DuplicateId(cand.id)
        seen.add(cand.id)
        candidates.append(cand)

    logger.debug(" [Ingest] %s: %d candidates", path, len(candidates))
    return candidates


def _fmt_float(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def _fmt_int(value: Optional[int]) -> str:
    return "" if value is None else str(int(value))


def dump_candidates(candidates: Iterable[InstanceCandidate], path) -> Path:
    """load_candidates 的反函數；浮點數以 repr 寫出，重新讀取後值完全相同。"""
    rows = [
        {
            "id": c.id,
            "instance_type": c.instance_type,
            "region": c.region,
            "az": c.az,
            "vcpu": _fmt_float(c.cpu),
            "mem_gib": _fmt_float(c.mem),
            "spot_price": _fmt_float(c.spot_price),
            "ondemand_price": _fmt_float(c.ondemand_price),
            "base_ondemand_price": _fmt_float(c.base_ondemand_price),
            "coremark_single": _fmt_float(c.benchmark),
            "t3": _fmt_int(c.t3),
            "network_optimized": "true" if c.network_optimized else "false",
            "disk_optimized": "true" if c.disk_optimized else "false",
            "sps_single": _fmt_int(c.sps_single),
            "interrupt_freq": _fmt_int(c.interrupt_freq),
        }
        for c in candidates
    ]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=CANDIDATE_COLUMNS).to_csv(path, index=False)
    return path


def load_trace(directory) -> List[MarketSnapshot]:
    """目錄內每個 <epoch>.csv 為一個快照，依時間遞增排序。"""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"trace directory not found: {directory}")

    stamped = []
    for f in directory.glob("*.csv"):
        try:
            ts = int(f.stem)
        except ValueError:
            raise ParseError(0, None, f"snapshot file name is not an epoch timestamp: {f.name}", str(f))
        stamped.append((ts, f))
    stamped.sort(key=lambda item: (item[0], item[1].name))

    snapshots: List[MarketSnapshot] = []
    for ts, f in stamped:
        if snapshots and ts <= snapshots[-1].timestamp:
            raise NonMonotonicTimestamps(ts)
        snapshots.append(MarketSnapshot(timestamp=ts, candidates=tuple(load_candidates(f))))

    logger.info(" [Ingest] trace %s: %d snapshots", directory, len(snapshots))
    return snapshots


def load_events(path) -> List[InterruptEvent]:
    """每行一個 JSON 物件；空白行略過，依 t 穩定排序。"""
    path = Path(path)
    events: List[InterruptEvent] = []
    with open(path, "rb") as f:
        for line_no, raw_bytes in enumerate(f, start=1):
            try:
                raw = raw_bytes.decode("utf-8")
            except UnicodeDecodeError:
                raise ParseError(line_no, None, "invalid UTF-8", str(path))
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as e:
                raise ParseError(line_no, None, f"invalid JSON: {e.msg}", str(path))
            if not isinstance(obj, dict):
                raise ParseError(line_no, None, "expected a JSON object", str(path))
            try:
                events.append(InterruptEvent.model_validate(obj))
            except ValidationError as e:
                raise ParseError(line_no, _column_of(e), str(e.errors()[0].get("msg", e)), str(path))
    events.sort(key=lambda e: e.t)
    return events
