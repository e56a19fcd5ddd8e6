"""
測試候選 CSV、快照目錄與中斷事件的讀取
"""
import json

import pytest

from core.errors import DuplicateId, NonMonotonicTimestamps, ParseError
from core.ingest import CANDIDATE_COLUMNS, dump_candidates, load_candidates, load_events, load_trace

HEADER = ",".join(CANDIDATE_COLUMNS)
C6I_ROW = "c6i.xlarge/us-east-1/us-east-1a,c6i.xlarge,us-east-1,us-east-1a,4,8,0.17,0.17,,10000,20,false,false,,"


def _write(tmp_path, *lines, name="candidates.csv"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_single_row(tmp_path):
    (c,) = load_candidates(_write(tmp_path, HEADER, C6I_ROW))
    assert c.id == "c6i.xlarge/us-east-1/us-east-1a"
    assert c.spot_price == 0.17
    assert c.t3 == 20
    assert c.base_ondemand_price is None
    assert c.sps_single is None and c.interrupt_freq is None
    assert c.network_optimized is False


def test_header_only_is_empty(tmp_path):
    assert load_candidates(_write(tmp_path, HEADER)) == []


def test_negative_price_rejected_with_line(tmp_path):
    bad = C6I_ROW.replace(",0.17,0.17,", ",-1,0.17,")
    with pytest.raises(ParseError) as exc:
        load_candidates(_write(tmp_path, HEADER, C6I_ROW.replace("us-east-1a", "us-east-1b"), bad))
    assert exc.value.line == 3
    assert exc.value.column == "spot_price"


def test_line_number_counts_blank_lines(tmp_path):
    bad = C6I_ROW.replace("us-east-1a", "us-east-1b").replace(",0.17,0.17,", ",-1,0.17,")
    path = _write(tmp_path, HEADER, C6I_ROW, "", bad)
    with pytest.raises(ParseError) as exc:
        load_candidates(path)
    assert exc.value.line == 4
    assert exc.value.column == "spot_price"


def test_blank_lines_are_skipped(tmp_path):
    other = C6I_ROW.replace("us-east-1a", "us-east-1b")
    assert len(load_candidates(_write(tmp_path, HEADER, "", C6I_ROW, "", other, ""))) == 2


def test_extra_field_reports_its_line(tmp_path):
    other = C6I_ROW.replace("us-east-1a", "us-east-1b")
    with pytest.raises(ParseError) as exc:
        load_candidates(_write(tmp_path, HEADER, C6I_ROW, other + ",extra"))
    assert exc.value.line == 3


def test_invalid_utf8_csv(tmp_path):
    path = tmp_path / "candidates.csv"
    path.write_bytes((HEADER + "\n" + C6I_ROW + "\n").encode("utf-8") + b"c6i.\xff\n")
    with pytest.raises(ParseError) as exc:
        load_candidates(path)
    assert exc.value.line == 3
    assert "UTF-8" in exc.value.reason


def test_zero_benchmark_rejected(tmp_path):
    bad = C6I_ROW.replace(",10000,", ",0,")
    with pytest.raises(ParseError) as exc:
        load_candidates(_write(tmp_path, HEADER, bad))
    assert exc.value.column == "coremark_single"


def test_bad_boolean(tmp_path):
    bad = C6I_ROW.replace("false,false", "yes,false")
    with pytest.raises(ParseError) as exc:
        load_candidates(_write(tmp_path, HEADER, bad))
    assert exc.value.column == "network_optimized"


def test_sps_out_of_range(tmp_path):
    bad = C6I_ROW[:-2] + ",4,0"
    with pytest.raises(ParseError) as exc:
        load_candidates(_write(tmp_path, HEADER, bad))
    assert exc.value.line == 2
    assert exc.value.column == "sps_single"


def test_id_must_match_parts(tmp_path):
    bad = C6I_ROW.replace("c6i.xlarge/us-east-1/us-east-1a", "c6i.xlarge/us-east-1/us-east-1z", 1)
    with pytest.raises(ParseError) as exc:
        load_candidates(_write(tmp_path, HEADER, bad))
    assert exc.value.column == "id"


def test_wrong_header(tmp_path):
    with pytest.raises(ParseError) as exc:
        load_candidates(_write(tmp_path, HEADER.replace("vcpu", "cpu"), C6I_ROW))
    assert exc.value.line == 1


def test_duplicate_id(tmp_path):
    with pytest.raises(DuplicateId):
        load_candidates(_write(tmp_path, HEADER, C6I_ROW, C6I_ROW))


def test_fixture_round_trip(fixture_30, tmp_path):
    loaded = load_candidates(fixture_30)
    assert len(loaded) == 30
    out = dump_candidates(loaded, tmp_path / "copy.csv")
    assert load_candidates(out) == loaded


def test_fixtures_parse_fully(fixture_30, fixture_8, workload_fixture):
    assert len(load_candidates(fixture_8)) == 8
    assert len(load_candidates(workload_fixture)) == 3


def test_load_trace_sorted(tmp_path):
    trace = tmp_path / "trace"
    trace.mkdir()
    _write(trace, HEADER, C6I_ROW, name="200.csv")
    _write(trace, HEADER, C6I_ROW, name="100.csv")
    snapshots = load_trace(trace)
    assert [s.timestamp for s in snapshots] == [100, 200]
    assert len(snapshots[0].candidates) == 1


def test_load_trace_duplicate_timestamp(tmp_path):
    trace = tmp_path / "trace"
    trace.mkdir()
    _write(trace, HEADER, C6I_ROW, name="100.csv")
    _write(trace, HEADER, C6I_ROW, name="0100.csv")
    with pytest.raises(NonMonotonicTimestamps):
        load_trace(trace)


def test_load_trace_bad_name(tmp_path):
    trace = tmp_path / "trace"
    trace.mkdir()
    _write(trace, HEADER, C6I_ROW, name="latest.csv")
    with pytest.raises(ParseError):
        load_trace(trace)


def test_load_events_sorted(tmp_path):
    path = tmp_path / "events.jsonl"
    path.write_text(
        "\n".join(
            [
                json.dumps({"t": 300, "kind": "interrupt", "candidate_id": "b"}),
                "",
                json.dumps({"t": 100, "kind": "interrupt", "candidate_id": "a"}),
            ]
        ),
        encoding="utf-8",
    )
    events = load_events(path)
    assert [(e.t, e.candidate_id) for e in events] == [(100, "a"), (300, "b")]


def test_load_events_bad_json_line(tmp_path):
    path = tmp_path / "events.jsonl"
    path.write_text('{"t": 1, "kind": "interrupt", "candidate_id": "a"}\n{not json}\n', encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        load_events(path)
    assert exc.value.line == 2


def test_load_events_unknown_kind(tmp_path):
    path = tmp_path / "events.jsonl"
    path.write_text('{"t": 1, "kind": "rebalance", "candidate_id": "a"}\n', encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        load_events(path)
    assert exc.value.column == "kind"


def test_load_events_invalid_utf8(tmp_path):
    path = tmp_path / "events.jsonl"
    path.write_bytes(b'{"t": 1, "kind": "interrupt", "candidate_id": "a"}\n{"t": 2, "candidate_id": "\xff"}\n')
    with pytest.raises(ParseError) as exc:
        load_events(path)
    assert exc.value.line == 2
