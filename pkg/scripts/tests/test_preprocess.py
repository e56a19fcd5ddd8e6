"""
測試 pod 容量、workload 縮放、過濾與 normalizer
"""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_candidate
from core.errors import EmptyCandidateSet, InvalidSpec, NoFeasibleCandidates
from core.ingest import load_candidates
from core.model import EnrichedCandidate, PodSpec, Workload
from core.preprocess import enrich, normalizers, pod_capacity, scale_benchmark


def _spec(cpu, mem, pods=10, workload=Workload.GENERAL):
    return PodSpec(req_cpu=cpu, req_mem=mem, req_pod=pods, workload=workload)


@pytest.mark.parametrize(
    "cpu, mem, req_cpu, req_mem, expected",
    [
        (4, 8, 1, 2, 4),
        (4, 8, 7, 7, 0),
        (8, 16, 3, 5, 2),
        (2, 16, 1, 9, 1),
        (0.3, 8, 0.1, 2, 3),
    ],
)
def test_pod_capacity(cpu, mem, req_cpu, req_mem, expected):
    assert pod_capacity(make_candidate(cpu=cpu, mem=mem), _spec(req_cpu, req_mem)) == expected


@settings(max_examples=200, deadline=None)
@given(
    cpu=st.integers(1, 64),
    mem=st.integers(1, 256),
    extra=st.integers(0, 16),
    req_cpu=st.sampled_from([0.25, 0.5, 1, 2, 3, 4, 7]),
    req_mem=st.sampled_from([0.5, 1, 2, 4, 5, 7, 9]),
)
def test_pod_capacity_monotone(cpu, mem, extra, req_cpu, req_mem):
    spec = _spec(req_cpu, req_mem)
    base = pod_capacity(make_candidate(cpu=cpu, mem=mem), spec)
    assert pod_capacity(make_candidate(cpu=cpu + extra, mem=mem), spec) >= base
    assert pod_capacity(make_candidate(cpu=cpu, mem=mem + extra), spec) >= base
    assert pod_capacity(make_candidate(cpu=cpu, mem=mem), _spec(req_cpu * 2, req_mem)) <= base


def test_network_scaling_uses_price_ratio():
    c6in = make_candidate("c6in.xlarge", ondemand_price=0.23, base_ondemand_price=0.17, network_optimized=True)
    scaled = scale_benchmark(c6in, Workload.NETWORK)
    expected = 10000 * 0.23 / 0.17
    assert abs(scaled - expected) <= 1e-12 * expected
    assert round(scaled, 1) == 13529.4


def test_general_never_scales():
    c6in = make_candidate("c6in.xlarge", ondemand_price=0.23, base_ondemand_price=0.17, network_optimized=True)
    assert scale_benchmark(c6in, Workload.GENERAL) == 10000


def test_non_matching_flag_unscaled():
    c6id = make_candidate("c6id.xlarge", ondemand_price=0.2016, base_ondemand_price=0.17, disk_optimized=True)
    assert scale_benchmark(c6id, Workload.NETWORK) == 10000
    assert scale_benchmark(c6id, Workload.DISK) == pytest.approx(10000 * 0.2016 / 0.17, rel=1e-12)


def test_disk_and_network_scales_once():
    both = make_candidate(
        "c6idn.xlarge", ondemand_price=0.34, base_ondemand_price=0.17, network_optimized=True, disk_optimized=True
    )
    assert scale_benchmark(both, Workload.DISK_AND_NETWORK) == pytest.approx(20000, rel=1e-12)
    net = make_candidate("c6in.xlarge", ondemand_price=0.23, base_ondemand_price=0.17, network_optimized=True)
    assert scale_benchmark(net, Workload.DISK_AND_NETWORK) == pytest.approx(10000 * 0.23 / 0.17, rel=1e-12)


def test_ratio_below_one_applied_as_is():
    cheap = make_candidate(ondemand_price=0.085, base_ondemand_price=0.17, network_optimized=True)
    assert scale_benchmark(cheap, Workload.NETWORK) == pytest.approx(5000, rel=1e-12)


def test_missing_base_price_warns(caplog):
    c = make_candidate(network_optimized=True, base_ondemand_price=None)
    with caplog.at_level("WARNING"):
        assert scale_benchmark(c, Workload.NETWORK) == 10000
    assert "base_ondemand_price" in caplog.text


def test_enrich_filters_and_sets_perf():
    small = make_candidate("t4g.nano", cpu=1, mem=0.5)
    zero_t3 = make_candidate("m5.xlarge", t3=0)
    ok = make_candidate("m5.large", cpu=4, mem=8, benchmark=9000)
    enriched = enrich([small, zero_t3, ok], _spec(1, 2))
    assert [e.id for e in enriched] == [ok.id]
    assert enriched[0].pod_capacity == 4
    assert enriched[0].perf == 9000 * 4


def test_enrich_can_keep_zero_t3():
    zero_t3 = make_candidate("m5.xlarge", t3=0)
    assert len(enrich([zero_t3], _spec(1, 2), drop_zero_t3=False)) == 1


def test_enrich_empty_result():
    with pytest.raises(NoFeasibleCandidates):
        enrich([make_candidate(cpu=4, mem=8)], _spec(7, 7))


def test_enrich_validates_spec():
    with pytest.raises(InvalidSpec):
        enrich([make_candidate()], _spec(0, 2))


def test_enrich_fixture_never_has_zero(fixture_30):
    candidates = load_candidates(fixture_30)
    for spec in (_spec(1, 2), _spec(7, 7), _spec(1, 9)):
        for e in enrich(candidates, spec):
            assert e.pod_capacity >= 1 and e.t3 >= 1


def _enriched(perf_over_pods, sp):
    base = make_candidate(spot_price=sp)
    return EnrichedCandidate(base=base, pod_capacity=1, scaled_benchmark=perf_over_pods, perf=perf_over_pods)


def test_normalizers_singleton():
    n = normalizers([_enriched(100, 0.5)])
    assert (n.perf_min, n.sp_min) == (100, 0.5)


def test_normalizers_componentwise():
    n = normalizers([_enriched(100, 0.2), _enriched(40, 0.5)])
    assert (n.perf_min, n.sp_min) == (40, 0.2)


def test_normalizers_permutation_invariant():
    items = [_enriched(p, s) for p, s in [(100, 0.3), (40, 0.5), (70, 0.1), (55, 0.9)]]
    expected = normalizers(items)
    rng = random.Random(7)
    for _ in range(10):
        rng.shuffle(items)
        assert normalizers(items) == expected


def test_normalizers_empty():
    with pytest.raises(EmptyCandidateSet):
        normalizers([])
