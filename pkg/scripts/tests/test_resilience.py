"""
測試 Unavailable Offerings Cache 與中斷後的重新最佳化
"""
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from core.errors import InsufficientCapacity
from core.ingest import load_candidates
from core.model import InterruptEvent, PodSpec
from core.preprocess import enrich
from core.resilience import UnavailableOfferingsCache, record_interrupt, reoptimize

C7G_MEDIUM = "c7g.medium/us-east-1/us-east-1a"


def _event(t, cid=C7G_MEDIUM):
    return InterruptEvent(t=t, kind="interrupt", candidate_id=cid)


def test_entry_active_until_ttl():
    cache = record_interrupt(UnavailableOfferingsCache(ttl=180), _event(100))
    assert cache.is_active(C7G_MEDIUM, 150)
    assert cache.is_active(C7G_MEDIUM, 279)
    assert not cache.is_active(C7G_MEDIUM, 280)
    assert not cache.is_active(C7G_MEDIUM, 281)


def test_repeat_interrupt_keeps_later_expiry():
    cache = UnavailableOfferingsCache(ttl=180)
    record_interrupt(cache, _event(100))
    record_interrupt(cache, _event(200))
    assert len(cache) == 1
    assert cache.expiry(C7G_MEDIUM) == 380
    # 亂序事件不會縮短到期時間
    record_interrupt(cache, _event(50))
    assert cache.expiry(C7G_MEDIUM) == 380


def test_unknown_id_still_recorded():
    cache = record_interrupt(UnavailableOfferingsCache(ttl=60), _event(0, "nope.large/x-1/x-1a"))
    assert cache.active_ids(10) == {"nope.large/x-1/x-1a"}


def test_zero_ttl_never_active():
    cache = record_interrupt(UnavailableOfferingsCache(ttl=0), _event(10))
    assert not cache.is_active(C7G_MEDIUM, 10)


def test_negative_ttl_rejected():
    with pytest.raises(ValueError):
        UnavailableOfferingsCache(ttl=-1)


def _enriched_8(path, pods=50):
    spec = PodSpec(req_cpu=1, req_mem=2, req_pod=pods)
    return enrich(load_candidates(path), spec), spec


def test_reoptimize_excludes_active(fixture_8):
    enriched, spec = _enriched_8(fixture_8)
    cache = record_interrupt(UnavailableOfferingsCache(ttl=180), _event(0))
    result = reoptimize(enriched, spec, cache, now=10)
    assert C7G_MEDIUM not in result.best_allocation.entries
    assert result.best_allocation.total_pods_allocated >= spec.req_pod


def test_reoptimize_after_expiry_may_reuse(fixture_8):
    enriched, spec = _enriched_8(fixture_8)
    cache = record_interrupt(UnavailableOfferingsCache(ttl=180), _event(0))
    result = reoptimize(enriched, spec, cache, now=180)
    assert C7G_MEDIUM in result.best_allocation.entries


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 7), min_size=1, max_size=6), st.integers(0, 400))
def test_exclusion_soundness(picked, now):
    enriched, spec = _enriched_8(FIXTURES / "candidates_8.csv", pods=40)
    ids = sorted(e.id for e in enriched)
    cache = UnavailableOfferingsCache(ttl=300)
    for k in picked:
        if k < len(ids):
            cache.record(ids[k], 0)
    active = cache.active_ids(now)
    try:
        result = reoptimize(enriched, spec, cache, now)
    except InsufficientCapacity as e:
        assert e.available < spec.req_pod
        return
    assert not active & set(result.best_allocation.entries)


def test_insufficient_reports_excluded_pods(fixture_8):
    enriched, spec = _enriched_8(fixture_8)
    cache = UnavailableOfferingsCache(ttl=180)
    for e in enriched:
        cache.record(e.id, 0)
    with pytest.raises(InsufficientCapacity) as exc:
        reoptimize(enriched, spec, cache, now=1)
    assert exc.value.available == 0
    assert exc.value.excluded_pods == sum(e.pod_capacity * e.t3 for e in enriched)


def test_concurrent_writers_and_readers():
    cache = UnavailableOfferingsCache(ttl=1000)
    ids = [f"m5.large/us-east-1/us-east-1{c}" for c in "abcdef"]
    errors = []

    def writer(offset):
        for t in range(200):
            cache.record(ids[(t + offset) % len(ids)], t)

    def reader():
        try:
            for t in range(200):
                assert cache.active_ids(t) <= set(ids)
        except AssertionError as e:
            errors.append(e)

    threads = [threading.Thread(target=writer, args=(k,)) for k in range(3)]
    threads += [threading.Thread(target=reader) for _ in range(3)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()

    assert not errors
    assert len(cache) == len(ids)
    assert max(cache.entries().values()) == 199 + 1000
