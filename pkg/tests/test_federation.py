import itertools
import os
import time

import pytest

from pagesearch.federation import (ConnectorDescriptor, ExternalHit,
                                   MockConnector, connector_search, dedup_key,
                                   fan_out, load_fixture_hits, merge)
from pagesearch.query import ArticleHit, SortOrder

from conftest import FIXTURES


def mock(name, latency=0.0, fail_rate=0.0, hits=None, timeout=5.0, seed=0):
    return MockConnector(ConnectorDescriptor(name, timeout=timeout),
                         hits=hits if hits is not None else [],
                         latency=latency, fail_rate=fail_rate, seed=seed)


def ext(source, title, year=1950, journal="ApJ", url=None, text=""):
    return ExternalHit(source=source, title=title, year=year, journal=journal,
                       url=url or f"mock://{source}/{title}", snippet_text=text)


def local_hit(article_id, year, month=1, score=1.0):
    return ArticleHit(article_id=article_id, journal="PASP", year=year,
                      month=month, page_hits=(), score=score,
                      article_url="", first_page_url="")


class TestConnectorSearch:
    def test_fast_mock_ok(self):
        conn = mock("m", latency=0.01,
                    hits=[ext("m", "critical mass study")])
        status, hits = connector_search(conn, "critical", deadline=1.0)
        assert status.state == "ok" and len(hits) == 1

    def test_slow_mock_times_out(self):
        conn = mock("m", latency=2.0)
        t0 = time.monotonic()
        status, hits = connector_search(conn, "pluto", deadline=0.1)
        assert status.state == "timeout" and hits == []
        assert time.monotonic() - t0 < 1.0

    def test_forced_failure(self):
        conn = mock("m", fail_rate=1.0, hits=[ext("m", "anything")])
        status, hits = connector_search(conn, "anything", deadline=1.0)
        assert status.state == "failed"
        assert status.reason == "injected fault"

    def test_query_word_filtering(self):
        conn = mock("m", hits=[ext("m", "pluto and the planets"),
                               ext("m", "solar spectra")])
        _, hits = connector_search(conn, "pluto", deadline=1.0)
        assert [h.title for h in hits] == ["pluto and the planets"]

    def test_fixture_loading(self):
        hits = load_fixture_hits(os.path.join(FIXTURES, "mock_nature.jsonl"),
                                 "nature-mock")
        assert len(hits) == 2
        assert all(h.source == "nature-mock" for h in hits)


class TestFanOut:
    def test_snapshot_count_and_completion(self):
        conns = [mock("a", 0.01, hits=[ext("a", "pluto alpha")]),
                 mock("b", 0.05, hits=[ext("b", "pluto beta")]),
                 mock("c", 0.09, hits=[ext("c", "pluto gamma")])]
        snaps = list(fan_out(conns, lambda: [local_hit("art", 1900)], "pluto"))
        assert len(snaps) == 4
        assert [s.complete for s in snaps] == [False, False, False, True]
        final = snaps[-1]
        assert all(st.state == "ok" for st in final.per_connector.values())

    def test_parallel_not_serial(self):
        conns = [mock(n, 0.1) for n in ("a", "b", "c")]
        t0 = time.monotonic()
        snaps = list(fan_out(conns, lambda: [], "q"))
        elapsed = time.monotonic() - t0
        assert snaps[-1].complete
        assert elapsed < 0.25, f"fan-out took {elapsed:.3f}s; not parallel"

    def test_timeout_recorded_without_blocking(self):
        conns = [mock("slow", latency=3.0, timeout=0.1),
                 mock("fast", latency=0.01, hits=[ext("fast", "pluto fast")])]
        t0 = time.monotonic()
        snaps = list(fan_out(conns, lambda: [], "pluto"))
        assert time.monotonic() - t0 < 1.5
        final = snaps[-1]
        assert final.complete
        assert final.per_connector["slow"].state == "timeout"
        assert final.per_connector["fast"].state == "ok"
        titles = [m.external.title for m in final.merged if m.external]
        assert titles == ["pluto fast"]

    def test_failure_does_not_suppress_others(self):
        conns = [mock("bad", fail_rate=1.0, hits=[ext("bad", "pluto bad")]),
                 mock("good", hits=[ext("good", "pluto good")])]
        final = list(fan_out(conns, lambda: [local_hit("a", 1930)], "pluto"))[-1]
        assert final.complete
        assert final.per_connector["bad"].state == "failed"
        keys = [m.dedup_key for m in final.merged]
        assert len(keys) == len(set(keys))
        assert any(m.is_local for m in final.merged)
        assert any(m.external and m.external.source == "good"
                   for m in final.merged)

    def test_local_only_identity(self):
        locals_ = [local_hit("a", 1900), local_hit("b", 1950)]
        snaps = list(fan_out([], lambda: list(locals_), "q",
                             sort=SortOrder.OLDEST_FIRST))
        assert len(snaps) == 1 and snaps[0].complete
        assert [m.local for m in snaps[0].merged] == locals_

    def test_snapshot_monotonicity(self):
        conns = [mock(n, lat) for n, lat in
                 [("a", 0.01), ("b", 0.03), ("c", 0.05)]]
        snaps = list(fan_out(conns, lambda: [], "q"))
        prev = set()
        for s in snaps:
            done = {n for n, st in s.per_connector.items()
                    if st.state != "pending"}
            assert prev <= done
            prev = done


class TestMerge:
    def test_empty(self):
        assert merge([], []) == []

    def test_local_wins_dedup(self):
        local = local_hit("On the critical mass", 1919)
        external = ext("nature-mock", "on the critical mass!", year=1919)
        merged = merge([local], [("nature-mock", [external])])
        assert len(merged) == 1
        assert merged[0].local is local

    def test_externals_tie_break_by_connector_name(self):
        a = ext("alpha-mock", "Shared Title", year=1940)
        b = ext("beta-mock", "shared title", year=1940)
        merged = merge([], [("beta-mock", [b]), ("alpha-mock", [a])])
        assert len(merged) == 1
        assert merged[0].external.source == "alpha-mock"

    def test_no_duplicate_keys(self):
        locals_ = [local_hit("a", 1900), local_hit("b", 1950)]
        exts = [("m1", [ext("m1", "a", 1900), ext("m1", "c", 1960)]),
                ("m2", [ext("m2", "c", 1960), ext("m2", "d", 1970)])]
        merged = merge(locals_, exts)
        keys = [m.dedup_key for m in merged]
        assert len(keys) == len(set(keys))

    def test_unknown_year_sorts_last_both_directions(self):
        exts = [("m", [ext("m", "dated", 1950), ext("m", "undated", 0)])]
        for sort in (SortOrder.OLDEST_FIRST, SortOrder.NEWEST_FIRST):
            merged = merge([], exts, sort)
            assert merged[-1].external.title == "undated"

    def test_permutation_invariant(self):
        exts = [("m1", [ext("m1", "x", 1950)]),
                ("m2", [ext("m2", "y", 1940)]),
                ("m3", [ext("m3", "x", 1950)])]
        results = [merge([local_hit("a", 1930)], list(p))
                   for p in itertools.permutations(exts)]
        assert all(r == results[0] for r in results)

    def test_oldest_first_order(self):
        exts = [("m", [ext("m", "newer", 1960), ext("m", "older", 1910)])]
        merged = merge([local_hit("mid", 1930)], exts, SortOrder.OLDEST_FIRST)
        years = [(m.local.year if m.local else m.external.year) for m in merged]
        assert years == [1910, 1930, 1960]

    def test_every_ok_hit_represented(self):
        exts = [("m1", [ext("m1", "t1", 1950), ext("m1", "t2", 1951)]),
                ("m2", [ext("m2", "t1", 1950)])]
        merged = merge([], exts)
        for _, hits in exts:
            for h in hits:
                assert any(m.dedup_key == dedup_key(h) for m in merged)


@pytest.mark.parametrize("rep", range(20))
def test_federation_acceptance_repetitions(rep):
    # one failing and one timing-out connector, both recorded, others intact
    conns = [mock("fail", fail_rate=1.0, seed=rep,
                  hits=[ext("fail", "pluto lost")]),
             mock("slow", latency=2.0, timeout=0.05),
             mock("ok", latency=0.01, hits=[ext("ok", "pluto kept")])]
    final = list(fan_out(conns, lambda: [local_hit("a", 1930)], "pluto"))[-1]
    assert final.complete
    assert final.per_connector["fail"].state == "failed"
    assert final.per_connector["slow"].state == "timeout"
    assert final.per_connector["ok"].state == "ok"
    keys = [m.dedup_key for m in final.merged]
    assert len(keys) == len(set(keys))
    assert any(m.external and m.external.title == "pluto kept"
               for m in final.merged)
    assert any(m.is_local for m in final.merged)
