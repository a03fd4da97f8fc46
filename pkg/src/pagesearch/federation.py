"""Parallel fan-out to external search connectors, with merged results.

External systems are simulated by mock connectors backed by fixture
files (corpus manifest lines plus a title field) with configurable
latency, fail_rate and timeout; real adapters can implement the same
contract later. Connectors run concurrently; one snapshot is emitted per
connector termination and a slow or failing connector never delays or
suppresses the others.
"""

from __future__ import annotations

import json
import queue
import random
import re
import threading
import time
from dataclasses import dataclass, field

from pagesearch.errors import DataError
from pagesearch.query import ArticleHit, SortOrder

LOCAL_CONNECTOR = "local"
DEFAULT_TIMEOUT = 5.0

# Table of default mock connectors and the journals they cover.
DEFAULT_REGISTRY = {
    "google-scholar-mock": ["MNRAS", "ARA&A", "AREPS", "ApOpt", "JOSA"],
    "ucp-mock": ["AJ", "ApJ", "ApJL", "ApJS", "PASP"],
    "edp-mock": ["A&A"],
    "nature-mock": ["Natur", "NatPh", "NPhS"],
    "nas-mock": ["PNAS"],
}


@dataclass(frozen=True)
class ConnectorDescriptor:
    name: str
    journals_covered: tuple[str, ...] = ()
    timeout: float = DEFAULT_TIMEOUT


@dataclass(frozen=True)
class ExternalHit:
    source: str
    title: str
    year: int  # 0 means unknown
    journal: str
    url: str
    snippet_text: str


@dataclass(frozen=True)
class ConnectorStatus:
    state: str  # "pending" | "ok" | "timeout" | "failed"
    hit_count: int = 0
    elapsed: float = 0.0
    reason: str = ""


@dataclass(frozen=True)
class MergedHit:
    dedup_key: tuple[str, int]
    local: ArticleHit | None = None
    external: ExternalHit | None = None

    @property
    def is_local(self) -> bool:
        return self.local is not None


@dataclass
class FanoutOutcome:
    per_connector: dict[str, ConnectorStatus]
    merged: list[MergedHit] = field(default_factory=list)
    complete: bool = False


class ConnectorTimeout(Exception):
    pass


class ConnectorFailure(Exception):
    pass


class MockConnector:
    """Fixture-backed stand-in for an external search system."""

    def __init__(self, descriptor: ConnectorDescriptor, fixture_path=None,
                 hits: list[ExternalHit] | None = None, latency: float = 0.0,
                 fail_rate: float = 0.0, seed: int = 0):
        self.descriptor = descriptor
        self.latency = latency
        self.fail_rate = fail_rate
        self._rng = random.Random(seed)
        if hits is not None:
            self._hits = list(hits)
        elif fixture_path is not None:
            self._hits = load_fixture_hits(fixture_path, descriptor.name)
        else:
            self._hits = []

    def search(self, query_string: str, filters=None,
               deadline: float | None = None) -> list[ExternalHit]:
        if deadline is not None and self.latency > deadline:
            time.sleep(deadline)
            raise ConnectorTimeout(self.descriptor.name)
        if self.latency:
            time.sleep(self.latency)
        if self._rng.random() < self.fail_rate:
            raise ConnectorFailure("injected fault")
        words = [w.casefold().strip('="') for w in query_string.split()]
        words = [w for w in words if w]
        out = []
        for hit in self._hits:
            haystack = f"{hit.title} {hit.snippet_text}".casefold()
            if not all(w in haystack for w in words):
                continue
            if filters is not None:
                if filters.year_from is not None and 0 < hit.year < filters.year_from:
                    continue
                if filters.year_to is not None and hit.year > filters.year_to:
                    continue
            out.append(hit)
        return out


def load_fixture_hits(path, source: str) -> list[ExternalHit]:
    """Load mock hits: corpus-manifest lines extended with a title field."""
    hits = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read connector fixture {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(
                    f"malformed fixture JSON, line {lineno}: {exc.msg}") from exc
            if "title" not in obj:
                raise DataError(f"fixture missing title, line {lineno}")
            hits.append(ExternalHit(
                source=source,
                title=obj["title"],
                year=obj.get("year", 0),
                journal=obj.get("journal", ""),
                url=obj.get("url", f"mock://{source}/{obj.get('page_id', lineno)}"),
                snippet_text=obj.get("text", "")))
    return hits


def connector_search(connector, query_string: str, filters=None,
                     deadline: float | None = None
                     ) -> tuple[ConnectorStatus, list[ExternalHit]]:
    """Run one connector; timeout and failure are in-band outcomes."""
    if deadline is None:
        deadline = connector.descriptor.timeout
    t0 = time.monotonic()
    try:
        hits = connector.search(query_string, filters, deadline=deadline)
    except ConnectorTimeout:
        return ConnectorStatus("timeout", elapsed=time.monotonic() - t0), []
    except Exception as exc:
        return ConnectorStatus("failed", elapsed=time.monotonic() - t0,
                               reason=str(exc)), []
    return ConnectorStatus("ok", hit_count=len(hits),
                           elapsed=time.monotonic() - t0), hits


def fan_out(connectors, local_search, query_string: str, filters=None,
            sort: SortOrder = SortOrder.RELEVANCE,
            deadline: float | None = None):
    """Query local index and connectors concurrently; yield snapshots.

    local_search() returns the local ArticleHits; it runs as a connector
    named "local". One FanoutOutcome is yielded per terminated connector,
    the last with complete=True. A connector that blows past its timeout
    is recorded as timed out without waiting for its thread.
    """
    t0 = time.monotonic()
    events: queue.Queue = queue.Queue()
    statuses: dict[str, ConnectorStatus] = {}
    deadlines: dict[str, float] = {}
    local_hits: list[ArticleHit] = []
    external_hits: list[tuple[str, list[ExternalHit]]] = []

    def run_local():
        try:
            hits = local_search()
            events.put((LOCAL_CONNECTOR,
                        ConnectorStatus("ok", hit_count=len(hits),
                                        elapsed=time.monotonic() - t0), hits))
        except Exception as exc:
            events.put((LOCAL_CONNECTOR,
                        ConnectorStatus("failed", elapsed=time.monotonic() - t0,
                                        reason=str(exc)), []))

    def run_connector(conn):
        to = conn.descriptor.timeout if deadline is None else \
            min(conn.descriptor.timeout, deadline)
        status, hits = connector_search(conn, query_string, filters, to)
        events.put((conn.descriptor.name, status, hits))

    pending = set()
    if local_search is not None:
        pending.add(LOCAL_CONNECTOR)
        statuses[LOCAL_CONNECTOR] = ConnectorStatus("pending")
        deadlines[LOCAL_CONNECTOR] = t0 + (deadline or DEFAULT_TIMEOUT)
        threading.Thread(target=run_local, daemon=True).start()
    for conn in connectors:
        name = conn.descriptor.name
        if name in statuses:
            raise ValueError(f"duplicate connector name {name!r}")
        pending.add(name)
        statuses[name] = ConnectorStatus("pending")
        to = conn.descriptor.timeout if deadline is None else \
            min(conn.descriptor.timeout, deadline)
        # grace covers scheduling overhead of a cooperative timeout report
        deadlines[name] = t0 + to + 0.25
        threading.Thread(target=run_connector, args=(conn,), daemon=True).start()
    if not pending:
        raise ValueError("no connectors selected")

    while pending:
        next_expiry = min(deadlines[n] for n in pending)
        wait = max(0.0, next_expiry - time.monotonic())
        try:
            name, status, hits = events.get(timeout=wait)
        except queue.Empty:
            now = time.monotonic()
            expired = sorted(n for n in pending if deadlines[n] <= now)
            for name in expired:
                pending.discard(name)
                statuses[name] = ConnectorStatus(
                    "timeout", elapsed=now - t0)
                yield _snapshot(statuses, local_hits, external_hits, sort,
                                complete=not pending)
            continue
        if name not in pending:
            continue  # late report from an already timed-out connector
        pending.discard(name)
        statuses[name] = status
        if status.state == "ok":
            if name == LOCAL_CONNECTOR:
                local_hits = hits
            else:
                external_hits.append((name, hits))
        yield _snapshot(statuses, local_hits, external_hits, sort,
                        complete=not pending)


def _snapshot(statuses, local_hits, external_hits, sort, complete):
    return FanoutOutcome(
        per_connector=dict(statuses),
        merged=merge(local_hits, external_hits, sort),
        complete=complete)


_NORM_RE = re.compile(r"[^a-z0-9]+")


def normalize_label(s: str) -> str:
    """Dedup normalization: lowercase, punctuation and whitespace collapsed."""
    return _NORM_RE.sub(" ", s.casefold()).strip()


def dedup_key(hit) -> tuple[str, int]:
    if isinstance(hit, ArticleHit):
        return (normalize_label(hit.article_id), hit.year)
    return (normalize_label(hit.title or hit.url), hit.year)


def merge(local: list[ArticleHit],
          externals: list[tuple[str, list[ExternalHit]]],
          sort: SortOrder = SortOrder.RELEVANCE) -> list[MergedHit]:
    """Dedup (local wins, then connector name ascending) and order.

    Deterministic and independent of connector arrival order; hits with
    unknown year sort after all dated hits regardless of direction.
    """
    chosen: dict[tuple[str, int], MergedHit] = {}
    for hit in local:
        key = dedup_key(hit)
        chosen.setdefault(key, MergedHit(key, local=hit))
    flat = [h for _, hits in externals for h in hits]
    flat.sort(key=lambda h: (h.source, h.title, h.url))
    for hit in flat:
        key = dedup_key(hit)
        chosen.setdefault(key, MergedHit(key, external=hit))
    return sorted(chosen.values(), key=lambda m: _merged_key(m, sort))


def _merged_key(m: MergedHit, sort: SortOrder):
    if m.local is not None:
        year, month = m.local.year, m.local.month
        label = m.local.article_id
        score = m.local.score
    else:
        year, month = m.external.year, 0
        label = normalize_label(m.external.title)
        score = 0.0
    unknown = 1 if year == 0 else 0
    if sort is SortOrder.OLDEST_FIRST:
        return (unknown, year, month, label)
    if sort is SortOrder.NEWEST_FIRST:
        return (unknown, -year, -month, label)
    return (unknown, -score, -year, -month, label)
