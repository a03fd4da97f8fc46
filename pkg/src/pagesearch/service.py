"""HTTP API and the search engine facade behind it.

Endpoints:
    GET /search         blocking search; with connectors selected it
                        waits for the final complete merge
    GET /search/stream  server-sent events, one per fan-out snapshot
    GET /page/{page_id} stored page text + metadata
    GET /stats          index statistics

Responses are JSON with snake_case fields, serialized deterministically:
identical segment + identical local-only request gives a byte-identical
body.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import Response, StreamingResponse

from pagesearch.errors import DataError, QueryError
from pagesearch.federation import (ConnectorDescriptor, FanoutOutcome,
                                   MergedHit, MockConnector, fan_out)
from pagesearch.index import InvertedIndex, open_segment
from pagesearch.query import (SearchFilters, SortOrder, execute, parse_query)
from pagesearch.snippet import DEFAULT_WINDOW
from pagesearch.textprep import EMPTY_SYNONYMS, load_synonyms

SORT_NAMES = {
    "relevance": SortOrder.RELEVANCE,
    "oldest": SortOrder.OLDEST_FIRST,
    "newest": SortOrder.NEWEST_FIRST,
}


@dataclass
class ConnectorConfig:
    name: str
    journals_covered: list[str] = field(default_factory=list)
    fixture_path: str | None = None
    latency: float = 0.0
    fail_rate: float = 0.0
    timeout: float = 5.0
    seed: int = 0


@dataclass
class ServiceConfig:
    segment_dir: str
    synonyms_path: str | None = None
    listen_address: str = "127.0.0.1:8080"
    article_url_template: str = "article://{article_id}"
    page_url_template: str = "page://{page_id}"
    default_rows: int = 20
    snippet_window: int = DEFAULT_WINDOW
    connectors: list[ConnectorConfig] = field(default_factory=list)

    def __post_init__(self):
        if "{article_id}" not in self.article_url_template:
            raise DataError("article_url_template missing {article_id}")
        if "{page_id}" not in self.page_url_template:
            raise DataError("page_url_template missing {page_id}")
        if self.default_rows < 1:
            raise DataError("default_rows must be >= 1")


def load_config(path) -> ServiceConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    connectors = [ConnectorConfig(**c) for c in obj.pop("connectors", [])]
    base = os.path.dirname(os.path.abspath(path))
    for c in connectors:
        if c.fixture_path and not os.path.isabs(c.fixture_path):
            c.fixture_path = os.path.join(base, c.fixture_path)
    try:
        cfg = ServiceConfig(connectors=connectors, **obj)
    except TypeError as exc:
        raise DataError(f"bad config field: {exc}") from exc
    if not os.path.isabs(cfg.segment_dir):
        cfg.segment_dir = os.path.join(base, cfg.segment_dir)
    if cfg.synonyms_path and not os.path.isabs(cfg.synonyms_path):
        cfg.synonyms_path = os.path.join(base, cfg.synonyms_path)
    return cfg


class SearchEngine:
    """Search facade: one opened segment shared by all requests."""

    def __init__(self, index: InvertedIndex, config: ServiceConfig):
        self.index = index
        self.config = config
        self.synonyms = (load_synonyms(config.synonyms_path)
                         if config.synonyms_path else EMPTY_SYNONYMS)
        self.connectors = {}
        for c in config.connectors:
            desc = ConnectorDescriptor(c.name, tuple(c.journals_covered),
                                       c.timeout)
            self.connectors[c.name] = MockConnector(
                desc, fixture_path=c.fixture_path, latency=c.latency,
                fail_rate=c.fail_rate, seed=c.seed)

    def parse_params(self, q: str, sort: str, year_from, year_to, journals,
                     connectors: str | None):
        ast = parse_query(q)
        if sort not in SORT_NAMES:
            raise QueryError(f"bad sort {sort!r}; expected one of "
                             + ", ".join(sorted(SORT_NAMES)))
        filters = None
        if year_from is not None or year_to is not None or journals:
            filters = SearchFilters(year_from, year_to,
                                    frozenset(journals) if journals else None)
        selected = []
        if connectors:
            for name in connectors.split(","):
                name = name.strip()
                if not name or name == "local":
                    continue
                if name not in self.connectors:
                    raise QueryError(
                        f"unknown connector {name!r}; known: "
                        + ", ".join(sorted(self.connectors)))
                selected.append(self.connectors[name])
        return ast, SORT_NAMES[sort], filters, selected

    def snapshots(self, q: str, ast, sort: SortOrder, filters, selected,
                  start: int, rows: int):
        """Yield SearchResponse-shaped dicts, the last one complete."""
        def local_search():
            return execute(
                self.index, ast, filters, sort, offset=0, limit=None,
                synonyms=self.synonyms,
                article_url_template=self.config.article_url_template,
                page_url_template=self.config.page_url_template,
                snippet_window=self.config.snippet_window).hits

        for outcome in fan_out(selected, local_search, q, filters, sort):
            yield self._payload(q, outcome, start, rows)

    def search(self, q: str, ast, sort, filters, selected, start, rows) -> dict:
        payload = None
        for payload in self.snapshots(q, ast, sort, filters, selected,
                                      start, rows):
            pass
        return payload

    def _payload(self, q: str, outcome: FanoutOutcome, start: int,
                 rows: int) -> dict:
        window = outcome.merged[start:start + rows]
        return {
            "query_echo": q,
            "total_count": len(outcome.merged),
            "hits": [_merged_json(m) for m in window],
            "connectors": {name: st.state
                           for name, st in sorted(outcome.per_connector.items())},
            "complete": outcome.complete,
        }


def _merged_json(m: MergedHit) -> dict:
    if m.local is not None:
        a = m.local
        return {
            "article_id": a.article_id,
            "journal": a.journal,
            "year": a.year,
            "month": a.month,
            "url": a.article_url,
            "pages": [{
                "page_id": p.page_id,
                "page_number": p.page_number,
                "url": p.url,
                "snippet": {
                    "text": p.snippet.text,
                    "highlights": [list(h) for h in p.snippet.highlights],
                },
            } for p in a.page_hits],
        }
    e = m.external
    return {
        "article_id": "",
        "journal": e.journal,
        "year": e.year,
        "month": 0,
        "url": e.url,
        "title": e.title,
        "source": e.source,
        "snippet_text": e.snippet_text,
        "pages": [],
    }


def _json_response(payload, status: int = 200) -> Response:
    return Response(content=json.dumps(payload, ensure_ascii=False),
                    media_type="application/json", status_code=status)


def _error(status: int, code: str, detail: str) -> Response:
    return _json_response({"code": code, "detail": detail}, status)


def build_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="pagesearch")
    try:
        index = open_segment(config.segment_dir)
        app.state.engine = SearchEngine(index, config)
        app.state.load_error = None
    except DataError as exc:
        app.state.engine = None
        app.state.load_error = str(exc)

    def engine_or_none():
        return app.state.engine

    @app.get("/search")
    def search(request: Request, q: str = "", sort: str = "relevance",
               year_from: int | None = None, year_to: int | None = None,
               connectors: str | None = None, start: int = 0,
               rows: int | None = None):
        engine = engine_or_none()
        if engine is None:
            return _error(503, "segment_unavailable", app.state.load_error)
        journals = request.query_params.getlist("journal")
        try:
            ast, sort_order, filters, selected = engine.parse_params(
                q, sort, year_from, year_to, journals, connectors)
            payload = engine.search(
                q, ast, sort_order, filters, selected, max(0, start),
                rows if rows is not None else config.default_rows)
        except QueryError as exc:
            return _error(400, _error_code(exc), str(exc))
        return _json_response(payload)

    @app.get("/search/stream")
    def search_stream(request: Request, q: str = "", sort: str = "relevance",
                      year_from: int | None = None, year_to: int | None = None,
                      connectors: str | None = None, start: int = 0,
                      rows: int | None = None):
        engine = engine_or_none()
        if engine is None:
            return _error(503, "segment_unavailable", app.state.load_error)
        journals = request.query_params.getlist("journal")
        try:
            ast, sort_order, filters, selected = engine.parse_params(
                q, sort, year_from, year_to, journals, connectors)
        except QueryError as exc:
            return _error(400, _error_code(exc), str(exc))

        def events():
            for payload in engine.snapshots(
                    q, ast, sort_order, filters, selected, max(0, start),
                    rows if rows is not None else config.default_rows):
                yield "data: " + json.dumps(payload, ensure_ascii=False) + "\n\n"

        return StreamingResponse(events(), media_type="text/event-stream")

    @app.get("/page/{page_id}")
    def page(page_id: str):
        engine = engine_or_none()
        if engine is None:
            return _error(503, "segment_unavailable", app.state.load_error)
        ordinal = engine.index.ordinal_of(page_id)
        if ordinal is None:
            return _error(404, "unknown_page", f"no page {page_id!r}")
        meta = engine.index.page_meta(ordinal)
        return _json_response({
            "page_id": meta.page_id,
            "article_id": meta.article_id,
            "journal": meta.journal,
            "year": meta.year,
            "month": meta.month,
            "page_number": meta.page_number,
            "kind": meta.kind,
            "text": engine.index.page_text(ordinal),
        })

    @app.get("/stats")
    def stats():
        engine = engine_or_none()
        if engine is None:
            return _error(503, "segment_unavailable", app.state.load_error)
        s = engine.index.stats()
        return _json_response({
            "unique_terms": s.unique_terms,
            "page_count": s.page_count,
            "article_count": s.article_count,
            "total_postings_bytes": s.total_postings_bytes,
        })

    return app


def _error_code(exc: QueryError) -> str:
    msg = str(exc)
    if msg.startswith("empty query"):
        return "empty_query"
    if msg.startswith("unbalanced quote"):
        return "parse_error"
    if msg.startswith("bad sort"):
        return "bad_sort"
    if msg.startswith("bad year range"):
        return "bad_year_range"
    if msg.startswith("unknown journal"):
        return "unknown_journal"
    if msg.startswith("unknown connector"):
        return "unknown_connector"
    return "bad_request"
