"""Page-level corpus model and manifest ingestion.

A corpus manifest is line-delimited JSON, one page per line, with fields
page_id, article_id, journal, year, month, page_number, kind, text.
Month is optional and defaults to 0 (unknown).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from pagesearch.errors import DataError

KIND_ARTICLE_PAGE = "article_page"
KIND_UNATTACHED = "unattached"

_MANIFEST_FIELDS = ("page_id", "article_id", "journal", "year", "month",
                    "page_number", "kind", "text")


@dataclass(frozen=True)
class PageRecord:
    page_id: str
    article_id: str
    journal: str
    year: int
    month: int
    page_number: int
    kind: str
    text: str


@dataclass
class CorpusStore:
    records: list[PageRecord] = field(default_factory=list)

    @property
    def record_count(self) -> int:
        return len(self.records)

    @property
    def journals(self) -> set[str]:
        return {r.journal for r in self.records}

    def __iter__(self):
        return iter(self.records)


def validate_record(r: PageRecord) -> list[str]:
    """Return every violated invariant; empty list means the record is valid."""
    problems = []
    if not r.page_id:
        problems.append("page_id empty")
    if len(r.page_id) > 64:
        problems.append("page_id longer than 64 characters")
    if len(r.article_id) > 32:
        problems.append("article_id longer than 32 characters")
    if not r.journal:
        problems.append("journal empty")
    if len(r.journal) > 16:
        problems.append("journal longer than 16 characters")
    if not 1600 <= r.year <= 2100:
        problems.append("year out of range")
    if not 0 <= r.month <= 12:
        problems.append("month out of range")
    if r.page_number < 0:
        problems.append("page_number negative")
    if r.kind not in (KIND_ARTICLE_PAGE, KIND_UNATTACHED):
        problems.append(f"unknown kind {r.kind!r}")
    if r.kind == KIND_UNATTACHED and r.article_id:
        problems.append("unattached requires empty article_id")
    if r.kind == KIND_ARTICLE_PAGE and not r.article_id:
        problems.append("article_page requires nonempty article_id")
    return problems


def ingest_corpus(manifest_path) -> CorpusStore:
    """Load a manifest file into a CorpusStore, preserving line order."""
    records: list[PageRecord] = []
    seen: dict[str, int] = {}
    try:
        fh = open(manifest_path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read manifest {manifest_path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            records.append(_parse_line(line, lineno, seen))
    return CorpusStore(records=records)


def write_manifest(store: CorpusStore, path) -> None:
    """Serialize a CorpusStore back to manifest format (round-trips with ingest)."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in store.records:
            fh.write(json.dumps({
                "page_id": r.page_id,
                "article_id": r.article_id,
                "journal": r.journal,
                "year": r.year,
                "month": r.month,
                "page_number": r.page_number,
                "kind": r.kind,
                "text": r.text,
            }, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def _parse_line(line: str, lineno: int, seen: dict[str, int]) -> PageRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed JSON, line {lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise DataError(f"manifest line is not an object, line {lineno}")
    unknown = set(obj) - set(_MANIFEST_FIELDS)
    if unknown:
        raise DataError(f"unknown field {sorted(unknown)[0]!r}, line {lineno}")
    for name in _MANIFEST_FIELDS:
        if name not in obj and name != "month":
            raise DataError(f"missing field {name!r}, line {lineno}")
    obj.setdefault("month", 0)
    for name in ("page_id", "article_id", "journal", "kind", "text"):
        if not isinstance(obj[name], str):
            raise DataError(f"field {name!r} must be a string, line {lineno}")
    for name in ("year", "month", "page_number"):
        if not isinstance(obj[name], int) or isinstance(obj[name], bool):
            raise DataError(f"field {name!r} must be an integer, line {lineno}")
    record = PageRecord(**obj)
    problems = validate_record(record)
    if problems:
        raise DataError(f"{problems[0]}, line {lineno}")
    if record.page_id in seen:
        raise DataError(
            f"duplicate page_id {record.page_id!r}, "
            f"lines {seen[record.page_id]} and {lineno}")
    seen[record.page_id] = lineno
    return record
