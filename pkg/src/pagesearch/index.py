"""Positional inverted index: build, persist, open, serve postings.

On-disk segment layout (one directory per corpus, rebuilt on change):

    meta       JSON: magic "FTS1", format version, counts, per-file CRC-32s
    lexicon    term bytes + doc_freq/coll_freq + 64-bit postings offsets
    postings   delta-encoded LEB128 varints (page ordinals and positions)
    pagetable  per-page metadata + 64-bit offsets into the text file
    text       stored page text, verbatim UTF-8

Term ids are dense 0..T-1 in lexicographic (UTF-8 byte) term order.
Builds are deterministic: identical manifest and synonym bytes yield a
byte-identical segment.
"""

from __future__ import annotations

import json
import mmap
import os
import struct
import zlib
from dataclasses import dataclass

from pagesearch import _kernels
from pagesearch.corpus import KIND_ARTICLE_PAGE, KIND_UNATTACHED, CorpusStore
from pagesearch.errors import DataError
from pagesearch.textprep import load_synonyms, tokenize

MAGIC = "FTS1"
FORMAT_VERSION = 1
_SEGMENT_FILES = ("lexicon", "postings", "pagetable", "text")
_Q = struct.Struct("<Q")


@dataclass(frozen=True)
class PageMeta:
    page_id: str
    article_id: str
    journal: str
    year: int
    month: int
    page_number: int
    kind: str


@dataclass(frozen=True)
class LexiconEntry:
    term_id: int
    doc_freq: int
    coll_freq: int
    offset: int
    length: int


@dataclass(frozen=True)
class IndexStats:
    unique_terms: int
    page_count: int
    article_count: int
    total_postings_bytes: int


class InvertedIndex:
    """Immutable index over a page corpus; safe for concurrent readers."""

    def __init__(self, lexicon: dict[str, LexiconEntry], pages: list[PageMeta],
                 postings_blob, texts):
        self._lexicon = lexicon
        self._pages = pages
        self._by_page_id = {p.page_id: i for i, p in enumerate(pages)}
        self._postings_blob = postings_blob
        self._texts = texts

    @property
    def page_count(self) -> int:
        return len(self._pages)

    @property
    def terms(self):
        return self._lexicon.keys()

    @property
    def journals(self) -> set[str]:
        return {p.journal for p in self._pages}

    def lexicon_entry(self, term: str) -> LexiconEntry | None:
        return self._lexicon.get(term)

    def postings(self, term: str) -> list[tuple[int, list[int]]] | None:
        """Decoded (page_ordinal, positions) entries, or None for unknown terms."""
        entry = self._lexicon.get(term)
        if entry is None:
            return None
        blob = self._postings_blob[entry.offset:entry.offset + entry.length]
        return _kernels.decode_postings(blob)

    def page_meta(self, ordinal: int) -> PageMeta:
        return self._pages[ordinal]

    def page_text(self, ordinal: int) -> str:
        off, length = self._texts[ordinal]
        return bytes(self._text_data[off:off + length]).decode("utf-8")

    def ordinal_of(self, page_id: str) -> int | None:
        return self._by_page_id.get(page_id)

    def stats(self) -> IndexStats:
        articles = {p.article_id for p in self._pages if p.article_id}
        unattached = sum(1 for p in self._pages if not p.article_id)
        return IndexStats(
            unique_terms=len(self._lexicon),
            page_count=len(self._pages),
            article_count=len(articles) + unattached,
            total_postings_bytes=len(self._postings_blob),
        )

    # text storage shared with postings blob in the in-memory case;
    # SegmentIndex overrides with its own mmap
    @property
    def _text_data(self):
        return self._text_blob

    _text_blob: bytes = b""


def build_index(corpus: CorpusStore, synonyms_path=None, config=None) -> InvertedIndex:
    """Index every indexable token of every page, in corpus order."""
    if synonyms_path is not None:
        load_synonyms(synonyms_path)  # fail fast on a bad synonym file

    term_pages: dict[str, list[tuple[int, list[int]]]] = {}
    texts: list[tuple[int, int]] = []
    text_parts: list[bytes] = []
    pages: list[PageMeta] = []
    text_off = 0
    for ordinal, record in enumerate(corpus):
        pages.append(PageMeta(
            page_id=record.page_id, article_id=record.article_id,
            journal=record.journal, year=record.year, month=record.month,
            page_number=record.page_number, kind=record.kind))
        raw = record.text.encode("utf-8")
        text_parts.append(raw)
        texts.append((text_off, len(raw)))
        text_off += len(raw)
        for tok in tokenize(record.text):
            if not tok.indexable:
                continue
            entries = term_pages.setdefault(tok.term, [])
            if entries and entries[-1][0] == ordinal:
                entries[-1][1].append(tok.position)
            else:
                entries.append((ordinal, [tok.position]))

    lexicon: dict[str, LexiconEntry] = {}
    blob = bytearray()
    for term_id, term in enumerate(sorted(term_pages, key=str.encode)):
        entries = term_pages[term]
        encoded = _kernels.encode_postings(entries)
        lexicon[term] = LexiconEntry(
            term_id=term_id,
            doc_freq=len(entries),
            coll_freq=sum(len(p) for _, p in entries),
            offset=len(blob),
            length=len(encoded),
        )
        blob.extend(encoded)

    ix = InvertedIndex(lexicon, pages, bytes(blob), texts)
    ix._text_blob = b"".join(text_parts)
    return ix


def write_segment(index: InvertedIndex, dir_path) -> None:
    """Persist an index as a segment directory (deterministic bytes)."""
    os.makedirs(dir_path, exist_ok=True)

    lex = bytearray()
    for term, e in sorted(index._lexicon.items(), key=lambda kv: kv[0].encode()):
        raw = term.encode("utf-8")
        _put_varint(lex, len(raw))
        lex.extend(raw)
        _put_varint(lex, e.doc_freq)
        _put_varint(lex, e.coll_freq)
        lex.extend(_Q.pack(e.offset))
        lex.extend(_Q.pack(e.length))

    table = bytearray()
    for ordinal, p in enumerate(index._pages):
        for s in (p.page_id, p.article_id, p.journal):
            raw = s.encode("utf-8")
            _put_varint(table, len(raw))
            table.extend(raw)
        _put_varint(table, p.year)
        _put_varint(table, p.month)
        _put_varint(table, p.page_number)
        table.append(1 if p.kind == KIND_UNATTACHED else 0)
        off, length = index._texts[ordinal]
        table.extend(_Q.pack(off))
        table.extend(_Q.pack(length))

    postings = bytes(index._postings_blob)
    text = bytes(index._text_data)
    payloads = {"lexicon": bytes(lex), "postings": postings,
                "pagetable": bytes(table), "text": text}
    stats = index.stats()
    meta = {
        "magic": MAGIC,
        "version": FORMAT_VERSION,
        "unique_terms": stats.unique_terms,
        "page_count": stats.page_count,
        "article_count": stats.article_count,
        "checksums": {name: zlib.crc32(payloads[name]) for name in _SEGMENT_FILES},
    }
    for name in _SEGMENT_FILES:
        with open(os.path.join(dir_path, name), "wb") as fh:
            fh.write(payloads[name])
    with open(os.path.join(dir_path, "meta"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


class SegmentIndex(InvertedIndex):
    """Index backed by an on-disk segment; postings and text read on demand."""

    def __init__(self, lexicon, pages, texts, postings_mm, text_mm):
        super().__init__(lexicon, pages, postings_mm, texts)
        self._text_mm = text_mm

    @property
    def _text_data(self):
        return self._text_mm


def open_segment(dir_path) -> SegmentIndex:
    """Open a segment read-only, verifying magic, version and checksums."""
    meta_path = os.path.join(dir_path, "meta")
    try:
        with open(meta_path, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"unsupported segment: cannot read meta in {dir_path}") from exc
    if meta.get("magic") != MAGIC or meta.get("version") != FORMAT_VERSION:
        raise DataError(f"unsupported segment: bad magic or version in {dir_path}")

    data: dict[str, bytes | mmap.mmap] = {}
    for name in _SEGMENT_FILES:
        path = os.path.join(dir_path, name)
        try:
            with open(path, "rb") as fh:
                size = os.fstat(fh.fileno()).st_size
                if size == 0:
                    data[name] = b""
                else:
                    data[name] = mmap.mmap(fh.fileno(), 0, access=mmap.ACCESS_READ)
        except OSError as exc:
            raise DataError(f"corrupt segment: missing file {name}") from exc
        if zlib.crc32(data[name]) != meta["checksums"].get(name):
            raise DataError(f"corrupt segment: checksum mismatch in {name}")

    lexicon: dict[str, LexiconEntry] = {}
    lex = data["lexicon"]
    pos = 0
    term_id = 0
    end = len(lex)
    try:
        while pos < end:
            n, pos = _get_varint(lex, pos)
            term = bytes(lex[pos:pos + n]).decode("utf-8")
            pos += n
            df, pos = _get_varint(lex, pos)
            cf, pos = _get_varint(lex, pos)
            off = _Q.unpack_from(lex, pos)[0]
            length = _Q.unpack_from(lex, pos + 8)[0]
            pos += 16
            lexicon[term] = LexiconEntry(term_id, df, cf, off, length)
            term_id += 1

        pages: list[PageMeta] = []
        texts: list[tuple[int, int]] = []
        table = data["pagetable"]
        pos = 0
        end = len(table)
        while pos < end:
            strings = []
            for _ in range(3):
                n, pos = _get_varint(table, pos)
                strings.append(bytes(table[pos:pos + n]).decode("utf-8"))
                pos += n
            year, pos = _get_varint(table, pos)
            month, pos = _get_varint(table, pos)
            page_number, pos = _get_varint(table, pos)
            kind = KIND_UNATTACHED if table[pos] else KIND_ARTICLE_PAGE
            pos += 1
            off = _Q.unpack_from(table, pos)[0]
            length = _Q.unpack_from(table, pos + 8)[0]
            pos += 16
            pages.append(PageMeta(strings[0], strings[1], strings[2],
                                  year, month, page_number, kind))
            texts.append((off, length))
    except (IndexError, struct.error, UnicodeDecodeError) as exc:
        raise DataError(f"corrupt segment: truncated metadata in {dir_path}") from exc

    if len(lexicon) != meta["unique_terms"] or len(pages) != meta["page_count"]:
        raise DataError(f"corrupt segment: counts disagree with meta in {dir_path}")
    return SegmentIndex(lexicon, pages, texts, data["postings"], data["text"])


def _put_varint(out: bytearray, v: int) -> None:
    while v >= 0x80:
        out.append((v & 0x7F) | 0x80)
        v >>= 7
    out.append(v)


def _get_varint(data, pos: int) -> tuple[int, int]:
    v = 0
    shift = 0
    while True:
        b = data[pos]
        pos += 1
        v |= (b & 0x7F) << shift
        if b < 0x80:
            return v, pos
        shift += 7
