"""Query parsing and execution.

Grammar: words separated by whitespace, AND-combined; a double-quoted
span is a phrase (strict adjacency); a '=' prefix on a word disables
synonym expansion for that word. All input is case-folded.

A page matches a Term atom when any member of the word's expansion set
occurs indexably on it, and a Phrase atom when consecutive positions
hold members of each slot's expansion set. Non-indexable tokens consume
positions, so a phrase never matches across OCR garbage or numbers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from pagesearch import _kernels
from pagesearch.errors import QueryError
from pagesearch.index import InvertedIndex
from pagesearch.snippet import DEFAULT_WINDOW, Snippet, extract_snippet
from pagesearch.textprep import (EMPTY_SYNONYMS, SynonymTable, expand,
                                 tokenize)

DEFAULT_ARTICLE_URL_TEMPLATE = "article://{article_id}"
DEFAULT_PAGE_URL_TEMPLATE = "page://{page_id}"


@dataclass(frozen=True)
class QueryWord:
    word: str
    exact: bool = False


@dataclass(frozen=True)
class Term:
    word: QueryWord


@dataclass(frozen=True)
class Phrase:
    words: tuple[QueryWord, ...]


@dataclass(frozen=True)
class QueryAst:
    atoms: tuple


class SortOrder(str, enum.Enum):
    RELEVANCE = "relevance"
    OLDEST_FIRST = "oldest_first"
    NEWEST_FIRST = "newest_first"


@dataclass(frozen=True)
class SearchFilters:
    year_from: int | None = None
    year_to: int | None = None
    journals: frozenset[str] | None = None

    def __post_init__(self):
        if (self.year_from is not None and self.year_to is not None
                and self.year_from > self.year_to):
            raise QueryError(
                f"bad year range: {self.year_from} > {self.year_to}")


@dataclass(frozen=True)
class PageHit:
    page_id: str
    page_number: int
    snippet: Snippet
    score: float
    url: str


@dataclass(frozen=True)
class ArticleHit:
    article_id: str
    journal: str
    year: int
    month: int
    page_hits: tuple[PageHit, ...]
    score: float
    article_url: str
    first_page_url: str


@dataclass(frozen=True)
class ExecuteResult:
    hits: list[ArticleHit]
    total_count: int


def parse_query(text: str) -> QueryAst:
    """Parse the user query grammar into an AST."""
    atoms = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        if text[i] == '"':
            close = text.find('"', i + 1)
            if close < 0:
                raise QueryError(f"unbalanced quote at column {i + 1}")
            words = [w for w in
                     (_normalize_word(raw) for raw in text[i + 1:close].split())
                     if w is not None]
            if len(words) >= 2:
                atoms.append(Phrase(tuple(words)))
            elif len(words) == 1:
                atoms.append(Term(words[0]))
            i = close + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] != '"':
            j += 1
        word = _normalize_word(text[i:j])
        if word is not None:
            atoms.append(Term(word))
        i = j
    if not atoms:
        raise QueryError("empty query")
    return QueryAst(tuple(atoms))


def _normalize_word(raw: str) -> QueryWord | None:
    exact = raw.startswith("=")
    if exact:
        raw = raw[1:]
    a, b = 0, len(raw)
    while a < b and not (raw[a].isalpha() or raw[a].isdecimal()):
        a += 1
    while b > a and not (raw[b - 1].isalpha() or raw[b - 1].isdecimal()):
        b -= 1
    if a >= b:
        return None
    return QueryWord(raw[a:b].casefold(), exact)


def score_page(tf_per_atom, doc_freqs, page_count: int) -> float:
    """Sum over atoms of ln(1+tf) * ln(1 + page_count / max(1, doc_freq))."""
    total = 0.0
    for tf, df in zip(tf_per_atom, doc_freqs):
        total += math.log(1 + tf) * math.log(1 + page_count / max(1, df))
    return total


def sort_key(hit: ArticleHit, sort: SortOrder):
    """Total, deterministic ordering key; month 0 sorts before month 1."""
    tiebreak = hit.page_hits[0].page_id if hit.page_hits else ""
    if sort is SortOrder.OLDEST_FIRST:
        return (hit.year, hit.month, hit.article_id, tiebreak)
    if sort is SortOrder.NEWEST_FIRST:
        return (-hit.year, -hit.month, hit.article_id, tiebreak)
    return (-hit.score, -hit.year, -hit.month, hit.article_id, tiebreak)


def compare_hits(a: ArticleHit, b: ArticleHit, sort: SortOrder) -> int:
    ka, kb = sort_key(a, sort), sort_key(b, sort)
    return -1 if ka < kb else (1 if ka > kb else 0)


def execute(index: InvertedIndex, ast: QueryAst,
            filters: SearchFilters | None = None,
            sort: SortOrder = SortOrder.RELEVANCE,
            offset: int = 0, limit: int | None = None,
            synonyms: SynonymTable = EMPTY_SYNONYMS, *,
            article_url_template: str = DEFAULT_ARTICLE_URL_TEMPLATE,
            page_url_template: str = DEFAULT_PAGE_URL_TEMPLATE,
            snippet_window: int = DEFAULT_WINDOW) -> ExecuteResult:
    """Run a query: AND over atoms, filter, group by article, sort, paginate."""
    if filters and filters.journals is not None:
        unknown = filters.journals - index.journals
        if unknown:
            raise QueryError(
                f"unknown journal code {sorted(unknown)[0]!r}; "
                f"known codes: {', '.join(sorted(index.journals))}")

    expansions = [_atom_expansions(atom, synonyms) for atom in ast.atoms]

    # per atom: sorted matching ordinals + tf per ordinal
    matching: list[int] | None = None
    tf_maps: list[dict[int, int]] = []
    doc_freqs: list[int] = []
    for atom, exp in zip(ast.atoms, expansions):
        if isinstance(atom, Term):
            tf_map = _term_matches(index, exp[0])
        else:
            tf_map = _phrase_matches(index, exp)
        tf_maps.append(tf_map)
        doc_freqs.append(len(tf_map))
        ordinals = sorted(tf_map)
        matching = ordinals if matching is None else \
            _kernels.intersect_sorted(matching, ordinals)
        if not matching:
            return ExecuteResult([], 0)

    if filters:
        matching = [o for o in matching
                    if _passes_filters(index.page_meta(o), filters)]
    if not matching:
        return ExecuteResult([], 0)

    page_count = index.page_count
    scores = {o: score_page([m[o] for m in tf_maps], doc_freqs, page_count)
              for o in matching}

    # group by article; unattached pages stand alone
    groups: dict[tuple[str, str], list[int]] = {}
    for o in matching:
        meta = index.page_meta(o)
        key = (meta.article_id, "") if meta.article_id else ("", meta.page_id)
        groups.setdefault(key, []).append(o)

    skeletons = []
    for ordinals in groups.values():
        ordinals.sort(key=lambda o: (index.page_meta(o).page_number,
                                     index.page_meta(o).page_id))
        first = index.page_meta(ordinals[0])
        score = max(scores[o] for o in ordinals)
        skeletons.append((first, ordinals, score))
    skeletons.sort(key=lambda sk: _skeleton_key(sk, sort))

    total = len(skeletons)
    if limit is None:
        window = skeletons[offset:]
    else:
        window = skeletons[offset:offset + limit]

    hits = []
    for first, ordinals, score in window:
        page_hits = []
        for o in ordinals:
            meta = index.page_meta(o)
            text = index.page_text(o)
            spans = _match_spans(text, expansions)
            snip = extract_snippet(text, spans, snippet_window)
            page_hits.append(PageHit(
                page_id=meta.page_id, page_number=meta.page_number,
                snippet=snip, score=scores[o],
                url=page_url_template.format(page_id=meta.page_id)))
        hits.append(ArticleHit(
            article_id=first.article_id, journal=first.journal,
            year=first.year, month=first.month,
            page_hits=tuple(page_hits), score=score,
            article_url=article_url_template.format(article_id=first.article_id),
            first_page_url=page_url_template.format(page_id=page_hits[0].page_id)))
    return ExecuteResult(hits, total)


def _skeleton_key(sk, sort: SortOrder):
    first, ordinals, score = sk
    tiebreak = first.page_id
    if sort is SortOrder.OLDEST_FIRST:
        return (first.year, first.month, first.article_id, tiebreak)
    if sort is SortOrder.NEWEST_FIRST:
        return (-first.year, -first.month, first.article_id, tiebreak)
    return (-score, -first.year, -first.month, first.article_id, tiebreak)


def _atom_expansions(atom, synonyms: SynonymTable) -> list[frozenset[str]]:
    """One expansion set per word slot (Terms have a single slot)."""
    if isinstance(atom, Term):
        return [expand(atom.word.word, atom.word.exact, synonyms)]
    return [expand(w.word, w.exact, synonyms) for w in atom.words]


def _term_matches(index: InvertedIndex, terms: frozenset[str]) -> dict[int, int]:
    tf: dict[int, int] = {}
    for t in sorted(terms):
        plist = index.postings(t)
        if plist is None:
            continue
        for ordinal, positions in plist:
            tf[ordinal] = tf.get(ordinal, 0) + len(positions)
    return tf


def _phrase_matches(index: InvertedIndex,
                    expansions: list[frozenset[str]]) -> dict[int, int]:
    # per slot: ordinal -> position set
    slots: list[dict[int, set[int]]] = []
    for exp in expansions:
        slot: dict[int, set[int]] = {}
        for t in sorted(exp):
            plist = index.postings(t)
            if plist is None:
                continue
            for ordinal, positions in plist:
                slot.setdefault(ordinal, set()).update(positions)
        if not slot:
            return {}
        slots.append(slot)

    candidates = set(slots[0])
    for slot in slots[1:]:
        candidates &= slot.keys()
    tf: dict[int, int] = {}
    for ordinal in candidates:
        count = 0
        for p in slots[0][ordinal]:
            if all(p + i in slots[i][ordinal] for i in range(1, len(slots))):
                count += 1
        if count:
            tf[ordinal] = count
    return tf


def _passes_filters(meta, filters: SearchFilters) -> bool:
    if filters.year_from is not None and meta.year < filters.year_from:
        return False
    if filters.year_to is not None and meta.year > filters.year_to:
        return False
    if filters.journals is not None and meta.journal not in filters.journals:
        return False
    return True


def _match_spans(text: str, expansions) -> list[tuple[int, int]]:
    """Byte spans of every atom occurrence on the page, merged and ordered."""
    tokens = tokenize(text)
    by_pos = {t.position: t for t in tokens if t.indexable}
    spans: list[tuple[int, int]] = []
    for slot_sets in expansions:
        k = len(slot_sets)
        for tok in tokens:
            if not tok.indexable or tok.term not in slot_sets[0]:
                continue
            if k == 1:
                spans.append((tok.byte_start, tok.byte_end))
                continue
            last = by_pos.get(tok.position + k - 1)
            if last is not None and all(
                    (nxt := by_pos.get(tok.position + i)) is not None
                    and nxt.term in slot_sets[i] for i in range(1, k)):
                spans.append((tok.byte_start, last.byte_end))
    spans.sort()
    merged: list[tuple[int, int]] = []
    for a, b in spans:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged
