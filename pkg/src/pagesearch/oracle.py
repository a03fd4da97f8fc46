"""Naive full-scan matcher used to cross-check the index path.

Re-tokenizes every page and applies the match definition directly,
without touching postings, the lexicon, or the segment files. The
oracle-check CLI command runs seeded random queries through both paths
and reports the first disagreement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from pagesearch.corpus import CorpusStore
from pagesearch.index import InvertedIndex
from pagesearch.query import (Phrase, QueryAst, QueryWord, SearchFilters,
                              Term, execute)
from pagesearch.textprep import EMPTY_SYNONYMS, SynonymTable, expand, tokenize


class _ScanPage:
    __slots__ = ("record", "terms", "by_pos")

    def __init__(self, record):
        self.record = record
        tokens = [t for t in tokenize(record.text) if t.indexable]
        self.terms = {t.term for t in tokens}
        self.by_pos = {t.position: t.term for t in tokens}


class NaiveScanner:
    """Brute-force matcher over a corpus; tokenization cached per page."""

    def __init__(self, corpus: CorpusStore):
        self._pages = [_ScanPage(r) for r in corpus]

    def matching_page_ids(self, ast: QueryAst,
                          filters: SearchFilters | None = None,
                          synonyms: SynonymTable = EMPTY_SYNONYMS) -> set[str]:
        out = set()
        for page in self._pages:
            r = page.record
            if filters:
                if filters.year_from is not None and r.year < filters.year_from:
                    continue
                if filters.year_to is not None and r.year > filters.year_to:
                    continue
                if filters.journals is not None and r.journal not in filters.journals:
                    continue
            if all(self._atom_matches(page, atom, synonyms) for atom in ast.atoms):
                out.add(r.page_id)
        return out

    def _atom_matches(self, page: _ScanPage, atom, synonyms) -> bool:
        if isinstance(atom, Term):
            wanted = expand(atom.word.word, atom.word.exact, synonyms)
            return any(t in page.terms for t in wanted)
        slot_sets = [expand(w.word, w.exact, synonyms) for w in atom.words]
        for p in page.by_pos:
            if all(page.by_pos.get(p + i) in s for i, s in enumerate(slot_sets)):
                return True
        return False


@dataclass
class OracleMismatch:
    query: QueryAst
    filters: SearchFilters | None
    expected: set[str]
    actual: set[str]

    def describe(self) -> str:
        return (f"oracle mismatch on query {self.query}\n"
                f"filters: {self.filters}\n"
                f"only in naive scan: {sorted(self.expected - self.actual)[:10]}\n"
                f"only in index path: {sorted(self.actual - self.expected)[:10]}")


def random_queries(corpus: CorpusStore, n: int, seed: int,
                   synonyms: SynonymTable = EMPTY_SYNONYMS):
    """Seeded stream of (QueryAst, SearchFilters|None) over corpus vocabulary."""
    rng = random.Random(seed)
    vocab = sorted({t.term for r in corpus for t in tokenize(r.text) if t.indexable})
    adjacents = []
    for r in corpus:
        toks = [t for t in tokenize(r.text) if t.indexable]
        by_pos = {t.position: t.term for t in toks}
        for t in toks:
            nxt = by_pos.get(t.position + 1)
            if nxt is not None:
                adjacents.append((t.term, nxt))
    synonym_words = sorted(w for g in synonyms.groups for w in g)
    journals = sorted({r.journal for r in corpus})
    years = sorted({r.year for r in corpus}) or [1900]

    if not vocab:
        return

    for _ in range(n):
        atoms = []
        for _ in range(rng.randint(1, 3)):
            exact = rng.random() < 0.25
            if rng.random() < 0.35 and adjacents:
                w1, w2 = rng.choice(adjacents)
                words = (QueryWord(w1, exact), QueryWord(w2, rng.random() < 0.25))
                atoms.append(Phrase(words))
            else:
                pool = synonym_words if synonym_words and rng.random() < 0.3 else vocab
                atoms.append(Term(QueryWord(rng.choice(pool), exact)))
        filters = None
        if rng.random() < 0.4:
            year_from = year_to = None
            if rng.random() < 0.7:
                y1, y2 = sorted((rng.choice(years), rng.choice(years)))
                year_from, year_to = y1, y2
            js = None
            if rng.random() < 0.4 and journals:
                js = frozenset(rng.sample(journals,
                                          rng.randint(1, min(3, len(journals)))))
            filters = SearchFilters(year_from, year_to, js)
        yield QueryAst(tuple(atoms)), filters


def oracle_check(index: InvertedIndex, corpus: CorpusStore, n_queries: int,
                 seed: int, synonyms: SynonymTable = EMPTY_SYNONYMS
                 ) -> OracleMismatch | None:
    """Compare execute() against the naive scanner; None means agreement."""
    scanner = NaiveScanner(corpus)
    for ast, filters in random_queries(corpus, n_queries, seed, synonyms):
        expected = scanner.matching_page_ids(ast, filters, synonyms)
        result = execute(index, ast, filters, synonyms=synonyms)
        actual = {ph.page_id for hit in result.hits for ph in hit.page_hits}
        if expected != actual:
            return OracleMismatch(ast, filters, expected, actual)
    return None
