import os

import pytest

from pagesearch.corpus import ingest_corpus, CorpusStore
from pagesearch.errors import DataError
from pagesearch.index import build_index, open_segment, write_segment
from pagesearch.textprep import tokenize

from conftest import HERITAGE_MANIFEST, SYNONYMS_PATH, generate_corpus


def naive_postings(corpus):
    """Independent scan: term -> [(ordinal, positions)] from raw text."""
    out = {}
    for ordinal, record in enumerate(corpus):
        for tok in tokenize(record.text):
            if not tok.indexable:
                continue
            entries = out.setdefault(tok.term, [])
            if entries and entries[-1][0] == ordinal:
                entries[-1][1].append(tok.position)
            else:
                entries.append((ordinal, [tok.position]))
    return out


def test_empty_corpus():
    ix = build_index(CorpusStore())
    s = ix.stats()
    assert s.unique_terms == 0 and s.page_count == 0


def test_heritage_counts(heritage_index):
    s = heritage_index.stats()
    assert s.page_count == 12
    plist = heritage_index.postings("eddington")
    assert plist is not None and len(plist) == 1


def test_heritage_pluto_pages(heritage_index):
    plist = heritage_index.postings("pluto")
    page_ids = {heritage_index.page_meta(o).page_id for o, _ in plist}
    assert page_ids == {"1898Obs-0428", "1930PASP-0087"}


def test_unknown_term_absent(heritage_index):
    assert heritage_index.postings("zz-never-seen") is None


def test_identical_pages_symmetric(tmp_path):
    import json
    path = tmp_path / "twins.jsonl"
    line = {"journal": "PASP", "year": 1900, "month": 0, "page_number": 1,
            "kind": "article_page", "text": "twin stars shine alike"}
    with open(path, "w") as fh:
        fh.write(json.dumps({**line, "page_id": "p1", "article_id": "a1"}) + "\n")
        fh.write(json.dumps({**line, "page_id": "p2", "article_id": "a2"}) + "\n")
    ix = build_index(ingest_corpus(path))
    for term in ix.terms:
        plist = ix.postings(term)
        assert len(plist) == 2
        assert plist[0][1] == plist[1][1]


def test_doc_freq_invariants(heritage_index):
    for term in heritage_index.terms:
        e = heritage_index.lexicon_entry(term)
        plist = heritage_index.postings(term)
        assert e.doc_freq == len(plist) >= 1
        assert e.coll_freq == sum(len(p) for _, p in plist) >= e.doc_freq


def test_term_ids_dense_lexicographic(heritage_index):
    terms = sorted(heritage_index.terms, key=str.encode)
    for expected, term in enumerate(terms):
        assert heritage_index.lexicon_entry(term).term_id == expected


def test_oracle_equivalence_against_naive_scan(heritage_corpus, heritage_index):
    expected = naive_postings(heritage_corpus)
    assert set(expected) == set(heritage_index.terms)
    for term, entries in expected.items():
        assert heritage_index.postings(term) == entries


def test_oracle_equivalence_generated(tmp_path):
    path = tmp_path / "gen.jsonl"
    generate_corpus(path, 120, seed=7)
    corpus = ingest_corpus(path)
    ix = build_index(corpus)
    expected = naive_postings(corpus)
    assert set(expected) == set(ix.terms)
    assert ix.stats().unique_terms == len(expected)
    for term, entries in expected.items():
        assert ix.postings(term) == entries


def test_monotone_growth(tmp_path):
    path = tmp_path / "gen.jsonl"
    generate_corpus(path, 60, seed=11)
    corpus = ingest_corpus(path)
    small = build_index(CorpusStore(records=corpus.records[:50]))
    full = build_index(corpus)
    for term in small.terms:
        assert full.lexicon_entry(term).doc_freq >= small.lexicon_entry(term).doc_freq


class TestSegment:
    def test_roundtrip(self, heritage_index, tmp_path):
        seg = tmp_path / "seg"
        write_segment(heritage_index, seg)
        reopened = open_segment(seg)
        assert set(reopened.terms) == set(heritage_index.terms)
        for term in heritage_index.terms:
            assert reopened.postings(term) == heritage_index.postings(term)
        for o in range(heritage_index.page_count):
            assert reopened.page_meta(o) == heritage_index.page_meta(o)
            assert reopened.page_text(o) == heritage_index.page_text(o)

    def test_build_deterministic(self, tmp_path):
        dirs = []
        for name in ("a", "b"):
            corpus = ingest_corpus(HERITAGE_MANIFEST)
            ix = build_index(corpus, SYNONYMS_PATH)
            seg = tmp_path / name
            write_segment(ix, seg)
            dirs.append(seg)
        for fname in os.listdir(dirs[0]):
            a = (dirs[0] / fname).read_bytes()
            b = (dirs[1] / fname).read_bytes()
            assert a == b, f"segment file {fname} differs between builds"

    def test_open_empty_dir(self, tmp_path):
        with pytest.raises(DataError, match="unsupported segment"):
            open_segment(tmp_path)

    def test_bad_magic(self, heritage_index, tmp_path):
        seg = tmp_path / "seg"
        write_segment(heritage_index, seg)
        meta = (seg / "meta").read_text().replace("FTS1", "NOPE")
        (seg / "meta").write_text(meta)
        with pytest.raises(DataError, match="unsupported segment"):
            open_segment(seg)

    def test_corrupt_postings_detected(self, heritage_index, tmp_path):
        seg = tmp_path / "seg"
        write_segment(heritage_index, seg)
        data = bytearray((seg / "postings").read_bytes())
        data[len(data) // 2] ^= 0xFF
        (seg / "postings").write_bytes(bytes(data))
        with pytest.raises(DataError, match="corrupt segment.*postings"):
            open_segment(seg)

    def test_truncated_file_detected(self, heritage_index, tmp_path):
        seg = tmp_path / "seg"
        write_segment(heritage_index, seg)
        data = (seg / "lexicon").read_bytes()
        (seg / "lexicon").write_bytes(data[:len(data) // 2])
        with pytest.raises(DataError, match="corrupt segment"):
            open_segment(seg)

    def test_stats_survive_roundtrip(self, heritage_index, tmp_path):
        seg = tmp_path / "seg"
        write_segment(heritage_index, seg)
        assert open_segment(seg).stats() == heritage_index.stats()
