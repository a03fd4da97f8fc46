import json
import os
import random

import pytest

from pagesearch.corpus import ingest_corpus
from pagesearch.index import build_index
from pagesearch.textprep import load_synonyms

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
HERITAGE_MANIFEST = os.path.join(FIXTURES, "heritage.jsonl")
SYNONYMS_PATH = os.path.join(FIXTURES, "synonyms.txt")


@pytest.fixture(scope="session")
def heritage_corpus():
    return ingest_corpus(HERITAGE_MANIFEST)


@pytest.fixture(scope="session")
def heritage_index(heritage_corpus):
    return build_index(heritage_corpus, SYNONYMS_PATH)


@pytest.fixture(scope="session")
def synonyms():
    return load_synonyms(SYNONYMS_PATH)


def generate_corpus(path, n_pages, seed, vocab_size=2000, words_per_page=30,
                    n_synonym_groups=0, synonyms_path=None):
    """Seeded random corpus in manifest format; returns the vocabulary."""
    rng = random.Random(seed)
    vocab = [f"w{i:04d}" for i in range(vocab_size)]
    # salt in some natural-looking words so phrase/synonym queries bite
    vocab[:8] = ["critical", "mass", "planet", "pluto", "galaxy",
                 "extragalactic", "nebula", "spectrum"]
    journals = ["PASP", "Obs", "MNRAS", "ApJ", "AJ"]
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(n_pages):
            words = rng.choices(vocab, k=words_per_page)
            if rng.random() < 0.05:
                words.insert(rng.randrange(len(words)), "f1ux#")
            if rng.random() < 0.05:
                words.insert(rng.randrange(len(words)), str(rng.randrange(3000)))
            unattached = rng.random() < 0.04
            fh.write(json.dumps({
                "page_id": f"p{i:06d}",
                "article_id": "" if unattached else f"a{i // 3:06d}",
                "journal": rng.choice(journals),
                "year": rng.randint(1850, 2000),
                "month": rng.randint(0, 12),
                "page_number": 0 if unattached else (i % 3) + 1,
                "kind": "unattached" if unattached else "article_page",
                "text": " ".join(words),
            }) + "\n")
    if synonyms_path and n_synonym_groups:
        with open(synonyms_path, "w", encoding="utf-8") as fh:
            pool = [w for w in vocab if w not in ("critical", "mass")]
            rng.shuffle(pool)
            it = iter(pool)
            for _ in range(n_synonym_groups):
                group = [next(it) for _ in range(rng.randint(2, 4))]
                fh.write(" ".join(group) + "\n")
    return vocab
