"""OCR text preparation: tokenization, spurious-word filtering, synonyms.

OCR'd page text is noisy; words containing recognition-error characters
are kept as position holders but never indexed, so phrase adjacency is
not silently collapsed across them. Pure numbers are treated the same
way. Terms shorter than 2 or longer than 40 characters are dropped from
the index as OCR shrapnel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from pagesearch.errors import DataError

MIN_TERM_LEN = 2
MAX_TERM_LEN = 40

_WORD_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    term: str
    position: int
    byte_start: int
    byte_end: int
    indexable: bool


def _is_word_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdecimal()


def is_spurious(word: str) -> bool:
    """True when the word looks like an OCR recognition error.

    A word is spurious if it contains any character other than a letter,
    decimal digit, hyphen or apostrophe, or if it alternates between
    letters and digits two or more times ("l0ng3r"; "m31" survives).
    """
    alternations = 0
    prev_class = None
    for ch in word:
        if ch.isalpha():
            cls = "a"
        elif ch.isdecimal():
            cls = "d"
        elif ch in "-'":
            continue
        else:
            return True
        if prev_class is not None and cls != prev_class:
            alternations += 1
            if alternations >= 2:
                return True
        prev_class = cls
    return False


def _indexable(term: str) -> bool:
    if not MIN_TERM_LEN <= len(term) <= MAX_TERM_LEN:
        return False
    if term.isdecimal():
        return False
    return not is_spurious(term)


def tokenize(text: str) -> list[Token]:
    """Split text into position-dense tokens with byte offsets.

    Every whitespace-delimited word yields one token after stripping
    leading/trailing punctuation; words that strip to nothing are
    skipped without consuming a position. Non-indexable tokens still
    consume positions.
    """
    tokens: list[Token] = []
    position = 0
    byte_pos = 0
    char_pos = 0
    for m in _WORD_RE.finditer(text):
        a, b = m.start(), m.end()
        while a < b and not _is_word_char(text[a]):
            a += 1
        while b > a and not _is_word_char(text[b - 1]):
            b -= 1
        if a >= b:
            continue
        byte_pos += len(text[char_pos:a].encode("utf-8"))
        raw = text[a:b]
        nbytes = len(raw.encode("utf-8"))
        term = raw.casefold()
        tokens.append(Token(term, position, byte_pos, byte_pos + nbytes,
                            _indexable(term)))
        position += 1
        byte_pos += nbytes
        char_pos = b
    return tokens


class SynonymTable:
    """Disjoint groups of interchangeable words, case-folded."""

    def __init__(self, groups: list[frozenset[str]]):
        self.groups = groups
        self._by_word: dict[str, frozenset[str]] = {}
        for group in groups:
            for word in group:
                self._by_word[word] = group

    def group_of(self, word: str) -> frozenset[str] | None:
        return self._by_word.get(word)

    def __len__(self) -> int:
        return len(self.groups)


EMPTY_SYNONYMS = SynonymTable([])


def expand(term: str, exact: bool, table: SynonymTable) -> frozenset[str]:
    """The set of index terms a query word stands for.

    Exact-flagged words (the '=' prefix) expand only to themselves;
    otherwise the word's whole synonym group, or itself when ungrouped.
    """
    if exact:
        return frozenset((term,))
    return table.group_of(term) or frozenset((term,))


def load_synonyms(path) -> SynonymTable:
    """Load a synonym file: one group per line, '#' lines are comments."""
    groups: list[frozenset[str]] = []
    seen: dict[str, int] = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read synonyms {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words = [w.casefold() for w in line.split(" ") if w]
            if len(words) < 2:
                raise DataError(f"synonym group needs at least 2 words, line {lineno}")
            if len(set(words)) != len(words):
                raise DataError(f"repeated word in group, line {lineno}")
            for w in words:
                if w in seen:
                    raise DataError(
                        f"word {w!r} in two groups (lines {seen[w]} and {lineno})")
                seen[w] = lineno
            groups.append(frozenset(words))
    return SynonymTable(groups)
