"""Partial-sentence snippet extraction with highlight offsets.

All offsets are byte offsets into the page's UTF-8 text. The snippet is
anchored on the first match span, widened up to half the window on each
side, then snapped to a sentence boundary when one falls inside the
window and to a word boundary otherwise. A sentence boundary is '.', '!'
or '?' followed by whitespace or end-of-text; OCR text defeats anything
smarter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

DEFAULT_WINDOW = 150

_SENTENCE_END_LEFT = re.compile(rb"[.!?][ \t\r\n]+")
_SENTENCE_END_RIGHT = re.compile(rb"[.!?](?=[ \t\r\n]|$)")
_WHITESPACE = b" \t\r\n"


@dataclass(frozen=True)
class Snippet:
    text: str
    highlights: list[tuple[int, int]]
    page_byte_origin: int


def extract_snippet(page_text: str, match_spans, window: int = DEFAULT_WINDOW) -> Snippet:
    """Snippet around the first match span, with in-window spans rebased.

    match_spans must be ordered, non-overlapping byte spans within the
    page text; window is the total snippet budget in bytes (>= 32).
    """
    if window < 32:
        raise ValueError(f"window must be >= 32 bytes, got {window}")
    if not match_spans:
        raise ValueError("match_spans must be nonempty")
    data = page_text.encode("utf-8")
    n = len(data)
    prev_end = 0
    for a, b in match_spans:
        if not (0 <= a < b <= n) or a < prev_end:
            raise ValueError(f"match span ({a}, {b}) out of bounds or out of order")
        prev_end = b

    first_start, first_end = match_spans[0]
    left_raw = max(0, first_start - window // 2)
    right_raw = min(n, first_end + window // 2)

    if left_raw == 0:
        start = 0
    else:
        boundary = None
        for m in _SENTENCE_END_LEFT.finditer(data, left_raw, first_start):
            boundary = m.end()
        if boundary is not None:
            start = boundary
        else:
            start = _next_word_start(data, left_raw, first_start)

    if right_raw == n:
        end = n
    else:
        m = _SENTENCE_END_RIGHT.search(data, first_end, right_raw)
        if m is not None:
            end = m.end()
        else:
            end = _prev_word_end(data, first_end, right_raw)

    highlights = [(a - start, b - start)
                  for a, b in match_spans if a >= start and b <= end]
    return Snippet(
        text=data[start:end].decode("utf-8"),
        highlights=highlights,
        page_byte_origin=start,
    )


def _next_word_start(data: bytes, pos: int, limit: int) -> int:
    """First word start at or after pos (never splits a word or UTF-8 char)."""
    if pos == 0 or data[pos - 1] in _WHITESPACE:
        while pos < limit and (data[pos] & 0xC0) == 0x80:
            pos += 1
        return pos
    while pos < limit and data[pos] not in _WHITESPACE:
        pos += 1
    while pos < limit and data[pos] in _WHITESPACE:
        pos += 1
    return pos


def _prev_word_end(data: bytes, floor: int, pos: int) -> int:
    """Last word end at or before pos, not retreating past floor."""
    if pos == len(data) or data[pos] in _WHITESPACE:
        return pos
    while pos > floor and data[pos - 1] not in _WHITESPACE:
        pos -= 1
    while pos > floor and data[pos - 1] in _WHITESPACE:
        pos -= 1
    return pos
