"""Pure-Python postings codec, used when the compiled kernel is absent.

Byte-for-byte identical output to the Cython kernel; the segment format
does not depend on which implementation produced it.
"""

from __future__ import annotations

IMPLEMENTATION = "python"


def encode_deltas(values) -> bytes:
    """LEB128-encode a strictly increasing int list as gaps (first absolute)."""
    out = bytearray()
    prev = 0
    first = True
    for v in values:
        d = v if first else v - prev
        first = False
        prev = v
        while d >= 0x80:
            out.append((d & 0x7F) | 0x80)
            d >>= 7
        out.append(d)
    return bytes(out)


def decode_deltas(data, offset: int = 0, count: int = -1) -> list[int]:
    """Inverse of encode_deltas over the whole buffer (count < 0) or `count` values."""
    values, _ = _decode_from(data, offset, count)
    return values


def _decode_from(data, offset: int, count: int):
    values = []
    n = len(data)
    pos = offset
    prev = 0
    while pos < n and count != 0:
        shift = 0
        v = 0
        while True:
            b = data[pos]
            pos += 1
            v |= (b & 0x7F) << shift
            if b < 0x80:
                break
            shift += 7
        prev = v if not values else prev + v
        values.append(prev)
        if count > 0:
            count -= 1
    return values, pos


def encode_postings(entries) -> bytes:
    """Encode [(page_ordinal, [positions...]), ...] into one delta-varint blob."""
    out = bytearray()
    _put(out, len(entries))
    prev_page = 0
    first_page = True
    for page, positions in entries:
        _put(out, page if first_page else page - prev_page)
        first_page = False
        prev_page = page
        _put(out, len(positions))
        prev = 0
        first = True
        for p in positions:
            _put(out, p if first else p - prev)
            first = False
            prev = p
    return bytes(out)


def decode_postings(data) -> list[tuple[int, list[int]]]:
    """Inverse of encode_postings."""
    pos = 0
    n_entries, pos = _get(data, pos)
    entries = []
    page = 0
    for i in range(n_entries):
        d, pos = _get(data, pos)
        page = d if i == 0 else page + d
        n_pos, pos = _get(data, pos)
        positions = []
        cur = 0
        for j in range(n_pos):
            d, pos = _get(data, pos)
            cur = d if j == 0 else cur + d
            positions.append(cur)
        entries.append((page, positions))
    return entries


def intersect_sorted(a: list[int], b: list[int]) -> list[int]:
    """Intersection of two strictly increasing int lists."""
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out


def _put(out: bytearray, v: int) -> None:
    while v >= 0x80:
        out.append((v & 0x7F) | 0x80)
        v >>= 7
    out.append(v)


def _get(data, pos: int):
    v = 0
    shift = 0
    while True:
        b = data[pos]
        pos += 1
        v |= (b & 0x7F) << shift
        if b < 0x80:
            return v, pos
        shift += 7
