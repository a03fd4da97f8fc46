# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled postings codec. Output is byte-identical to fallback.py."""

from libc.stdint cimport uint64_t

IMPLEMENTATION = "cython"


cdef inline void _put(bytearray out, uint64_t v):
    while v >= 0x80:
        out.append(<unsigned char>((v & 0x7F) | 0x80))
        v >>= 7
    out.append(<unsigned char>v)


cdef inline uint64_t _get(const unsigned char[::1] data, Py_ssize_t* pos) except? 0:
    cdef uint64_t v = 0
    cdef int shift = 0
    cdef unsigned char b
    while True:
        b = data[pos[0]]
        pos[0] += 1
        v |= (<uint64_t>(b & 0x7F)) << shift
        if b < 0x80:
            return v
        shift += 7


def encode_deltas(values):
    """LEB128-encode a strictly increasing int list as gaps (first absolute)."""
    cdef bytearray out = bytearray()
    cdef uint64_t prev = 0, v
    cdef bint first = True
    for x in values:
        v = <uint64_t>x
        if first:
            _put(out, v)
            first = False
        else:
            _put(out, v - prev)
        prev = v
    return bytes(out)


def decode_deltas(data, Py_ssize_t offset=0, Py_ssize_t count=-1):
    """Inverse of encode_deltas over the whole buffer (count < 0) or `count` values."""
    cdef const unsigned char[::1] buf = data
    cdef Py_ssize_t pos = offset, n = buf.shape[0]
    cdef uint64_t prev = 0
    cdef bint first = True
    cdef list values = []
    while pos < n and count != 0:
        if first:
            prev = _get(buf, &pos)
            first = False
        else:
            prev += _get(buf, &pos)
        values.append(prev)
        if count > 0:
            count -= 1
    return values


def encode_postings(entries):
    """Encode [(page_ordinal, [positions...]), ...] into one delta-varint blob."""
    cdef bytearray out = bytearray()
    cdef uint64_t prev_page = 0, prev_pos, page, p
    cdef bint first_page = True, first
    _put(out, len(entries))
    for page_obj, positions in entries:
        page = <uint64_t>page_obj
        if first_page:
            _put(out, page)
            first_page = False
        else:
            _put(out, page - prev_page)
        prev_page = page
        _put(out, len(positions))
        prev_pos = 0
        first = True
        for pos_obj in positions:
            p = <uint64_t>pos_obj
            if first:
                _put(out, p)
                first = False
            else:
                _put(out, p - prev_pos)
            prev_pos = p
    return bytes(out)


def decode_postings(data):
    """Inverse of encode_postings."""
    cdef const unsigned char[::1] buf = data
    cdef Py_ssize_t pos = 0
    cdef uint64_t n_entries, n_pos, page = 0, cur
    cdef Py_ssize_t i, j
    cdef list entries = [], positions
    n_entries = _get(buf, &pos)
    for i in range(<Py_ssize_t>n_entries):
        if i == 0:
            page = _get(buf, &pos)
        else:
            page += _get(buf, &pos)
        n_pos = _get(buf, &pos)
        positions = []
        cur = 0
        for j in range(<Py_ssize_t>n_pos):
            if j == 0:
                cur = _get(buf, &pos)
            else:
                cur += _get(buf, &pos)
            positions.append(cur)
        entries.append((page, positions))
    return entries


def intersect_sorted(list a, list b):
    """Intersection of two strictly increasing int lists."""
    cdef Py_ssize_t i = 0, j = 0, la = len(a), lb = len(b)
    cdef list out = []
    cdef long long x, y
    while i < la and j < lb:
        x = a[i]
        y = b[j]
        if x == y:
            out.append(a[i])
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out
