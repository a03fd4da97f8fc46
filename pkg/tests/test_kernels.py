import pytest
from hypothesis import given
from hypothesis import strategies as st

from pagesearch._kernels import fallback

try:
    from pagesearch._kernels import _varint
    IMPLS = [fallback, _varint]
except ImportError:
    IMPLS = [fallback]


increasing_lists = st.lists(st.integers(min_value=0, max_value=2**40),
                            unique=True).map(sorted)

postings_entries = st.lists(
    st.tuples(st.integers(min_value=0, max_value=2**32),
              st.lists(st.integers(min_value=0, max_value=2**32),
                       min_size=1, unique=True).map(sorted)),
    unique_by=lambda e: e[0],
).map(lambda es: sorted(es))


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.IMPLEMENTATION)
class TestCodec:
    def test_empty(self, impl):
        assert impl.encode_deltas([]) == b""
        assert impl.decode_deltas(b"") == []
        assert impl.decode_postings(impl.encode_postings([])) == []

    @given(values=increasing_lists)
    def test_deltas_roundtrip(self, impl, values):
        assert impl.decode_deltas(impl.encode_deltas(values)) == values

    @given(entries=postings_entries)
    def test_postings_roundtrip(self, impl, entries):
        assert impl.decode_postings(impl.encode_postings(entries)) == entries

    @given(a=increasing_lists, b=increasing_lists)
    def test_intersect(self, impl, a, b):
        assert impl.intersect_sorted(a, b) == sorted(set(a) & set(b))


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled kernel not built")
class TestImplementationsAgree:
    @given(values=increasing_lists)
    def test_deltas_bytes_identical(self, values):
        assert fallback.encode_deltas(values) == _varint.encode_deltas(values)

    @given(entries=postings_entries)
    def test_postings_bytes_identical(self, entries):
        assert fallback.encode_postings(entries) == _varint.encode_postings(entries)
