"""Postings codec kernels: compiled Cython core with a pure-Python fallback.

Selection happens once at import. Set PAGESEARCH_PURE=1 to force the
fallback (used by the codec benchmark and by tests comparing the two).
"""

import os

if os.environ.get("PAGESEARCH_PURE") == "1":
    from pagesearch._kernels import fallback as kernel
else:
    try:
        from pagesearch._kernels import _varint as kernel  # type: ignore[attr-defined]
    except ImportError:
        from pagesearch._kernels import fallback as kernel

IMPLEMENTATION = kernel.IMPLEMENTATION
encode_deltas = kernel.encode_deltas
decode_deltas = kernel.decode_deltas
encode_postings = kernel.encode_postings
decode_postings = kernel.decode_postings
intersect_sorted = kernel.intersect_sorted
