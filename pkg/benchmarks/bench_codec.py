"""Benchmark the compiled varint kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_codec.py [--entries N] [--repeat R]
"""

import argparse
import random
import time

from pagesearch._kernels import fallback

try:
    from pagesearch._kernels import _varint
except ImportError:
    _varint = None


def make_postings(n_entries, seed=0):
    rng = random.Random(seed)
    entries = []
    page = 0
    for _ in range(n_entries):
        page += rng.randint(1, 50)
        positions = sorted(rng.sample(range(2000), rng.randint(1, 8)))
        entries.append((page, positions))
    return entries


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--entries", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    entries = make_postings(args.entries)
    impls = [("python", fallback)]
    if _varint is not None:
        impls.append(("cython", _varint))

    blobs = {}
    print(f"postings entries: {args.entries}, best of {args.repeat}")
    print(f"{'impl':<8} {'encode':>10} {'decode':>10} {'intersect':>10}")
    a = sorted(random.Random(1).sample(range(10_000_000), 200_000))
    b = sorted(random.Random(2).sample(range(10_000_000), 200_000))
    for name, impl in impls:
        enc = bench(lambda: impl.encode_postings(entries), args.repeat)
        blob = blobs.setdefault(name, impl.encode_postings(entries))
        dec = bench(lambda: impl.decode_postings(blob), args.repeat)
        inter = bench(lambda: impl.intersect_sorted(a, b), args.repeat)
        print(f"{name:<8} {enc * 1000:>8.1f}ms {dec * 1000:>8.1f}ms "
              f"{inter * 1000:>8.1f}ms")

    if _varint is not None:
        assert blobs["python"] == blobs["cython"], "codec outputs differ!"
        print("outputs byte-identical: ok")


if __name__ == "__main__":
    main()
