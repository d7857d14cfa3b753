"""Levenshtein distance kernel used by entity resolution.

Pairwise label comparison is the one numeric inner loop that dominates when
resolving entities over larger corpora (O(n^2) pairs, O(len^2) per pair), so
the kernel is JIT-compiled with numba by default.  Set UKG_PURE_NUMPY=1 to
force the vectorized pure-numpy path instead (also used automatically when
numba is unavailable).  `benchmarks/bench_editdist.py` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("UKG_PURE_NUMPY", "") not in ("", "0")

if not _FORCE_NUMPY:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _FORCE_NUMPY = True


def _codes(s: str) -> np.ndarray:
    return np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)


def _levenshtein_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Row-wise DP; insertions resolved with a prefix-minimum scan."""
    n = b.size
    offsets = np.arange(n + 1, dtype=np.int64)
    prev = offsets.copy()
    row = np.empty(n + 1, dtype=np.int64)
    for i in range(1, a.size + 1):
        row[0] = i
        row[1:] = np.minimum(prev[:-1] + (b != a[i - 1]), prev[1:] + 1)
        # row[j] = min over k <= j of row[k] + (j - k)
        scan = np.minimum.accumulate(row - offsets)
        np.minimum(row, scan + offsets, out=row)
        prev, row = row, prev
    return int(prev[n])


if not _FORCE_NUMPY:

    @njit(cache=True)
    def _levenshtein_jit(a: np.ndarray, b: np.ndarray) -> int:  # pragma: no cover - jitted
        n = b.size
        prev = np.arange(n + 1)
        row = np.empty(n + 1, dtype=np.int64)
        for i in range(1, a.size + 1):
            row[0] = i
            for j in range(1, n + 1):
                cost = 0 if a[i - 1] == b[j - 1] else 1
                best = prev[j - 1] + cost
                if prev[j] + 1 < best:
                    best = prev[j] + 1
                if row[j - 1] + 1 < best:
                    best = row[j - 1] + 1
                row[j] = best
            prev, row = row, prev
        return prev[n]


def backend() -> str:
    """Which kernel is active: "numba" or "numpy"."""
    return "numpy" if _FORCE_NUMPY else "numba"


def edit_distance(a: str, b: str) -> int:
    """Plain Levenshtein distance between two strings."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    ca, cb = _codes(a), _codes(b)
    if _FORCE_NUMPY:
        return _levenshtein_numpy(ca, cb)
    return int(_levenshtein_jit(ca, cb))
