"""Compare the numba kernel against the pure-numpy fallback on name pairs.

Usage: python benchmarks/bench_editdist.py [n_pairs]

Entity resolution compares every pair of labels, so the Levenshtein kernel is
the package's only hot loop.  This script times both implementations on the
same synthetic corpus and reports the speedup.  Set UKG_PURE_NUMPY=1 before
importing the package to force the numpy path at runtime.
"""

import random
import string
import sys
import time

from ukgfuse import editdist
from ukgfuse.editdist import _codes, _levenshtein_numpy


def random_name(rng: random.Random) -> str:
    parts = []
    for _ in range(rng.randint(1, 3)):
        length = rng.randint(3, 12)
        parts.append("".join(rng.choice(string.ascii_lowercase) for _ in range(length)))
    return " ".join(parts)


def time_kernel(fn, pairs) -> tuple[float, int]:
    start = time.perf_counter()
    checksum = 0
    for a, b in pairs:
        checksum += fn(a, b)
    return time.perf_counter() - start, checksum


def main() -> int:
    n_pairs = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
    rng = random.Random(1)
    names = [random_name(rng) for _ in range(500)]
    pairs = [(rng.choice(names), rng.choice(names)) for _ in range(n_pairs)]
    coded = [(_codes(a), _codes(b)) for a, b in pairs]

    def numpy_kernel(a, b):
        return _levenshtein_numpy(a, b)

    print(f"{n_pairs} label pairs, mean length "
          f"{sum(len(n) for n in names) / len(names):.1f}")

    np_time, np_sum = time_kernel(numpy_kernel, coded)
    print(f"pure numpy : {np_time:8.3f}s  ({n_pairs / np_time:10.0f} pairs/s)")

    if editdist.backend() == "numba":
        jit = editdist._levenshtein_jit
        jit(*coded[0])  # compile outside the timed region
        jit_time, jit_sum = time_kernel(lambda a, b: jit(a, b), coded)
        assert jit_sum == np_sum, "kernels disagree"
        print(f"numba jit  : {jit_time:8.3f}s  ({n_pairs / jit_time:10.0f} pairs/s)")
        print(f"speedup    : {np_time / jit_time:8.1f}x")
    else:
        print("numba kernel inactive (UKG_PURE_NUMPY set or numba unavailable)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
