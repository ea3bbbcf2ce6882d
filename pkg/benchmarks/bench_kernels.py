"""Compare the compiled and pure-Python kernels on identity checks and grid search.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from rotabaxter import kernels
from rotabaxter.algebra import build_algebra, field_sum, matrix_algebra
from rotabaxter.rb import grid_search_rb, max_rb_mat, verify_rb


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    for n in (3, 4, 5):
        R = max_rb_mat(n)
        yield f"verify maxrb n={n}", lambda py, R=R: verify_rb(R.algebra, R, 0, use_python=py)
    yield "search field_sum:3 w=1", lambda py: grid_search_rb(field_sum(3), 1, [-1, 0, 1], use_python=py)
    yield "search matrix:2 w=0", lambda py: grid_search_rb(matrix_algebra(2), 0, [-1, 0, 1], budget=10**8, use_python=py)
    yield "search sl2 w=0", lambda py: grid_search_rb(build_algebra("sl2"), 0, [-1, 0, 1], use_python=py)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    compiled = kernels._ckernels is not None
    print(f"default backend: {kernels.BACKEND}")
    print(f"{'case':28s} {'python [s]':>12s} {'compiled [s]':>14s} {'speedup':>9s}")
    for label, fn in cases():
        py = best_of(args.repeat, lambda: fn(True))
        if compiled:
            cy = best_of(args.repeat, lambda: fn(False))
            print(f"{label:28s} {py:12.4f} {cy:14.4f} {py / cy:8.1f}x")
        else:
            print(f"{label:28s} {py:12.4f} {'n/a':>14s} {'':>9s}")


if __name__ == "__main__":
    main()
