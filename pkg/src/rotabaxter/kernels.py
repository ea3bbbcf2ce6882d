"""Backend selection and integer scaling for the hot loops.

The compiled module ``_ckernels`` is used when it imports and the data fit
in 64-bit integers; otherwise the pure-Python ``_pykernels`` run on
unbounded ints.  Setting ``ROTABAXTER_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Sequence

from . import _pykernels

_ckernels = None
if os.environ.get("ROTABAXTER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

_INT64_SAFE = 1 << 62


def _lcm_den(values) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(v).denominator)
    return den


class ScaledAlgebra:
    """Integer CSR copy of an algebra's structure constants."""

    __slots__ = ("dim", "ptr", "ks", "cs", "cmax", "table")

    def __init__(self, algebra):
        d = algebra.dim
        entries = []
        for a in range(d):
            for b in range(d):
                entries.append(sorted(algebra.basis_product(a, b).items()))
        dc = _lcm_den(v for row in entries for _, v in row)
        ptr, ks, cs = [0], [], []
        for row in entries:
            for k, v in row:
                ks.append(k)
                cs.append(int(v * dc))
            ptr.append(len(ks))
        self.dim = d
        self.ptr, self.ks, self.cs = ptr, ks, cs
        self.cmax = max((abs(c) for c in cs), default=0)
        self.table = algebra


def _scale_matrix(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    dr = _lcm_den(x for r in rows for x in r)
    return [[int(x * dr) for x in r] for r in rows], dr


def _fits(d: int, bmax: int, cmax: int, p: int, q: int, dr: int) -> bool:
    s_bound = q * 2 * d * bmax * cmax + abs(p) * dr * cmax
    bound = q * d * d * bmax * bmax * cmax + d * bmax * s_bound
    return bound < _INT64_SAFE


def _backend(use_python: bool | None, fits: bool):
    if use_python or _ckernels is None or not fits:
        return _pykernels
    return _ckernels


def rb_holds(sa: ScaledAlgebra, matrix_rows, weight, use_python: bool | None = None) -> bool:
    """Rota-Baxter identity on every basis pair for ``R`` with the given rows."""
    M, dr = _scale_matrix(matrix_rows)
    w = Fraction(weight)
    p, q = w.numerator, w.denominator
    bmax = max((abs(x) for r in M for x in r), default=0)
    mod = _backend(use_python, _fits(sa.dim, bmax, sa.cmax, p, q, dr))
    return bool(mod.rb_holds(sa.dim, sa.ptr, sa.ks, sa.cs, M, p, q, dr))


def pair_schedule(sa: ScaledAlgebra, free_rows: Sequence[Sequence[int]]) -> tuple[list[int], list[int]]:
    """Assign each basis pair to the first column after which it is decidable."""
    d = sa.dim
    ptr, ks = sa.ptr, sa.ks

    def targets(a, b):
        base = a * d + b
        return ks[ptr[base]:ptr[base + 1]]

    buckets: list[list[tuple[int, int]]] = [[] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            need = {i, j}
            for a in free_rows[i]:
                need.update(targets(a, j))
            for b in free_rows[j]:
                need.update(targets(i, b))
            need.update(targets(i, j))
            buckets[max(need)].append((i, j))
    level_ptr, pairs = [0], []
    for bucket in buckets:
        for i, j in bucket:
            pairs.extend((i, j))
        level_ptr.append(len(pairs) // 2)
    return level_ptr, pairs


def grid_search(sa: ScaledAlgebra, weight, grid, free_rows, limit: int, use_python: bool | None = None):
    """All grid-valued matrices (restricted to ``free_rows``) satisfying the identity.

    Returns ``(values, encodings)`` where ``values`` is the sorted grid and each
    encoding lists grid indices of the free entries column by column.
    """
    values = sorted(set(Fraction(g) for g in grid))
    dg = _lcm_den(values)
    scaled = [int(v * dg) for v in values]
    w = Fraction(weight)
    p, q = w.numerator, w.denominator
    level_ptr, pairs = pair_schedule(sa, free_rows)
    bmax = max((abs(v) for v in scaled), default=0)
    mod = _backend(use_python, _fits(sa.dim, bmax, sa.cmax, p, q, dg))
    found = mod.grid_search(
        sa.dim, sa.ptr, sa.ks, sa.cs, [list(r) for r in free_rows], scaled, p, q, dg, level_ptr, pairs, limit
    )
    return values, [tuple(int(x) for x in enc) for enc in found]
