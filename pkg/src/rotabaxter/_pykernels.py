"""Pure-Python versions of the integer kernels (fallback for ``_ckernels``).

Both backends see the same integer data.  Structure constants are scaled
to integers and stored in CSR form keyed by basis pair ``a * d + b``; an
operator matrix ``M`` is an integer matrix with ``R = M / dr``; the weight
is ``p / q``.  The Rota-Baxter identity on a basis pair ``(i, j)`` then
reads ``q * T1 == sum_k M[l][k] * s_k`` for each row ``l``, where ``T1`` is
the product of two columns and ``s`` collects the argument of the outer
application of ``R``.
"""

from __future__ import annotations


def pair_ok(d, ptr, ks, cs, M, p, q, dr, i, j):
    t1 = [0] * d
    col_i = [(a, M[a][i]) for a in range(d) if M[a][i]]
    col_j = [(b, M[b][j]) for b in range(d) if M[b][j]]
    for a, x in col_i:
        for b, y in col_j:
            base = a * d + b
            xy = x * y
            for idx in range(ptr[base], ptr[base + 1]):
                t1[ks[idx]] += xy * cs[idx]
    s = [0] * d
    for a, x in col_i:
        base = a * d + j
        for idx in range(ptr[base], ptr[base + 1]):
            s[ks[idx]] += q * x * cs[idx]
    for b, y in col_j:
        base = i * d + b
        for idx in range(ptr[base], ptr[base + 1]):
            s[ks[idx]] += q * y * cs[idx]
    if p:
        base = i * d + j
        pd = p * dr
        for idx in range(ptr[base], ptr[base + 1]):
            s[ks[idx]] += pd * cs[idx]
    support = [(k, v) for k, v in enumerate(s) if v]
    for l in range(d):
        row = M[l]
        r = 0
        for k, v in support:
            if row[k]:
                r += row[k] * v
        if q * t1[l] != r:
            return False
    return True


def rb_holds(d, ptr, ks, cs, M, p, q, dr):
    M = [list(r) for r in M]
    for i in range(d):
        for j in range(d):
            if not pair_ok(d, ptr, ks, cs, M, p, q, dr, i, j):
                return False
    return True


def grid_search(d, ptr, ks, cs, free_rows, values, p, q, dr, level_ptr, pairs, limit):
    """Column-by-column backtracking over grid assignments.

    ``free_rows[t]`` lists the rows of column ``t`` that may be nonzero,
    ``values`` are the scaled grid values in ascending order, and the pairs
    in ``pairs[level_ptr[t]:level_ptr[t + 1]]`` are checked as soon as
    column ``t`` is filled.  Returns the grid-index encodings of all
    solutions in lexicographic order, at most ``limit`` of them.
    """
    M = [[0] * d for _ in range(d)]
    nv = len(values)
    found = []

    def fill(t, prefix):
        if len(found) >= limit:
            return
        if t == d:
            found.append(tuple(prefix))
            return
        rows = free_rows[t]
        digits = [0] * len(rows)
        while True:
            for r, g in zip(rows, digits):
                M[r][t] = values[g]
            ok = True
            for n in range(level_ptr[t], level_ptr[t + 1]):
                i, j = pairs[2 * n], pairs[2 * n + 1]
                if not pair_ok(d, ptr, ks, cs, M, p, q, dr, i, j):
                    ok = False
                    break
            if ok:
                fill(t + 1, prefix + digits)
            pos = len(rows) - 1
            while pos >= 0 and digits[pos] == nv - 1:
                digits[pos] = 0
                pos -= 1
            if pos < 0:
                break
            digits[pos] += 1
        for r in rows:
            M[r][t] = 0

    fill(0, [])
    return found
