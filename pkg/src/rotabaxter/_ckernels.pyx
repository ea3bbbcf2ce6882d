# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the integer kernels; see ``_pykernels`` for the data layout."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef bint _pair_ok(int d, const int64_t* ptr, const int64_t* ks, const int64_t* cs,
                   const int64_t* M, int64_t p, int64_t q, int64_t dr,
                   int i, int j, int64_t* t1, int64_t* s) noexcept nogil:
    cdef int a, b, k, l
    cdef int64_t x, y, xy, idx, base, r, v
    for k in range(d):
        t1[k] = 0
        s[k] = 0
    for a in range(d):
        x = M[a * d + i]
        if x == 0:
            continue
        for b in range(d):
            y = M[b * d + j]
            if y == 0:
                continue
            base = a * d + b
            xy = x * y
            for idx in range(ptr[base], ptr[base + 1]):
                t1[ks[idx]] += xy * cs[idx]
        base = a * d + j
        for idx in range(ptr[base], ptr[base + 1]):
            s[ks[idx]] += q * x * cs[idx]
    for b in range(d):
        y = M[b * d + j]
        if y == 0:
            continue
        base = i * d + b
        for idx in range(ptr[base], ptr[base + 1]):
            s[ks[idx]] += q * y * cs[idx]
    if p != 0:
        base = i * d + j
        for idx in range(ptr[base], ptr[base + 1]):
            s[ks[idx]] += p * dr * cs[idx]
    for l in range(d):
        r = 0
        for k in range(d):
            v = s[k]
            if v != 0:
                r += M[l * d + k] * v
        if q * t1[l] != r:
            return False
    return True


def rb_holds(int d, ptr, ks, cs, M, int64_t p, int64_t q, int64_t dr):
    cdef int64_t[::1] ptr_v = np.ascontiguousarray(ptr, dtype=np.int64)
    cdef int64_t[::1] ks_v = np.ascontiguousarray(ks, dtype=np.int64)
    cdef int64_t[::1] cs_v = np.ascontiguousarray(cs, dtype=np.int64)
    cdef int64_t[::1] m_v = np.ascontiguousarray(M, dtype=np.int64).reshape(-1)
    cdef int64_t[::1] t1 = np.zeros(d, dtype=np.int64)
    cdef int64_t[::1] s = np.zeros(d, dtype=np.int64)
    cdef const int64_t* ks_p = &ks_v[0] if ks_v.shape[0] else NULL
    cdef const int64_t* cs_p = &cs_v[0] if cs_v.shape[0] else NULL
    cdef int i, j
    cdef bint ok = True
    with nogil:
        for i in range(d):
            for j in range(d):
                if not _pair_ok(d, &ptr_v[0], ks_p, cs_p, &m_v[0], p, q, dr, i, j, &t1[0], &s[0]):
                    ok = False
                    break
            if not ok:
                break
    return ok


def grid_search(int d, ptr, ks, cs, free_rows, values, int64_t p, int64_t q, int64_t dr,
                level_ptr, pairs, long limit):
    cdef int64_t[::1] ptr_v = np.ascontiguousarray(ptr, dtype=np.int64)
    cdef int64_t[::1] ks_v = np.ascontiguousarray(ks, dtype=np.int64)
    cdef int64_t[::1] cs_v = np.ascontiguousarray(cs, dtype=np.int64)
    cdef int64_t[::1] vals = np.ascontiguousarray(values, dtype=np.int64)
    cdef int64_t[::1] lvl = np.ascontiguousarray(level_ptr, dtype=np.int64)
    cdef int64_t[::1] prs = np.ascontiguousarray(pairs, dtype=np.int64) if len(pairs) else np.zeros(1, dtype=np.int64)
    cdef int64_t[::1] M = np.zeros(d * d, dtype=np.int64)
    cdef int64_t[::1] t1 = np.zeros(d, dtype=np.int64)
    cdef int64_t[::1] s = np.zeros(d, dtype=np.int64)
    cdef const int64_t* ks_p = &ks_v[0] if ks_v.shape[0] else NULL
    cdef const int64_t* cs_p = &cs_v[0] if cs_v.shape[0] else NULL

    # flattened free-row table
    cdef list rows_py = [list(r) for r in free_rows]
    cdef int64_t[::1] frow_ptr = np.zeros(d + 1, dtype=np.int64)
    cdef int t
    for t in range(d):
        frow_ptr[t + 1] = frow_ptr[t] + len(rows_py[t])
    cdef int64_t total_free = frow_ptr[d]
    cdef int64_t[::1] frows = np.array([r for rr in rows_py for r in rr] or [0], dtype=np.int64)
    cdef int64_t[::1] digits = np.zeros(max(total_free, 1), dtype=np.int64)
    cdef int nv = vals.shape[0]

    found = []
    cdef int64_t n, pos, lo, hi, k
    cdef bint ok, descend
    t = 0
    # iterative depth-first search; digits[frow_ptr[t]:frow_ptr[t+1]] is column t's odometer
    for k in range(frow_ptr[0], frow_ptr[1]):
        digits[k] = 0
    while t >= 0:
        lo = frow_ptr[t]
        hi = frow_ptr[t + 1]
        for k in range(lo, hi):
            M[frows[k] * d + t] = vals[digits[k]]
        ok = True
        with nogil:
            for n in range(lvl[t], lvl[t + 1]):
                if not _pair_ok(d, &ptr_v[0], ks_p, cs_p, &M[0], p, q, dr,
                                <int>prs[2 * n], <int>prs[2 * n + 1], &t1[0], &s[0]):
                    ok = False
                    break
        descend = False
        if ok:
            if t == d - 1:
                found.append(tuple(digits[k] for k in range(total_free)))
                if len(found) >= limit:
                    break
            else:
                t += 1
                for k in range(frow_ptr[t], frow_ptr[t + 1]):
                    digits[k] = 0
                descend = True
        if descend:
            continue
        # advance the odometer, backtracking through exhausted columns
        while t >= 0:
            lo = frow_ptr[t]
            hi = frow_ptr[t + 1]
            pos = hi - 1
            while pos >= lo and digits[pos] == nv - 1:
                digits[pos] = 0
                pos -= 1
            if pos >= lo:
                digits[pos] += 1
                break
            for k in range(lo, hi):
                M[frows[k] * d + t] = 0
            t -= 1
    return found
