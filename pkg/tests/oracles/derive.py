"""Independent oracle for the frozen values in ``tests/frozen_values.py``.

Nothing here imports the package.  Matrix algebras are realized as sympy
matrices, sl2 as traceless 2 x 2 matrices, exterior products by sorting with
sign counting, and operator counts by vectorized brute force in numpy.

Run ``python tests/oracles/derive.py > tests/frozen_values.py`` to regenerate.
"""

import itertools
import pprint
import random
from fractions import Fraction

import numpy as np
import sympy as sp


def q(x):
    x = sp.Rational(x)
    return f"{x.p}/{x.q}" if x.q != 1 else str(x.p)


def unit(n, i, j):
    m = sp.zeros(n, n)
    m[i - 1, j - 1] = 1
    return m


def op_matrix(n, images):
    """Column k = coordinates of the image of the k-th matrix unit (row-major order)."""
    cols = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            img = images(i, j)
            cols.append([img[a, b] for a in range(n) for b in range(n)])
    return sp.Matrix(cols).T


def maxrb_images(n):
    def images(i, j):
        m = sp.zeros(n, n)
        if j == n:
            return m
        if i <= j:
            for k in range(n - j):
                m += unit(n, i + k, j + 1 + k)
        else:
            for k in range(j):
                m -= unit(n, i - 1 - k, j - k)
        return m
    return images


def rb_holds_matrix(n, R, lam):
    """Check the identity on all pairs of matrix units with R given as images."""
    basis = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for a in basis:
        for b in basis:
            x, y = unit(n, *a), unit(n, *b)
            lhs = R(x) * R(y)
            rhs = R(R(x) * y + x * R(y) + lam * x * y)
            if lhs != rhs:
                return False
    return True


def linear_from_images(n, images):
    def R(x):
        out = sp.zeros(n, n)
        for i in range(n):
            for j in range(n):
                if x[i, j] != 0:
                    out += x[i, j] * images(i + 1, j + 1)
        return out
    return R


def nil_index(M):
    P = sp.eye(M.shape[0])
    for k in range(1, M.shape[0] + 2):
        P = P * M
        if P.is_zero_matrix:
            return k
    return None


def maxrb_facts():
    out = {}
    for n in range(2, 7):
        M = op_matrix(n, maxrb_images(n))
        out[n] = nil_index(M)
    ok = all(rb_holds_matrix(n, linear_from_images(n, maxrb_images(n)), 0) for n in (2, 3, 4))
    return out, ok


def shift_tensor_operator(n):
    """P_r(x) = sum a x b for the skew shift tensor."""
    terms = []
    for i in range(1, n):
        for j in range(i, n):
            block = sum((unit(n, i + k, j + 1 + k) for k in range(n - j)), sp.zeros(n, n))
            terms += [(1, unit(n, j, i), block), (-1, block, unit(n, j, i))]

    def P(x):
        return sum((c * a * x * b for c, a, b in terms), sp.zeros(n, n))
    return P


def operator_cols(n, P):
    return op_matrix(n, lambda i, j: P(unit(n, i, j)))


def m4_kernel():
    images = {(2, 1): -unit(2, 1, 1), (1, 1): unit(2, 1, 2)}
    M = op_matrix(2, lambda i, j: images.get((i, j), sp.zeros(2, 2)))
    ker = [list(v) for v in M.nullspace()]
    return M.rank(), [[q(x) for x in v] for v in ker]


# -- sl2 as traceless matrices ---------------------------------------------------

E = sp.Matrix([[0, 1], [0, 0]])
F = sp.Matrix([[0, 0], [1, 0]])
H = sp.Matrix([[1, 0], [0, -1]])
SL2 = {"e": E, "f": F, "h": H}


def sl2_coords(x):
    # x = a e + b f + c h
    return {"e": x[0, 1], "f": x[1, 0], "h": x[0, 0]}


def ad(x):
    cols = []
    for name in ("e", "f", "h"):
        y = SL2[name]
        c = sl2_coords(x * y - y * x)
        cols.append([c["e"], c["f"], c["h"]])
    return sp.Matrix(cols).T


def killing_sl2():
    names = ("e", "f", "h")
    return [[q((ad(SL2[a]) * ad(SL2[b])).trace()) for b in names] for a in names]


def cybe_operator_images(terms):
    """R(x) = sum c K(a, x) b with K(x, y) = tr(ad x ad y)."""
    out = {}
    for name in ("e", "f", "h"):
        x = SL2[name]
        acc = sp.zeros(2, 2)
        for c, a, b in terms:
            acc += c * (ad(SL2[a]) * ad(x)).trace() * SL2[b]
        out[name] = {k: q(v) for k, v in sl2_coords(acc).items() if v != 0}
    return out


def sl2_weight(images):
    """Solve the identity for lambda on basis pairs; None if inconsistent."""
    lam = sp.Symbol("lam")

    def R(x):
        c = sl2_coords(x)
        acc = sp.zeros(2, 2)
        for name, coef in c.items():
            if coef != 0:
                img = images[name]
                acc += coef * sum((sp.Rational(v) * SL2[k] for k, v in img.items()), sp.zeros(2, 2))
        return acc

    eqs = []
    for a in SL2.values():
        for b in SL2.values():
            br = lambda u, v: u * v - v * u  # noqa: E731
            lhs = br(R(a), R(b))
            # R is linear, so R(lam [a, b]) = lam R([a, b])
            rhs = R(br(R(a), b) + br(a, R(b))) + lam * R(br(a, b))
            eqs += [e for e in (lhs - rhs) if e != 0]
    if not eqs:
        return "any"
    sol = sp.solve(eqs, lam, dict=True)
    return q(sol[0][lam]) if sol else None


# -- combinatorics ------------------------------------------------------------------

def stirling_tables(N=10):
    from sympy.functions.combinatorial.numbers import stirling
    first = [[int(stirling(n, k, kind=1, signed=False)) for k in range(N + 1)] for n in range(N + 1)]
    second = [[int(stirling(n, k, kind=2)) for k in range(N + 1)] for n in range(N + 1)]
    return first, second


def bernoulli_table(N=16):
    out = []
    for n in range(N + 1):
        b = sp.bernoulli(n)
        if n == 1:
            b = -sp.Rational(1, 2)  # fixed convention, independent of library default
        out.append(q(b))
    return out


def confluent_vandermonde(points):
    X = sp.Symbol("X")
    t = sum(m for _, m in points)
    row = sp.Matrix([[X ** r for r in range(t)]]).T
    cols = []
    for x, m in points:
        for c in range(m):
            cols.append(row.diff(X, c).subs(X, sp.Rational(x)))
    return q(sp.Matrix.hstack(*cols).det())


def vandermonde_instances():
    rng = random.Random(11)
    cases = [((1, 1), (2, 1), (3, 1)), ((0, 2), (1, 1)), ((5, 4),), ((Fraction(1, 2), 2), (-3, 3), (2, 2))]
    for _ in range(8):
        vals = rng.sample(range(-6, 7), rng.randint(1, 3))
        pts = tuple((Fraction(v, rng.randint(1, 3)), rng.randint(1, 3)) for v in vals)
        if len({p[0] for p in pts}) == len(pts):
            cases.append(pts)
    return [([(q(x), m) for x, m in pts], confluent_vandermonde(pts)) for pts in cases]


def char_polys():
    rng = random.Random(5)
    out = []
    for n in (2, 3, 4, 5):
        M = sp.Matrix(n, n, lambda i, j: sp.Rational(rng.randint(-4, 4), rng.randint(1, 3)))
        x = sp.Symbol("x")
        coeffs = sp.Poly(M.charpoly(x).as_expr(), x).all_coeffs()[::-1]
        out.append(([[q(v) for v in M.row(i)] for i in range(n)], [q(c) for c in coeffs], q(M.det()), M.rank()))
    return out


# -- brute-force operator counts --------------------------------------------------------

def count_field_sum(n, lam, grid=(-1, 0, 1)):
    """Count matrices R (columns = images) with R(x)R(y) = R(R(x)y + xR(y) + lam xy) on field_sum(n)."""
    vals = np.array(grid, dtype=np.int64)
    total = 0
    idx = np.array(list(itertools.product(range(len(vals)), repeat=n * n)), dtype=np.int64)
    Ms = vals[idx].reshape(-1, n, n)  # Ms[:, r, c]: coefficient of e_r in R(e_c)
    ok = np.ones(len(Ms), dtype=bool)
    for i in range(n):
        for j in range(n):
            Ri, Rj = Ms[:, :, i], Ms[:, :, j]
            lhs = Ri * Rj
            inner = np.zeros_like(Ri)
            inner[:, j] += Ri[:, j]
            inner[:, i] += Rj[:, i]
            if i == j:
                inner[:, i] += lam
            rhs = np.einsum("brc,bc->br", Ms, inner)
            ok &= np.all(lhs == rhs, axis=1)
    total = int(ok.sum())
    return total


def jordan_cube(ds):
    """Structure constants of F1 + V with v_i v_j = delta_ij d_i 1 (basis 1, v_1, ...)."""
    d = len(ds) + 1
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        c[0, i, i] = 1
        c[i, 0, i] = 1
    for i, di in enumerate(ds, start=1):
        c[i, i, 0] = di
    return c


def count_generic(cube, lam, grid=(-1, 0, 1), chunk=200000):
    d = cube.shape[0]
    vals = np.array(grid, dtype=np.int64)
    total = 0
    allidx = itertools.product(range(len(vals)), repeat=d * d)
    while True:
        block = list(itertools.islice(allidx, chunk))
        if not block:
            break
        Ms = vals[np.array(block, dtype=np.int64)].reshape(-1, d, d)
        ok = np.ones(len(Ms), dtype=bool)
        for i in range(d):
            for j in range(d):
                Ri, Rj = Ms[:, :, i], Ms[:, :, j]
                lhs = np.einsum("ba,bc,ack->bk", Ri, Rj, cube)
                inner = np.einsum("ba,ak->bk", Ri, cube[:, j, :]) + np.einsum("bc,ck->bk", Rj, cube[i, :, :])
                inner = inner + lam * cube[i, j, :][None, :]
                rhs = np.einsum("brc,bc->br", Ms, inner)
                ok &= np.all(lhs == rhs, axis=1)
        total += int(ok.sum())
    return total


# -- Grassmann by sign counting ------------------------------------------------------

def wedge(S, T):
    if set(S) & set(T):
        return 0, ()
    seq = list(S) + list(T)
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1) ** inv, tuple(sorted(seq))


def grassmann_square_and_cube():
    x = {(1,): 1, (2, 3): 1}

    def mul(u, v):
        out = {}
        for S, a in u.items():
            for T, b in v.items():
                s, U = wedge(S, T)
                if s:
                    out[U] = out.get(U, 0) + s * a * b
        return {k: v for k, v in out.items() if v}
    x2 = mul(x, x)
    x3 = mul(x2, x)
    return {"".join(map(str, k)): v for k, v in x2.items()}, x3


def transpose_conjugate_m1():
    """t R t for R = (M1) on matrix(2); images of the matrix units."""
    R = {(2, 1): unit(2, 1, 2)}
    out = {}
    for i in (1, 2):
        for j in (1, 2):
            img = R.get((j, i), sp.zeros(2, 2)).T  # t(R(t(e_ij)))
            if not img.is_zero_matrix:
                out[f"e{i}{j}"] = {f"e{a + 1}{b + 1}": q(img[a, b]) for a in range(2) for b in range(2) if img[a, b] != 0}
    return out


def main():
    idx, maxrb_ok = maxrb_facts()
    shift_equal = {}
    for n in (2, 3, 4):
        P = operator_cols(n, shift_tensor_operator(n))
        shift_equal[n] = P == op_matrix(n, maxrb_images(n))
    first, second = stirling_tables()
    ex5 = [(1, "e", "h"), (-1, "h", "e")]
    ex6 = {}
    for alpha in (0, 1, 2):
        terms = [(alpha, "h", "e"), (-alpha, "e", "h"), (sp.Rational(1, 4), "h", "h"), (1, "e", "f")]
        imgs = cybe_operator_images(terms)
        ex6[alpha] = (imgs, sl2_weight(imgs))
    ex5_imgs = cybe_operator_images(ex5)
    sq, cube = grassmann_square_and_cube()
    values = {
        "MAXRB_INDEX": idx,
        "MAXRB_IDENTITY_HOLDS_N2_TO_4": maxrb_ok,
        "SHIFT_TENSOR_GIVES_MAXRB": shift_equal,
        "M4_RANK_AND_KERNEL": m4_kernel(),
        "KILLING_SL2_EFH": killing_sl2(),
        "EXAMPLE5_IMAGES": ex5_imgs,
        "EXAMPLE5_WEIGHT": sl2_weight(ex5_imgs),
        "EXAMPLE6": ex6,
        "STIRLING_FIRST_UNSIGNED": first,
        "STIRLING_SECOND": second,
        "BERNOULLI": bernoulli_table(),
        "VANDERMONDE": vandermonde_instances(),
        "CHAR_POLYS": char_polys(),
        "FIELD_SUM_COUNTS": {(n, lam): count_field_sum(n, lam) for n in (1, 2, 3) for lam in (0, 1)},
        "JORDAN_1_M1_W0_COUNT": count_generic(jordan_cube([1, -1]), 0),
        "GR3_SQUARE_CUBE": (sq, cube),
        "M1_TRANSPOSE_CONJUGATE": transpose_conjugate_m1(),
        "POWER_SUMS": {(n, m): sum(j ** n for j in range(1, m + 1)) for n in range(1, 9) for m in range(0, 21)},
    }
    print('"""Values derived by tests/oracles/derive.py; do not edit by hand."""')
    print()
    for k, v in values.items():
        print(f"{k} = {pprint.pformat(v, width=110, compact=True)}")
        print()


if __name__ == "__main__":
    main()
