"""Exact rational scalars, dense matrices over Q and combinatorial numbers.

Everything here works on :class:`fractions.Fraction`; nothing rounds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "RatMatrix",
    "Polynomial",
    "mat_reduce",
    "solve",
    "det",
    "char_poly",
    "rational_roots",
    "stirling",
    "bernoulli",
    "binomial",
    "gen_vandermonde",
    "Span",
]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (surrounding whitespace allowed)."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(value) -> str:
    """Canonical ASCII form: ``"p/q"`` in lowest terms, ``"p"`` when q = 1."""
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class RatMatrix:
    """Immutable dense matrix with :class:`Fraction` entries, stored row-major."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_rational(x) for x in row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        else:
            width = cols or 0
        self.rows = len(rows)
        self.cols = width
        self._e = rows

    @classmethod
    def _raw(cls, rows: tuple, cols: int) -> "RatMatrix":
        m = object.__new__(cls)
        m.rows = len(rows)
        m.cols = cols
        m._e = rows
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        one, z = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RatMatrix":
        columns = [tuple(as_rational(x) for x in c) for c in columns]
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls._raw(tuple(zip(*columns)), len(columns))

    @classmethod
    def diagonal(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        z = Fraction(0)
        return cls._raw(
            tuple(tuple(as_rational(values[i]) if i == j else z for j in range(n)) for i in range(n)), n
        )

    # -- access ---------------------------------------------------------
    @property
    def entries(self) -> tuple:
        return self._e

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def columns(self) -> list[tuple]:
        return [tuple(c) for c in zip(*self._e)] if self.rows else [() for _ in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def __iter__(self):
        return iter(self._e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._e))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._e)
        return f"RatMatrix([{body}])"

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.cols
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.cols
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(-a for a in r) for r in self._e), self.cols)

    def scale(self, c) -> "RatMatrix":
        c = as_rational(c)
        return RatMatrix._raw(tuple(tuple(c * a for a in r) for r in self._e), self.cols)

    def __rmul__(self, c) -> "RatMatrix":
        return self.scale(c)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        out = []
        for r in self._e:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), Fraction(0)) for c in ocols))
        return RatMatrix._raw(tuple(out), other.cols)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product M·v."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        nz = [(k, as_rational(v)) for k, v in enumerate(vec) if v]
        return tuple(sum((r[k] * v for k, v in nz), Fraction(0)) for r in self._e)

    def transpose(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(zip(*self._e)) if self.rows else (), self.rows)

    T = property(transpose)

    def __pow__(self, n: int) -> "RatMatrix":
        if not self.is_square or n < 0:
            raise ValueError("power needs a square matrix and n >= 0")
        result = RatMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._e)

    def trace(self) -> Fraction:
        return sum((self._e[i][i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def rank(self) -> int:
        return mat_reduce(self)[0]

    def det(self) -> Fraction:
        return det(self)

    def inverse(self) -> "RatMatrix":
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._e)]
        rref, pivots = _rref(aug, limit=n)
        if len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix._raw(tuple(tuple(r[n:]) for r in rref[:n]), n)

    def _same_shape(self, other: "RatMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


def _rref(rows: list[list[Fraction]], limit: int | None = None):
    """In-place reduced row echelon form; pivots searched in the first ``limit`` columns."""
    m = len(rows)
    if m == 0:
        return rows, []
    ncols = len(rows[0]) if limit is None else limit
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        prow = rows[r]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def mat_reduce(m: RatMatrix) -> tuple[int, list[tuple], list[tuple]]:
    """Rank, a kernel basis and an image basis of ``m``, all exact.

    The kernel basis is the standard one read off the reduced row echelon form
    (one vector per free column); the image basis is the set of pivot columns of
    ``m`` itself.
    """
    rows, pivots = _rref([list(r) for r in m.entries])
    rank = len(pivots)
    pivset = set(pivots)
    kernel = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][free]
        kernel.append(tuple(v))
    image = [m.column(c) for c in pivots]
    return rank, kernel, image


def solve(m: RatMatrix, rhs: Sequence) -> tuple | None:
    """One solution x of m·x = rhs, or None when the system is inconsistent."""
    aug = [list(r) + [as_rational(b)] for r, b in zip(m.entries, rhs)]
    rows, pivots = _rref(aug, limit=m.cols)
    for i in range(len(pivots), len(rows)):
        if rows[i][-1]:
            return None
    x = [Fraction(0)] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][-1]
    return tuple(x)


def det(m: RatMatrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination on a cleared-denominator copy."""
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a: list[list[int]] = []
    for r in m.entries:
        d = math.lcm(*(x.denominator for x in r))
        scale /= d
        a.append([int(x * d) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] * scale


class Polynomial:
    """Univariate polynomial over Q, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def at_matrix(self, m: RatMatrix) -> RatMatrix:
        """Horner evaluation p(M)."""
        n = m.rows
        acc = RatMatrix.zeros(n)
        eye = RatMatrix.identity(n)
        for c in reversed(self.coeffs):
            acc = acc @ m + eye.scale(c)
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Polynomial(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{format_rational(c)}*x^{k}" if k else format_rational(c))
        return "Polynomial(" + " + ".join(terms) + ")"


def char_poly(m: RatMatrix) -> Polynomial:
    """Monic characteristic polynomial det(xI - M) by Faddeev-LeVerrier.

    The recursion divides by k = 1..n, which is exact over Q.
    """
    if not m.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = RatMatrix.zeros(n)
    eye = RatMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ (mk + eye.scale(coeffs[n - k + 1]))
        coeffs[n - k] = -mk.trace() / k
    return Polynomial(coeffs)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _deflate(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    """Synthetic division by (x - root); the caller guarantees exactness."""
    n = len(coeffs) - 1
    out = [Fraction(0)] * n
    out[n - 1] = coeffs[n]
    for k in range(n - 1, 0, -1):
        out[k - 1] = coeffs[k] + root * out[k]
    return out


def rational_roots(p: Polynomial) -> tuple[list[Fraction], bool]:
    """All rational roots with multiplicity, and whether p splits over Q."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    coeffs = list(p.coeffs)
    roots: list[Fraction] = []
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots.append(Fraction(0))
        coeffs.pop(0)
    while len(coeffs) > 1:
        den = math.lcm(*(c.denominator for c in coeffs))
        ints = [int(c * den) for c in coeffs]
        g = math.gcd(*ints)
        ints = [x // g for x in ints]
        found = None
        for q in _divisors(ints[-1]):
            for pnum in _divisors(ints[0]):
                for cand in (Fraction(pnum, q), Fraction(-pnum, q)):
                    if Polynomial(coeffs)(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        coeffs = _deflate(coeffs, found)
    return sorted(roots), len(roots) == p.degree


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def _stirling1(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return (n - 1) * _stirling1(n - 1, k) + _stirling1(n - 1, k - 1)


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def stirling(kind: str, n: int, k: int) -> int:
    """Unsigned Stirling numbers: ``kind`` is ``"first"`` (cycles) or ``"second"`` (partitions).

    Signs, where a formula needs them, are written explicitly as (-1)^(n-k).
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if kind == "first":
        return _stirling1(n, k)
    if kind == "second":
        return _stirling2(n, k)
    raise ValueError(f"unknown Stirling kind {kind!r}")


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    acc = sum((binomial(n + 1, j) * bernoulli(j) for j in range(n)), Fraction(0))
    return -acc / (n + 1)


def gen_vandermonde(points: Sequence[tuple]) -> tuple[Fraction, Fraction]:
    """Confluent Vandermonde determinant, computed two ways.

    ``points`` is a sequence of ``(value, multiplicity)``.  Column block i holds
    the successive X-derivatives of (1, X, X^2, ..., X^(t-1)) at X = value_i.
    Returns ``(det_by_elimination, det_by_product_formula)``.
    """
    if not points:
        raise ValueError("at least one point is required")
    pts = [(as_rational(x), int(m)) for x, m in points]
    if any(m < 1 for _, m in pts):
        raise ValueError("multiplicities must be positive")
    t = sum(m for _, m in pts)
    cols = []
    for x, m in pts:
        for c in range(m):
            col = []
            for r in range(t):
                if r < c:
                    col.append(Fraction(0))
                else:
                    col.append(Fraction(math.perm(r, c)) * x ** (r - c))
            cols.append(col)
    elim = det(RatMatrix.from_columns(cols))
    closed = Fraction(1)
    for _, m in pts:
        for j in range(1, m):
            closed *= math.factorial(j)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            (xi, mi), (xj, mj) = pts[i], pts[j]
            closed *= (xj - xi) ** (mi * mj)
    return elim, closed


class Span:
    """Linear span of coordinate vectors with exact membership and coordinates.

    Coordinates are reported with respect to the vectors as given, so those
    must be linearly independent for :meth:`coordinates` to be meaningful.
    """

    __slots__ = ("dim", "ambient", "vectors", "_rows", "_pivots")

    def __init__(self, vectors: Sequence[Sequence], ambient: int | None = None):
        vecs = [tuple(as_rational(x) for x in v) for v in vectors]
        if ambient is None:
            if not vecs:
                raise ValueError("ambient dimension needed for an empty span")
            ambient = len(vecs[0])
        if any(len(v) != ambient for v in vecs):
            raise ValueError("vector length mismatch")
        m = len(vecs)
        aug = [list(v) + [Fraction(int(i == j)) for j in range(m)] for i, v in enumerate(vecs)]
        rows, pivots = _rref(aug, limit=ambient)
        self.ambient = ambient
        self.vectors = vecs
        self.dim = len(pivots)
        self._rows = rows[: self.dim]
        self._pivots = pivots

    @property
    def independent(self) -> bool:
        return self.dim == len(self.vectors)

    def _combo(self, v: Sequence):
        v = [as_rational(x) for x in v]
        if len(v) != self.ambient:
            raise ValueError("vector length mismatch")
        weights = [v[p] for p in self._pivots]
        resid = list(v)
        for w, row in zip(weights, self._rows):
            if w:
                for k in range(self.ambient):
                    if row[k]:
                        resid[k] -= w * row[k]
        return weights, resid

    def __contains__(self, v: Sequence) -> bool:
        _, resid = self._combo(v)
        return not any(resid)

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients c with v = sum c_i vectors[i], or None if v is outside the span."""
        weights, resid = self._combo(v)
        if any(resid):
            return None
        m = len(self.vectors)
        out = [Fraction(0)] * m
        for w, row in zip(weights, self._rows):
            if w:
                for i in range(m):
                    out[i] += w * row[self.ambient + i]
        return tuple(out)

    def basis(self) -> list[tuple]:
        """Reduced echelon basis of the span."""
        return [tuple(r[: self.ambient]) for r in self._rows]
