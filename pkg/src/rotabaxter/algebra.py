"""Finite-dimensional algebras given by structure constants.

An :class:`Algebra` stores ``b_i * b_j = sum_k c[i][j][k] b_k`` sparsely, one
dict per basis pair.  Elements are coordinate tuples bound to their algebra.
"""

from __future__ import annotations

import itertools
import random
import re
import threading
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import RatMatrix, Span, as_rational, bernoulli, binomial, format_rational, solve

__all__ = [
    "Algebra",
    "Element",
    "LinearOperator",
    "PreconditionError",
    "FLAG_NAMES",
    "multiply",
    "power",
    "build_algebra",
    "parse_algebra_spec",
    "matrix_algebra",
    "grassmann",
    "field_sum",
    "sl2",
    "jordan_bilinear",
    "kaplansky_k3",
    "split_octonions",
    "truncated_poly",
    "octonion_product",
    "octonion_norm",
    "prelie_s2",
    "prelie_simple",
    "raw_algebra",
    "plus_minus",
    "direct_sum",
    "check_identities",
    "find_unit",
    "is_subalgebra",
    "induced_algebra",
    "is_automorphism",
    "killing_form",
    "nilpotency_data",
    "faulhaber",
    "power_associative_sample",
    "jordan_identity_sample",
]

FLAG_NAMES = (
    "associative",
    "commutative",
    "anticommutative",
    "jacobi",
    "alternative_linearized",
    "jordan_linearized",
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PreconditionError(ValueError):
    """Input violates a documented precondition; the message names the condition."""


# -- sparse vector helpers ---------------------------------------------------

def _axpy(acc: dict, coef: Fraction, vec: Mapping[int, Fraction]) -> None:
    for k, v in vec.items():
        s = acc.get(k, _ZERO) + coef * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def _sparse(coords: Sequence[Fraction]) -> dict:
    return {i: c for i, c in enumerate(coords) if c}


class Algebra:
    """Structure-constant algebra.

    ``table`` maps ``(i, j)`` to a dict ``{k: c_ijk}`` of nonzero constants.
    Use the constructors in this module or :meth:`from_cube` rather than
    building tables by hand.
    """

    def __init__(
        self,
        dim: int,
        table: Mapping[tuple[int, int], Mapping[int, object]],
        basis_names: Sequence[str] | None = None,
        unit: Sequence | None = None,
        name: str = "raw",
        meta: Mapping | None = None,
        detect_unit: bool = False,
    ):
        if dim < 1:
            raise PreconditionError("algebra dimension must be at least 1")
        self.dim = dim
        names = list(basis_names) if basis_names is not None else [f"b{i}" for i in range(dim)]
        if len(names) != dim or len(set(names)) != dim:
            raise PreconditionError("basis names must be distinct and match the dimension")
        self.basis_names = tuple(names)
        self._index = {n: i for i, n in enumerate(names)}
        tab: dict = {}
        for (i, j), vec in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise PreconditionError(f"basis pair {(i, j)} out of range")
            clean = {}
            for k, v in vec.items():
                if not 0 <= k < dim:
                    raise PreconditionError(f"basis index {k} out of range")
                v = as_rational(v)
                if v:
                    clean[k] = v
            if clean:
                tab[(i, j)] = clean
        self._table = tab
        self.name = name
        self.meta = dict(meta or {})
        self._flags: dict[str, bool] = {}
        self._lock = threading.Lock()
        self._unit_known = False
        self._unit: Element | None = None
        if unit is not None:
            u = self.element(unit)
            if not self._is_unit(u):
                raise PreconditionError("declared unit does not act as identity")
            self._unit, self._unit_known = u, True
        elif detect_unit:
            self._unit, self._unit_known = find_unit(self), True

    # -- construction helpers ----------------------------------------------
    @classmethod
    def from_cube(cls, cube: Sequence, **kw) -> "Algebra":
        """Build from a dense ``dim x dim x dim`` nested sequence."""
        d = len(cube)
        table = {}
        for i in range(d):
            if len(cube[i]) != d:
                raise PreconditionError("structure cube must be dim x dim x dim")
            for j in range(d):
                if len(cube[i][j]) != d:
                    raise PreconditionError("structure cube must be dim x dim x dim")
                table[(i, j)] = {k: as_rational(v) for k, v in enumerate(cube[i][j]) if v}
        return cls(d, table, **kw)

    def cube(self) -> list[list[list[Fraction]]]:
        d = self.dim
        out = [[[_ZERO] * d for _ in range(d)] for _ in range(d)]
        for (i, j), vec in self._table.items():
            for k, v in vec.items():
                out[i][j][k] = v
        return out

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self._table.get((i, j), {}).get(k, _ZERO)

    def basis_product(self, i: int, j: int) -> dict:
        """Sparse coordinates of ``b_i * b_j`` (do not mutate)."""
        return self._table.get((i, j), {})

    # -- elements ----------------------------------------------------------
    def element(self, coords) -> "Element":
        if isinstance(coords, Element):
            if coords.algebra is not self and coords.algebra.dim != self.dim:
                raise PreconditionError("element belongs to an algebra of another dimension")
            return Element(self, coords.coords)
        if isinstance(coords, Mapping):
            vec = [_ZERO] * self.dim
            for k, v in coords.items():
                vec[self.index(k) if isinstance(k, str) else k] += as_rational(v)
            return Element(self, tuple(vec))
        coords = tuple(as_rational(x) for x in coords)
        if len(coords) != self.dim:
            raise PreconditionError(f"expected {self.dim} coordinates, got {len(coords)}")
        return Element(self, coords)

    def _sparse_element(self, vec: Mapping[int, Fraction]) -> "Element":
        coords = [_ZERO] * self.dim
        for k, v in vec.items():
            coords[k] = v
        return Element(self, tuple(coords))

    def zero(self) -> "Element":
        return Element(self, (_ZERO,) * self.dim)

    def basis(self, i) -> "Element":
        if isinstance(i, str):
            i = self.index(i)
        return Element(self, tuple(_ONE if k == i else _ZERO for k in range(self.dim)))

    def basis_elements(self) -> list["Element"]:
        return [self.basis(i) for i in range(self.dim)]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PreconditionError(f"unknown basis element {name!r}") from None

    def __getitem__(self, name) -> "Element":
        return self.basis(name)

    _TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")

    def parse(self, text: str) -> "Element":
        """Parse an expression such as ``"e11 - 1/2*e12 + 3"``.

        A bare number denotes that multiple of the unit.  Coefficients are
        joined to basis names with ``*``.
        """
        text = text.strip()
        if not text:
            raise PreconditionError("empty element expression")
        vec: dict = {}
        pos = 0
        for m in self._TERM.finditer(text):
            if m.start() != pos:
                raise PreconditionError(f"cannot parse element {text!r}")
            pos = m.end()
            sign = -1 if m.group(1) == "-" else 1
            term = m.group(2).strip()
            coef, name = _ONE, term
            if term not in self._index:
                head, star, tail = term.partition("*")
                if star and tail.strip() in self._index:
                    coef, name = as_rational(head), tail.strip()
                else:
                    try:
                        coef = as_rational(term)
                    except ValueError:
                        raise PreconditionError(f"unknown term {term!r} in {text!r}") from None
                    if coef == 0:
                        continue
                    if self.unit is None:
                        raise PreconditionError("scalar term in an algebra without unit")
                    _axpy(vec, sign * coef, _sparse(self.unit.coords))
                    continue
            _axpy(vec, sign * coef, {self._index[name]: _ONE})
        if pos != len(text):
            raise PreconditionError(f"cannot parse element {text!r}")
        return self._sparse_element(vec)

    # -- products ------------------------------------------------------------
    def _mul_sparse(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict:
        acc: dict = {}
        table = self._table
        for i, a in x.items():
            for j, b in y.items():
                vec = table.get((i, j))
                if vec:
                    _axpy(acc, a * b, vec)
        return acc

    def mul(self, x: "Element", y: "Element") -> "Element":
        return multiply(self, x, y)

    # -- unit and flags ------------------------------------------------------
    def _is_unit(self, u: "Element") -> bool:
        us = _sparse(u.coords)
        for i in range(self.dim):
            e = {i: _ONE}
            if self._mul_sparse(us, e) != e or self._mul_sparse(e, us) != e:
                return False
        return True

    @property
    def unit(self) -> "Element | None":
        if not self._unit_known:
            with self._lock:
                if not self._unit_known:
                    self._unit = find_unit(self)
                    self._unit_known = True
        return self._unit

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def flag(self, name: str) -> bool:
        if name not in FLAG_NAMES:
            raise KeyError(name)
        if name not in self._flags:
            value = _FLAG_CHECKS[name](self)
            with self._lock:
                self._flags.setdefault(name, value)
        return self._flags[name]

    @property
    def flags(self) -> dict[str, bool | None]:
        """Currently known flags; unchecked ones are ``None``."""
        return {n: self._flags.get(n) for n in FLAG_NAMES}

    def __repr__(self) -> str:
        return f"Algebra({self.name}, dim={self.dim})"

    # -- equality is structural ---------------------------------------------
    def same_structure(self, other: "Algebra") -> bool:
        return self.dim == other.dim and self._table == other._table


class Element:
    """Algebra element as an exact coordinate tuple."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: Algebra, coords: tuple):
        self.algebra = algebra
        self.coords = coords

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.algebra.dim != self.algebra.dim:
            raise PreconditionError("dimension mismatch between elements")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Element(self.algebra, tuple(-a for a in self.coords))

    def scale(self, c) -> "Element":
        c = as_rational(c)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self.algebra, self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int) -> "Element":
        return power(self.algebra, self, n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def support(self) -> dict:
        return _sparse(self.coords)

    def __repr__(self) -> str:
        names = self.algebra.basis_names
        parts = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = names[i] if mag == 1 else f"{format_rational(mag)}*{names[i]}"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = __repr__


class LinearOperator:
    """Linear map on an algebra; column ``j`` of ``matrix`` holds the image of ``b_j``."""

    __slots__ = ("algebra", "matrix")

    def __init__(self, algebra: Algebra, matrix):
        if not isinstance(matrix, RatMatrix):
            matrix = RatMatrix(matrix)
        if matrix.shape != (algebra.dim, algebra.dim):
            raise PreconditionError(
                f"operator matrix must be {algebra.dim}x{algebra.dim}, got {matrix.rows}x{matrix.cols}"
            )
        self.algebra = algebra
        self.matrix = matrix

    @classmethod
    def from_images(cls, algebra: Algebra, images: Sequence) -> "LinearOperator":
        cols = [algebra.element(v).coords for v in images]
        if len(cols) != algebra.dim:
            raise PreconditionError("need one image per basis element")
        return cls(algebra, RatMatrix.from_columns(cols))

    @classmethod
    def from_map(cls, algebra: Algebra, images: Mapping) -> "LinearOperator":
        """Images of selected basis elements (by index or name); the rest map to 0."""
        cols = [algebra.zero().coords for _ in range(algebra.dim)]
        for key, val in images.items():
            i = algebra.index(key) if isinstance(key, str) else key
            v = algebra.parse(val) if isinstance(val, str) else algebra.element(val)
            cols[i] = v.coords
        return cls(algebra, RatMatrix.from_columns(cols))

    @classmethod
    def identity(cls, algebra: Algebra) -> "LinearOperator":
        return cls(algebra, RatMatrix.identity(algebra.dim))

    @classmethod
    def zero(cls, algebra: Algebra) -> "LinearOperator":
        return cls(algebra, RatMatrix.zeros(algebra.dim))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def __call__(self, x: Element) -> Element:
        if isinstance(x, str):
            x = self.algebra.parse(x)
        return Element(self.algebra, self.matrix.apply(x.coords))

    def image(self, i) -> Element:
        if isinstance(i, str):
            i = self.algebra.index(i)
        return Element(self.algebra, self.matrix.column(i))

    def _wrap(self, m: RatMatrix) -> "LinearOperator":
        return LinearOperator(self.algebra, m)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return self._wrap(self.matrix + other.matrix)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return self._wrap(self.matrix - other.matrix)

    def __neg__(self) -> "LinearOperator":
        return self._wrap(-self.matrix)

    def scale(self, c) -> "LinearOperator":
        return self._wrap(self.matrix.scale(c))

    def __rmul__(self, c) -> "LinearOperator":
        return self.scale(c)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return self._wrap(self.matrix @ other.matrix)

    def __pow__(self, n: int) -> "LinearOperator":
        return self._wrap(self.matrix**n)

    def inverse(self) -> "LinearOperator":
        return self._wrap(self.matrix.inverse())

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def describe(self) -> dict[str, str]:
        """Nonzero images keyed by basis name, for display."""
        return {
            self.algebra.basis_names[j]: str(self.image(j))
            for j in range(self.dim)
            if any(self.matrix.column(j))
        }

    def __repr__(self) -> str:
        body = ", ".join(f"{k} -> {v}" for k, v in self.describe().items())
        return f"LinearOperator({body or '0'})"


# -- element arithmetic ------------------------------------------------------

def multiply(A: Algebra, x: Element, y: Element) -> Element:
    if len(x.coords) != A.dim or len(y.coords) != A.dim:
        raise PreconditionError("dimension mismatch")
    return A._sparse_element(A._mul_sparse(_sparse(x.coords), _sparse(y.coords)))


def power(A: Algebra, x: Element, n: int) -> Element:
    """Left-normed power ``x^n`` with ``x^(k+1) = x^k * x``."""
    if n < 1:
        raise PreconditionError("power needs n >= 1")
    xs = _sparse(x.coords)
    acc = dict(xs)
    for _ in range(n - 1):
        if not acc:
            break
        acc = A._mul_sparse(acc, xs)
    return A._sparse_element(acc)


# -- constructors ------------------------------------------------------------

def matrix_algebra(n: int) -> Algebra:
    """Full matrix algebra with basis ``e_ij`` in row-major order."""
    if n < 1:
        raise PreconditionError("matrix size must be >= 1")
    idx = lambda i, j: i * n + j  # noqa: E731
    table = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                table[(idx(i, j), idx(j, l))] = {idx(i, l): _ONE}
    names = [f"e{i + 1}{j + 1}" if n < 10 else f"e{i + 1}_{j + 1}" for i in range(n) for j in range(n)]
    unit = [_ONE if (k // n == k % n) else _ZERO for k in range(n * n)]
    return Algebra(n * n, table, names, unit=unit, name=f"matrix:{n}", meta={"matrix_n": n})


def _subset_name(s: tuple) -> str:
    if not s:
        return "1"
    sep = "" if all(i < 10 for i in s) else "_"
    return "e" + sep.join(str(i) for i in s)


def grassmann(n: int) -> Algebra:
    """Exterior algebra on ``n`` generators; basis subsets ordered by (size, lex)."""
    if n < 1:
        raise PreconditionError("grassmann needs n >= 1")
    subsets = [s for k in range(n + 1) for s in itertools.combinations(range(1, n + 1), k)]
    pos = {s: i for i, s in enumerate(subsets)}
    table = {}
    for a, S in enumerate(subsets):
        for b, T in enumerate(subsets):
            if set(S) & set(T):
                continue
            inversions = sum(1 for s in S for t in T if s > t)
            table[(a, b)] = {pos[tuple(sorted(S + T))]: Fraction((-1) ** inversions)}
    unit = [_ONE] + [_ZERO] * (len(subsets) - 1)
    return Algebra(
        len(subsets),
        table,
        [_subset_name(s) for s in subsets],
        unit=unit,
        name=f"grassmann:{n}",
        meta={"grassmann_n": n, "augmentation": list(range(1, len(subsets)))},
    )


def field_sum(n: int) -> Algebra:
    """Direct sum of ``n`` copies of the ground field, ``e_i e_j = delta_ij e_i``."""
    if n < 1:
        raise PreconditionError("field_sum needs n >= 1")
    table = {(i, i): {i: _ONE} for i in range(n)}
    return Algebra(n, table, [f"e{i + 1}" for i in range(n)], unit=[_ONE] * n, name=f"field_sum:{n}")


def sl2() -> Algebra:
    """Lie algebra with basis (e, f, h)."""
    e, f, h = 0, 1, 2
    table = {
        (e, f): {h: 1},
        (f, e): {h: -1},
        (h, e): {e: 2},
        (e, h): {e: -2},
        (h, f): {f: -2},
        (f, h): {f: 2},
    }
    return Algebra(3, table, ["e", "f", "h"], name="sl2", meta={"unital": False})


def jordan_bilinear(*d) -> Algebra:
    """Jordan algebra of a diagonal bilinear form: ``1`` plus ``e_i`` with ``e_i e_i = d_i``."""
    if len(d) == 1 and isinstance(d[0], (list, tuple)):
        d = tuple(d[0])
    if not d:
        raise PreconditionError("jordan_bilinear needs at least one form entry")
    ds = [as_rational(x) for x in d]
    if any(x == 0 for x in ds):
        raise PreconditionError("jordan_bilinear form entries must be nonzero")
    n = len(ds)
    table = {}
    for i in range(n + 1):
        table[(0, i)] = {i: _ONE}
        table[(i, 0)] = {i: _ONE}
    for i in range(1, n + 1):
        table[(i, i)] = {0: ds[i - 1]}
    unit = [_ONE] + [_ZERO] * n
    spec = "jordan_bilinear:" + ",".join(format_rational(x) for x in ds)
    return Algebra(
        n + 1,
        table,
        ["1"] + [f"e{i}" for i in range(1, n + 1)],
        unit=unit,
        name=spec,
        meta={"form": ds},
    )


def kaplansky_k3() -> Algebra:
    """Three-dimensional algebra on (e, x, y): e idempotent, x and y half-eigen, xy = -yx = e/2."""
    e, x, y = 0, 1, 2
    half = Fraction(1, 2)
    table = {
        (e, e): {e: 1},
        (e, x): {x: half},
        (x, e): {x: half},
        (e, y): {y: half},
        (y, e): {y: half},
        (x, y): {e: half},
        (y, x): {e: -half},
    }
    return Algebra(3, table, ["e", "x", "y"], name="kaplansky_k3", detect_unit=True)


def _m2_mul(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def _m2_bar(a):
    # adjugate: [[a22, -a12], [-a21, a11]]
    return (a[3], -a[1], -a[2], a[0])


def _m2_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def octonion_product(x: Sequence, y: Sequence) -> tuple:
    """Product of ``a1 + v b1`` and ``a2 + v b2`` given as 8-tuples (a entries, then b entries)."""
    a1, b1 = tuple(x[:4]), tuple(x[4:])
    a2, b2 = tuple(y[:4]), tuple(y[4:])
    a = _m2_add(_m2_mul(a1, a2), _m2_mul(b2, _m2_bar(b1)))
    b = _m2_add(_m2_mul(_m2_bar(a1), b2), _m2_mul(a2, b1))
    return a + b


def octonion_norm(x: Sequence) -> Fraction:
    a, b = x[:4], x[4:]
    return (a[0] * a[3] - a[1] * a[2]) - (b[0] * b[3] - b[1] * b[2])


def split_octonions() -> Algebra:
    """Split Cayley algebra as ``M_2 + v M_2`` with the doubling product."""
    table = {}
    for i in range(8):
        for j in range(8):
            x = [_ZERO] * 8
            y = [_ZERO] * 8
            x[i] = y[j] = _ONE
            table[(i, j)] = _sparse(octonion_product(x, y))
    names = ["e11", "e12", "e21", "e22", "ve11", "ve12", "ve21", "ve22"]
    unit = [_ONE, _ZERO, _ZERO, _ONE] + [_ZERO] * 4
    return Algebra(8, table, names, unit=unit, name="split_octonions")


def truncated_poly(*m) -> Algebra:
    """``F[x_1..x_k] / (x_i^{m_i})`` with monomial basis in product order of exponents."""
    if len(m) == 1 and isinstance(m[0], (list, tuple)):
        m = tuple(m[0])
    if not m or any(int(x) < 1 for x in m):
        raise PreconditionError("truncated_poly needs exponents m_i >= 1")
    m = tuple(int(x) for x in m)
    exps = list(itertools.product(*(range(x) for x in m)))
    pos = {a: i for i, a in enumerate(exps)}
    table = {}
    for i, a in enumerate(exps):
        for j, b in enumerate(exps):
            s = tuple(p + q for p, q in zip(a, b))
            if all(p < bound for p, bound in zip(s, m)):
                table[(i, j)] = {pos[s]: _ONE}

    def name(a):
        parts = []
        for v, p in enumerate(a, start=1):
            if p == 1:
                parts.append(f"x{v}")
            elif p > 1:
                parts.append(f"x{v}^{p}")
        return "".join(parts) or "1"

    unit = [_ONE] + [_ZERO] * (len(exps) - 1)
    return Algebra(
        len(exps),
        table,
        [name(a) for a in exps],
        unit=unit,
        name="truncated_poly:" + ",".join(map(str, m)),
        meta={"augmentation": list(range(1, len(exps))), "exponents": exps, "bounds": m},
    )


def prelie_s2() -> Algebra:
    """Three-dimensional pre-Lie algebra: e1e2 = e2e1 = e3, e3e1 = e1, e3e2 = -e2."""
    table = {(0, 1): {2: 1}, (1, 0): {2: 1}, (2, 0): {0: 1}, (2, 1): {1: -1}}
    return Algebra(3, table, ["e1", "e2", "e3"], name="prelie_s2", detect_unit=True)


def prelie_simple(n: int) -> Algebra:
    """Simple pre-Lie algebra: e_n e_n = 2e_n, e_n e_j = e_j, e_j e_j = e_n (j < n)."""
    if n < 2:
        raise PreconditionError("prelie_simple needs n >= 2")
    last = n - 1
    table = {(last, last): {last: 2}}
    for j in range(last):
        table[(last, j)] = {j: 1}
        table[(j, j)] = {last: 1}
    return Algebra(n, table, [f"e{i + 1}" for i in range(n)], name=f"prelie_simple:{n}", detect_unit=True)


def raw_algebra(cube: Sequence, basis_names: Sequence[str] | None = None, unit=None) -> Algebra:
    return Algebra.from_cube(cube, basis_names=basis_names, unit=unit, name="raw", detect_unit=unit is None)


_BUILDERS = {
    "matrix": (matrix_algebra, 1),
    "grassmann": (grassmann, 1),
    "field_sum": (field_sum, 1),
    "sl2": (sl2, 0),
    "jordan_bilinear": (jordan_bilinear, -1),
    "kaplansky_k3": (kaplansky_k3, 0),
    "split_octonions": (split_octonions, 0),
    "truncated_poly": (truncated_poly, -1),
    "prelie_s2": (prelie_s2, 0),
    "prelie_simple": (prelie_simple, 1),
}


def parse_algebra_spec(spec: str) -> tuple[str | None, str, list[str]]:
    """Split ``"plus:matrix:2"`` into (sign, kind, args)."""
    parts = spec.strip().split(":")
    sign = None
    if parts[0] in ("plus", "minus"):
        sign, parts = parts[0], parts[1:]
    if not parts or not parts[0]:
        raise PreconditionError(f"empty algebra spec {spec!r}")
    kind = parts[0]
    args = [a.strip() for a in ":".join(parts[1:]).split(",")] if len(parts) > 1 and parts[1] else []
    return sign, kind, args


def build_algebra(spec, *params) -> Algebra:
    """Build a named algebra.

    ``spec`` is either a kind with positional parameters, e.g.
    ``build_algebra("matrix", 2)``, or a compact string such as
    ``"matrix:2"``, ``"jordan_bilinear:1,1,-1"`` or ``"minus:matrix:2"``.
    The kind ``raw`` takes a structure cube.
    """
    sign = None
    if isinstance(spec, str) and not params:
        sign, kind, args = parse_algebra_spec(spec)
    else:
        kind, args = spec, list(params)
    if kind == "raw":
        if len(args) != 1:
            raise PreconditionError("raw needs exactly one structure cube")
        A = raw_algebra(args[0])
    else:
        if kind not in _BUILDERS:
            raise PreconditionError(f"unknown algebra kind {kind!r}")
        fn, arity = _BUILDERS[kind]
        if arity >= 0 and len(args) != arity:
            raise PreconditionError(f"{kind} takes {arity} parameter(s), got {len(args)}")
        try:
            if kind in ("jordan_bilinear",):
                conv = [as_rational(a) for a in args]
            else:
                conv = [int(a) for a in args]
        except (TypeError, ValueError) as exc:
            raise PreconditionError(f"bad parameters for {kind}: {args}") from exc
        A = fn(*conv)
    if sign:
        A = plus_minus(A, sign)
    return A


def plus_minus(A: Algebra, sign: str) -> Algebra:
    """``A^(+)`` with ``a o b = ab + ba`` or ``A^(-)`` with ``[a, b] = ab - ba``."""
    if sign not in ("plus", "minus"):
        raise PreconditionError("sign must be 'plus' or 'minus'")
    s = _ONE if sign == "plus" else -_ONE
    table = {}
    for i in range(A.dim):
        for j in range(A.dim):
            acc: dict = {}
            _axpy(acc, _ONE, A.basis_product(i, j))
            _axpy(acc, s, A.basis_product(j, i))
            if acc:
                table[(i, j)] = acc
    unit = None
    if sign == "plus" and A._unit_known and A._unit is not None:
        unit = A._unit.scale(Fraction(1, 2)).coords
    meta = dict(A.meta)
    meta["parent"] = A.name
    meta["sign"] = sign
    B = Algebra(A.dim, table, A.basis_names, unit=unit, name=f"{sign}:{A.name}", meta=meta)
    if sign == "minus":
        B._unit, B._unit_known = None, True
        B._flags["anticommutative"] = True
    return B


def direct_sum(A: Algebra, B: Algebra) -> Algebra:
    n = A.dim
    table = {}
    for (i, j), vec in A._table.items():
        table[(i, j)] = dict(vec)
    for (i, j), vec in B._table.items():
        table[(i + n, j + n)] = {k + n: v for k, v in vec.items()}
    names = list(A.basis_names)
    taken = set(names)
    for nm in B.basis_names:
        while nm in taken:
            nm += "'"
        names.append(nm)
        taken.add(nm)
    unit = None
    if A.unit is not None and B.unit is not None:
        unit = A.unit.coords + B.unit.coords
    meta = {"summands": (A.name, B.name), "split": n}
    if "matrix_n" in A.meta and "matrix_n" in B.meta:
        meta["matrix_blocks"] = (A.meta["matrix_n"], B.meta["matrix_n"])
    C = Algebra(n + B.dim, table, names, unit=unit, name=f"sum({A.name},{B.name})", meta=meta)
    if unit is None:
        C._unit, C._unit_known = None, True
    return C


# -- identity checks ---------------------------------------------------------

def _unit_vec(i: int) -> dict:
    return {i: _ONE}


def _assoc_sparse(A: Algebra, x: dict, y: dict, z: dict) -> dict:
    left = A._mul_sparse(A._mul_sparse(x, y), z)
    right = A._mul_sparse(x, A._mul_sparse(y, z))
    _axpy(left, -_ONE, right)
    return left


def _check_associative(A: Algebra) -> bool:
    d = A.dim
    for i in range(d):
        for j in range(d):
            ij = A.basis_product(i, j)
            for k in range(d):
                left = A._mul_sparse(ij, _unit_vec(k))
                right = A._mul_sparse(_unit_vec(i), A.basis_product(j, k))
                if left != right:
                    return False
    return True


def _check_commutative(A: Algebra) -> bool:
    return all(
        A.basis_product(i, j) == A.basis_product(j, i) for i in range(A.dim) for j in range(i + 1, A.dim)
    )


def _check_anticommutative(A: Algebra) -> bool:
    d = A.dim
    for i in range(d):
        if A.basis_product(i, i):
            return False
        for j in range(i + 1, d):
            acc = dict(A.basis_product(i, j))
            _axpy(acc, _ONE, A.basis_product(j, i))
            if acc:
                return False
    return True


def _check_jacobi(A: Algebra) -> bool:
    d = A.dim
    for i in range(d):
        for j in range(d):
            for k in range(d):
                acc: dict = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    _axpy(acc, _ONE, A._mul_sparse(A.basis_product(a, b), _unit_vec(c)))
                if acc:
                    return False
    return True


def _check_alternative(A: Algebra) -> bool:
    d = A.dim
    assoc = {}
    for i in range(d):
        for j in range(d):
            for k in range(d):
                assoc[(i, j, k)] = _assoc_sparse(A, _unit_vec(i), _unit_vec(j), _unit_vec(k))
    for (i, j, k), v in assoc.items():
        left = dict(v)
        _axpy(left, _ONE, assoc[(j, i, k)])
        if left:
            return False
        right = dict(v)
        _axpy(right, _ONE, assoc[(i, k, j)])
        if right:
            return False
    return True


def _check_jordan(A: Algebra) -> bool:
    # full linearization of (x^2 y) x = x^2 (y x) evaluated on basis tuples
    d = A.dim
    for xs in itertools.combinations_with_replacement(range(d), 3):
        for y in range(d):
            acc: dict = {}
            yv = _unit_vec(y)
            for p in set(itertools.permutations(xs)):
                mult = sum(1 for q in itertools.permutations(xs) if q == p)
                a, b, c = p
                ab = A.basis_product(a, b)
                if not ab:
                    continue
                _axpy(acc, Fraction(mult), A._mul_sparse(A._mul_sparse(ab, yv), _unit_vec(c)))
                _axpy(acc, Fraction(-mult), A._mul_sparse(ab, A.basis_product(y, c)))
            if acc:
                return False
    return True


_FLAG_CHECKS = {
    "associative": _check_associative,
    "commutative": _check_commutative,
    "anticommutative": _check_anticommutative,
    "jacobi": _check_jacobi,
    "alternative_linearized": _check_alternative,
    "jordan_linearized": _check_jordan,
}


def check_identities(A: Algebra) -> dict[str, bool]:
    """Decide every identity flag exhaustively on basis tuples."""
    return {name: A.flag(name) for name in FLAG_NAMES}


def find_unit(A: Algebra) -> Element | None:
    """Solve ``u b_i = b_i u = b_i`` for all i; a two-sided unit is unique when it exists."""
    d = A.dim
    rows, rhs = [], []
    for i in range(d):
        for k in range(d):
            rows.append([A.c(a, i, k) for a in range(d)])
            rhs.append(_ONE if k == i else _ZERO)
            rows.append([A.c(i, a, k) for a in range(d)])
            rhs.append(_ONE if k == i else _ZERO)
    sol = solve(RatMatrix(rows), rhs)
    if sol is None:
        return None
    u = A.element(sol)
    return u if A._is_unit(u) else None


def _coords_list(A: Algebra, basis: Sequence) -> list[tuple]:
    out = []
    for v in basis:
        if isinstance(v, str):
            v = A.parse(v)
        out.append(A.element(v).coords)
    return out


def _span(A: Algebra, basis: Sequence, what: str = "basis") -> Span:
    vecs = _coords_list(A, basis)
    sp = Span(vecs, ambient=A.dim)
    if not sp.independent:
        raise PreconditionError(f"{what} is linearly dependent")
    return sp


def is_subalgebra(A: Algebra, basis: Sequence) -> bool:
    sp = _span(A, basis)
    vecs = [_sparse(v) for v in sp.vectors]
    for x in vecs:
        for y in vecs:
            if A._sparse_element(A._mul_sparse(x, y)).coords not in sp:
                return False
    return True


def induced_algebra(A: Algebra, basis: Sequence, names: Sequence[str] | None = None) -> Algebra:
    """Structure constants of a subalgebra with respect to the given basis."""
    sp = _span(A, basis)
    vecs = [_sparse(v) for v in sp.vectors]
    table = {}
    for i, x in enumerate(vecs):
        for j, y in enumerate(vecs):
            coords = sp.coordinates(A._sparse_element(A._mul_sparse(x, y)).coords)
            if coords is None:
                raise PreconditionError("span is not closed under multiplication")
            table[(i, j)] = _sparse(coords)
    if names is None:
        names = [str(A.element(v)).replace(" ", "") for v in sp.vectors]
        if len(set(names)) != len(names):
            names = None
    return Algebra(len(vecs), table, names, name=f"sub({A.name})", detect_unit=True)


def is_automorphism(A: Algebra, psi, anti: bool = False) -> bool:
    """Check that ``psi`` is invertible and (anti)multiplicative on basis pairs."""
    m = psi.matrix if isinstance(psi, LinearOperator) else RatMatrix(psi) if not isinstance(psi, RatMatrix) else psi
    if m.shape != (A.dim, A.dim):
        raise PreconditionError("map size does not match the algebra")
    if m.det() == 0:
        return False
    cols = [_sparse(m.column(j)) for j in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs: dict = {}
            for k, v in A.basis_product(i, j).items():
                _axpy(lhs, v, cols[k])
            rhs = A._mul_sparse(cols[j], cols[i]) if anti else A._mul_sparse(cols[i], cols[j])
            if lhs != rhs:
                return False
    return True


def killing_form(L: Algebra) -> RatMatrix:
    """``K[i][j] = trace(ad b_i ad b_j)`` with ``ad x: y -> x y``."""
    if not L.flag("anticommutative"):
        raise PreconditionError("killing form needs an anticommutative algebra")
    d = L.dim
    # ad_i[k][l] = c[i][l][k]
    ad = []
    for i in range(d):
        ad.append({(k, l): v for l in range(d) for k, v in L.basis_product(i, l).items()})
    K = [[_ZERO] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            s = _ZERO
            for (k, l), v in ad[i].items():
                w = ad[j].get((l, k))
                if w:
                    s += v * w
            K[i][j] = K[j][i] = s
    return RatMatrix(K)


def nilpotency_data(A: Algebra, x: Element) -> tuple[bool, int | None]:
    """Least ``n <= dim + 1`` with ``x^n = 0`` (left-normed), if any."""
    xs = _sparse(x.coords)
    acc = dict(xs)
    for n in range(1, A.dim + 2):
        if not acc:
            return True, n
        acc = A._mul_sparse(acc, xs)
    return False, None


def faulhaber(A: Algebra, a: Element, n: int) -> Element:
    """Bernoulli expansion of the n-th power sum polynomial evaluated at ``a``.

    Meaningful when the subalgebra generated by ``a`` is power-associative;
    the constant term vanishes so no unit is needed.
    """
    if n < 1:
        raise PreconditionError("faulhaber needs n >= 1")
    acc = A.zero()
    for j in range(n + 1):
        coef = Fraction((-1) ** j * binomial(n + 1, j)) * bernoulli(j) / (n + 1)
        if coef:
            acc = acc + power(A, a, n + 1 - j).scale(coef)
    return acc


def _random_element(A: Algebra, rng: random.Random, span: int = 3) -> Element:
    return A.element([Fraction(rng.randint(-span, span), rng.randint(1, 2)) for _ in range(A.dim)])


def power_associative_sample(A: Algebra, samples: int = 25, seed: int = 0) -> bool:
    """Probabilistic power-associativity check up to degree 4 on random elements."""
    rng = random.Random(seed)
    for _ in range(samples):
        x = _random_element(A, rng)
        x2 = x * x
        if x2 * x != x * x2:
            return False
        x3 = x2 * x
        if not (x3 * x == x * x3 == x2 * x2):
            return False
    return True


def jordan_identity_sample(A: Algebra, samples: int = 25, seed: int = 0) -> bool:
    """The unlinearized identity ``(x^2 y) x = x^2 (y x)`` on random elements."""
    rng = random.Random(seed)
    for _ in range(samples):
        x = _random_element(A, rng)
        y = _random_element(A, rng)
        x2 = x * x
        if (x2 * y) * x != x2 * (y * x):
            return False
    return True
