"""Yang-Baxter tensors and their Rota-Baxter operators.

A tensor ``r = sum rho[u][v] b_u (x) b_v`` is stored as its coefficient grid.
Triple tensors are sparse dicts keyed by basis triples; every product in the
associative and classical equations is expanded through the structure
constants, so nothing leaves ``A (x) A (x) A``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import Algebra, LinearOperator, PreconditionError, _axpy, killing_form
from .exact import RatMatrix, as_rational, format_rational
from .rb import NotRotaBaxterError, RBOperator, as_operator, verify_rb

__all__ = [
    "Tensor2",
    "Tensor3",
    "flip",
    "tau",
    "is_skew",
    "aybe_products",
    "aybe_check",
    "aybe_operator",
    "aybe_to_rb",
    "rb_to_aybe",
    "cybe_brackets",
    "cybe_check",
    "invariance_check",
    "cybe_operator",
    "solve_weight",
    "cybe_to_rb",
    "trace_form",
    "is_skew_operator",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Tensor2:
    """Element of ``A (x) A`` as a dim x dim coefficient grid."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs):
        m = coeffs if isinstance(coeffs, RatMatrix) else RatMatrix(coeffs)
        if m.shape != (algebra.dim, algebra.dim):
            raise PreconditionError("tensor grid size does not match the algebra")
        self.algebra = algebra
        self.coeffs = m

    @classmethod
    def zero(cls, algebra: Algebra) -> "Tensor2":
        return cls(algebra, RatMatrix.zeros(algebra.dim))

    @classmethod
    def from_terms(cls, algebra: Algebra, terms: Iterable[tuple]) -> "Tensor2":
        """Sum of ``coef * left (x) right``; legs may be elements or parseable strings."""
        d = algebra.dim
        grid = [[_ZERO] * d for _ in range(d)]
        for coef, left, right in terms:
            c = as_rational(coef)
            x = algebra.parse(left) if isinstance(left, str) else algebra.element(left)
            y = algebra.parse(right) if isinstance(right, str) else algebra.element(right)
            for u, xu in enumerate(x.coords):
                if xu:
                    for v, yv in enumerate(y.coords):
                        if yv:
                            grid[u][v] += c * xu * yv
        return cls(algebra, grid)

    @classmethod
    def from_matrix_indices(cls, algebra: Algebra, entries: Mapping[tuple, object]) -> "Tensor2":
        """Matrix-algebra form ``{(i, j, k, l): s}`` meaning ``s * e_ij (x) e_kl`` (1-based)."""
        n = algebra.meta.get("matrix_n")
        if not n:
            raise PreconditionError("four-index form needs a matrix algebra")
        grid = [[_ZERO] * (n * n) for _ in range(n * n)]
        for (i, j, k, l), s in entries.items():
            if not all(1 <= t <= n for t in (i, j, k, l)):
                raise PreconditionError("matrix index out of range")
            grid[(i - 1) * n + j - 1][(k - 1) * n + l - 1] += as_rational(s)
        return cls(algebra, grid)

    def matrix_indices(self) -> dict[tuple, Fraction]:
        n = self.algebra.meta.get("matrix_n")
        if not n:
            raise PreconditionError("four-index form needs a matrix algebra")
        out = {}
        for u in range(n * n):
            for v in range(n * n):
                s = self.coeffs[u, v]
                if s:
                    out[(u // n + 1, u % n + 1, v // n + 1, v % n + 1)] = s
        return out

    def __add__(self, other: "Tensor2") -> "Tensor2":
        return Tensor2(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "Tensor2") -> "Tensor2":
        return Tensor2(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> "Tensor2":
        return Tensor2(self.algebra, -self.coeffs)

    def scale(self, c) -> "Tensor2":
        return Tensor2(self.algebra, self.coeffs.scale(c))

    def is_zero(self) -> bool:
        return self.coeffs.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor2):
            return NotImplemented
        return self.algebra.dim == other.algebra.dim and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def terms(self) -> list[tuple[Fraction, str, str]]:
        names = self.algebra.basis_names
        d = self.algebra.dim
        return [(self.coeffs[u, v], names[u], names[v]) for u in range(d) for v in range(d) if self.coeffs[u, v]]

    def __repr__(self) -> str:
        parts = []
        for c, a, b in self.terms():
            coef = "" if c == 1 else "-" if c == -1 else format_rational(c) + "*"
            parts.append(f"{coef}{a}(x){b}")
        return "Tensor2(" + (" + ".join(parts).replace("+ -", "- ") or "0") + ")"


class Tensor3:
    """Sparse element of ``A (x) A (x) A`` keyed by basis triples."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: Mapping[tuple, Fraction] | None = None):
        self.dim = dim
        self.coeffs = {k: as_rational(v) for k, v in (coeffs or {}).items() if v}

    def add_term(self, key: tuple, value: Fraction) -> None:
        s = self.coeffs.get(key, _ZERO) + value
        if s:
            self.coeffs[key] = s
        else:
            self.coeffs.pop(key, None)

    def __add__(self, other: "Tensor3") -> "Tensor3":
        out = Tensor3(self.dim, self.coeffs)
        for k, v in other.coeffs.items():
            out.add_term(k, v)
        return out

    def __neg__(self) -> "Tensor3":
        return Tensor3(self.dim, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return self + (-other)

    def scale(self, c) -> "Tensor3":
        c = as_rational(c)
        return Tensor3(self.dim, {k: c * v for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"Tensor3({len(self.coeffs)} terms)"


def flip(r: Tensor2) -> Tensor2:
    """``a (x) b -> b (x) a``."""
    return Tensor2(r.algebra, r.coeffs.transpose())


def tau(r: Tensor2) -> Tensor2:
    """Signed switch ``a (x) b -> -b (x) a``."""
    return Tensor2(r.algebra, -r.coeffs.transpose())


def is_skew(r: Tensor2) -> bool:
    """``r`` is skew when swapping the legs negates it (``r + flip(r) = 0``)."""
    return (r.coeffs + r.coeffs.transpose()).is_zero()


def _support(r: Tensor2) -> list[tuple[int, int, Fraction]]:
    d = r.algebra.dim
    return [(u, v, r.coeffs[u, v]) for u in range(d) for v in range(d) if r.coeffs[u, v]]


def aybe_products(A: Algebra, r: Tensor2) -> tuple[Tensor3, Tensor3, Tensor3]:
    """``(r13 r12, r12 r23, r23 r13)`` expanded in ``A (x) A (x) A``."""
    terms = _support(r)
    p1, p2, p3 = Tensor3(A.dim), Tensor3(A.dim), Tensor3(A.dim)
    for a, b, x in terms:
        for c, d, y in terms:
            xy = x * y
            # r13 r12: (b_a b_c) (x) b_d (x) b_b
            for k, v in A.basis_product(a, c).items():
                p1.add_term((k, d, b), xy * v)
            # r12 r23: b_a (x) (b_b b_c) (x) b_d
            for k, v in A.basis_product(b, c).items():
                p2.add_term((a, k, d), xy * v)
            # r23 r13: b_c (x) b_a (x) (b_b b_d)
            for k, v in A.basis_product(b, d).items():
                p3.add_term((c, a, k), xy * v)
    return p1, p2, p3


def _r13(A: Algebra, r: Tensor2) -> Tensor3:
    u = A.unit
    if u is None:
        raise PreconditionError("weighted equation needs a unital algebra")
    out = Tensor3(A.dim)
    for a, b, x in _support(r):
        for m, um in enumerate(u.coords):
            if um:
                out.add_term((a, m, b), x * um)
    return out


def aybe_check(A: Algebra, r: Tensor2, weight=0) -> bool:
    """``r13 r12 - r12 r23 + r23 r13 = weight * r13``."""
    if not A.flag("associative"):
        raise PreconditionError("associative Yang-Baxter equation needs an associative algebra")
    lam = as_rational(weight)
    p1, p2, p3 = aybe_products(A, r)
    lhs = p1 - p2 + p3
    if lam == 0:
        return lhs.is_zero()
    return lhs == _r13(A, r).scale(lam)


def aybe_operator(A: Algebra, r: Tensor2) -> LinearOperator:
    """``x -> sum rho[u][v] b_u x b_v``, applied with no solution check."""
    d = A.dim
    cols = []
    for j in range(d):
        acc: dict = {}
        for u, v, s in _support(r):
            for k, c1 in A.basis_product(u, j).items():
                for m, c2 in A.basis_product(k, v).items():
                    acc[m] = acc.get(m, _ZERO) + s * c1 * c2
        cols.append([acc.get(m, _ZERO) for m in range(d)])
    return LinearOperator(A, RatMatrix.from_columns(cols))


def aybe_to_rb(A: Algebra, r: Tensor2, weight=0) -> RBOperator:
    """Operator of a (weighted) associative Yang-Baxter solution.

    For a nonzero weight both sign conventions are tried, ``-weight`` first;
    the one that verifies is recorded in the ``weight_convention`` tag.
    """
    lam = as_rational(weight)
    if not aybe_check(A, r, lam):
        raise PreconditionError("tensor does not solve the associative Yang-Baxter equation")
    op = aybe_operator(A, r)
    if lam == 0:
        return RBOperator.checked(A, op, 0, construction="aybe")
    for w, label in ((-lam, "negated"), (lam, "same")):
        if verify_rb(A, op, w):
            return RBOperator.checked(A, op, w, construction="aybe", weight_convention=label)
    raise NotRotaBaxterError("operator of the weighted solution verifies at neither sign of the weight")


def rb_to_aybe(R) -> Tensor2:
    """Inverse of :func:`aybe_operator` on a matrix algebra.

    The coefficient of ``e_ij (x) e_kl`` is the coefficient of ``e_il`` in
    ``R(e_jk)``.
    """
    op = R.op if isinstance(R, RBOperator) else R
    A = op.algebra
    n = A.meta.get("matrix_n")
    if not n:
        raise PreconditionError("operator-to-tensor conversion needs a matrix algebra")
    m = op.matrix
    grid = [[_ZERO] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                col = j * n + k
                for l in range(n):
                    s = m[i * n + l, col]
                    if s:
                        grid[i * n + j][k * n + l] = s
    return Tensor2(A, grid)


def _require_lie(L: Algebra) -> None:
    if not (L.flag("anticommutative") and L.flag("jacobi")):
        raise PreconditionError("classical Yang-Baxter equation needs a Lie algebra")


def cybe_brackets(L: Algebra, r: Tensor2) -> tuple[Tensor3, Tensor3, Tensor3]:
    """``([r12, r13], [r12, r23], [r13, r23])`` expanded in ``L (x) L (x) L``."""
    terms = _support(r)
    p1, p2, p3 = Tensor3(L.dim), Tensor3(L.dim), Tensor3(L.dim)
    for a, b, x in terms:
        for c, d, y in terms:
            xy = x * y
            for k, v in L.basis_product(a, c).items():
                p1.add_term((k, b, d), xy * v)
            for k, v in L.basis_product(b, c).items():
                p2.add_term((a, k, d), xy * v)
            for k, v in L.basis_product(b, d).items():
                p3.add_term((a, c, k), xy * v)
    return p1, p2, p3


def cybe_check(L: Algebra, r: Tensor2) -> bool:
    _require_lie(L)
    p1, p2, p3 = cybe_brackets(L, r)
    return (p1 + p2 + p3).is_zero()


def invariance_check(L: Algebra, r: Tensor2) -> bool:
    """Is the symmetric part ``r + flip(r)`` annihilated by every ``[., b_j]``?"""
    _require_lie(L)
    t = r.coeffs + r.coeffs.transpose()
    d = L.dim
    for j in range(d):
        acc: dict = {}
        for u in range(d):
            for v in range(d):
                s = t[u, v]
                if not s:
                    continue
                for k, c in L.basis_product(u, j).items():
                    acc[(k, v)] = acc.get((k, v), _ZERO) + s * c
                for k, c in L.basis_product(v, j).items():
                    acc[(u, k)] = acc.get((u, k), _ZERO) + s * c
        if any(acc.values()):
            return False
    return True


def cybe_operator(L: Algebra, r: Tensor2) -> LinearOperator:
    """``x -> sum rho[u][v] K(b_u, x) b_v`` with the Killing form ``K``."""
    K = killing_form(L)
    d = L.dim
    cols = []
    for j in range(d):
        col = [_ZERO] * d
        for u, v, s in _support(r):
            k = K[u, j]
            if k:
                col[v] += s * k
        cols.append(col)
    return LinearOperator(L, RatMatrix.from_columns(cols))


def solve_weight(A: Algebra, R) -> Fraction | None:
    """The weight making ``R`` Rota-Baxter, 0 when every weight works, else None.

    For a fixed operator the identity is affine in the weight:
    ``R(x)R(y) - R(R(x)y + xR(y)) = weight * R(xy)``.
    """
    op = as_operator(A, R)
    cols = [{k: v for k, v in enumerate(op.matrix.column(j)) if v} for j in range(A.dim)]

    def apply(vec: Mapping[int, Fraction]) -> dict:
        acc: dict = {}
        for k, v in vec.items():
            _axpy(acc, v, cols[k])
        return acc

    lam = None
    pending = []
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = A._mul_sparse(cols[i], cols[j])
            arg = A._mul_sparse(cols[i], {j: _ONE})
            _axpy(arg, _ONE, A._mul_sparse({i: _ONE}, cols[j]))
            _axpy(lhs, -_ONE, apply(arg))
            rhs = apply(A.basis_product(i, j))
            pending.append((lhs, rhs))
            if lam is None:
                for k, v in rhs.items():
                    if v:
                        lam = lhs.get(k, _ZERO) / v
                        break
    if lam is None:
        return _ZERO if all(not lhs for lhs, _ in pending) else None
    for lhs, rhs in pending:
        expect = {k: lam * v for k, v in rhs.items() if lam * v}
        if {k: v for k, v in lhs.items() if v} != expect:
            return None
    return lam


def cybe_to_rb(L: Algebra, r: Tensor2) -> tuple[RBOperator, Fraction]:
    if not cybe_check(L, r):
        raise PreconditionError("tensor does not solve the classical Yang-Baxter equation")
    op = cybe_operator(L, r)
    lam = solve_weight(L, op)
    if lam is None:
        raise NotRotaBaxterError("no weight makes the induced operator Rota-Baxter")
    return RBOperator.checked(L, op, lam, construction="cybe"), lam


def trace_form(A: Algebra) -> RatMatrix:
    """``<x, y> = tr(xy)`` on a matrix algebra."""
    n = A.meta.get("matrix_n")
    if not n:
        raise PreconditionError("trace form needs a matrix algebra")
    d = A.dim
    diag = {i * n + i for i in range(n)}
    return RatMatrix(
        [[sum((v for k, v in A.basis_product(a, b).items() if k in diag), _ZERO) for b in range(d)] for a in range(d)]
    )


def is_skew_operator(R, form) -> bool:
    """``R`` is skew for a symmetric nondegenerate form: ``form R = -R^T form``."""
    m = R.matrix if isinstance(R, (RBOperator, LinearOperator)) else R
    f = form if isinstance(form, RatMatrix) else RatMatrix(form)
    if f != f.transpose():
        raise PreconditionError("form must be symmetric")
    if f.det() == 0:
        raise PreconditionError("form is degenerate")
    return f @ m == -(m.transpose() @ f)

