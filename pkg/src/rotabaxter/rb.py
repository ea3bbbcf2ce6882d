"""Rota-Baxter operators: verification, constructions and analysis.

An operator ``R`` has weight ``lam`` when, for all x and y,

    R(x) R(y) = R(R(x) y + x R(y) + lam * x y).

Both sides are bilinear, so checking basis pairs is enough; every routine
here relies on that.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import kernels
from .algebra import (
    Algebra,
    Element,
    LinearOperator,
    PreconditionError,
    _axpy,
    _sparse,
    induced_algebra,
    is_automorphism,
    is_subalgebra,
    matrix_algebra,
    nilpotency_data,
    power,
    power_associative_sample,
    faulhaber,
)
from .exact import RatMatrix, Span, as_rational, char_poly, format_rational, mat_reduce, rational_roots, stirling

__all__ = [
    "RBOperator",
    "NotRotaBaxterError",
    "HypothesisError",
    "BudgetExceededError",
    "Check",
    "Report",
    "as_operator",
    "verify_rb",
    "verify_rb_reference",
    "rb_witness",
    "phi",
    "rescale",
    "conjugate",
    "build_splitting",
    "build_triangular",
    "build_left_mult",
    "build_lemma9",
    "induced_on_ideal",
    "nilpotency_index",
    "max_rb_mat",
    "is_splitting",
    "spectrum_profile",
    "unital_report",
    "check_stirling",
    "check_faulhaber",
    "sf_conditions",
    "operator_from_rows",
    "derivation_check",
    "rb_from_derivation",
    "mybe_check",
    "grid_search_rb",
    "DEFAULT_SEARCH_BUDGET",
]

DEFAULT_SEARCH_BUDGET = 10**7
_ZERO = Fraction(0)
_ONE = Fraction(1)


class NotRotaBaxterError(ValueError):
    """The operator fails the Rota-Baxter identity at the requested weight."""


class HypothesisError(PreconditionError):
    """A construction's hypothesis does not hold; the message names it."""


class BudgetExceededError(PreconditionError):
    """A search would evaluate more candidates than the configured budget."""


# -- operators ---------------------------------------------------------------

def as_operator(A: Algebra, R) -> LinearOperator:
    if isinstance(R, RBOperator):
        R = R.op
    if isinstance(R, LinearOperator):
        if R.algebra.dim != A.dim:
            raise PreconditionError("operator size does not match the algebra")
        return R if R.algebra is A else LinearOperator(A, R.matrix)
    return LinearOperator(A, R)


def _scaled(A: Algebra) -> kernels.ScaledAlgebra:
    sa = getattr(A, "_scaled_cache", None)
    if sa is None:
        sa = kernels.ScaledAlgebra(A)
        A._scaled_cache = sa
    return sa


def verify_rb(A: Algebra, R, weight=0, use_python: bool | None = None) -> bool:
    """Rota-Baxter identity on all basis pairs, via the integer kernel."""
    op = as_operator(A, R)
    return kernels.rb_holds(_scaled(A), op.matrix.entries, as_rational(weight), use_python=use_python)


def rb_witness(A: Algebra, R, weight=0) -> tuple[str, str] | None:
    """First basis pair (by name) where the identity fails, or None."""
    op = as_operator(A, R)
    lam = as_rational(weight)
    cols = [_sparse(op.matrix.column(j)) for j in range(A.dim)]

    def apply(vec):
        acc: dict = {}
        for k, v in vec.items():
            _axpy(acc, v, cols[k])
        return acc

    for i in range(A.dim):
        for j in range(A.dim):
            bi, bj = {i: _ONE}, {j: _ONE}
            lhs = A._mul_sparse(cols[i], cols[j])
            arg = A._mul_sparse(cols[i], bj)
            _axpy(arg, _ONE, A._mul_sparse(bi, cols[j]))
            if lam:
                _axpy(arg, lam, A.basis_product(i, j))
            if lhs != apply(arg):
                return A.basis_names[i], A.basis_names[j]
    return None


def verify_rb_reference(A: Algebra, R, weight=0) -> bool:
    """Direct exact evaluation of the identity with element arithmetic (no kernel)."""
    return rb_witness(A, R, weight) is None


class RBOperator:
    """Linear operator tagged with a weight and a verification flag.

    Use :meth:`checked` for values that must satisfy the identity and
    :meth:`unchecked` for search candidates or negative tests.
    """

    __slots__ = ("op", "weight", "verified", "tags")

    def __init__(self, op: LinearOperator, weight, verified: bool, tags: Mapping | None = None):
        self.op = op
        self.weight = as_rational(weight)
        self.verified = verified
        self.tags = dict(tags or {})

    @classmethod
    def checked(cls, A: Algebra, R, weight, **tags) -> "RBOperator":
        op = as_operator(A, R)
        if not verify_rb(A, op, weight):
            w = rb_witness(A, op, weight)
            raise NotRotaBaxterError(
                f"not a Rota-Baxter operator of weight {format_rational(as_rational(weight))} on {A.name}"
                + (f" (fails on {w[0]}, {w[1]})" if w else "")
            )
        return cls(op, weight, True, tags)

    @classmethod
    def unchecked(cls, A: Algebra, R, weight, **tags) -> "RBOperator":
        return cls(as_operator(A, R), weight, False, tags)

    @property
    def algebra(self) -> Algebra:
        return self.op.algebra

    @property
    def matrix(self) -> RatMatrix:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim

    def __call__(self, x):
        return self.op(x)

    def image(self, i) -> Element:
        return self.op.image(i)

    def describe(self) -> dict[str, str]:
        return self.op.describe()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RBOperator):
            return NotImplemented
        return self.weight == other.weight and self.op == other.op

    def __hash__(self) -> int:
        return hash((self.weight, self.op))

    def __repr__(self) -> str:
        tag = "" if self.verified else ", unverified"
        body = ", ".join(f"{k} -> {v}" for k, v in self.describe().items()) or "0"
        return f"RBOperator(weight={format_rational(self.weight)}{tag}: {body})"


def phi(R: RBOperator) -> RBOperator:
    """The involution ``R -> -R - weight * id`` at the same weight."""
    A = R.algebra
    op = -R.op - LinearOperator.identity(A).scale(R.weight)
    return RBOperator.checked(A, op, R.weight, **R.tags)


def rescale(R: RBOperator, mu) -> RBOperator:
    mu = as_rational(mu)
    if mu == 0:
        raise PreconditionError("rescaling factor must be nonzero")
    return RBOperator.checked(R.algebra, R.op.scale(mu), R.weight * mu)


def conjugate(R: RBOperator, psi, anti: bool = False) -> RBOperator:
    """``psi^-1 R psi`` for an automorphism (or antiautomorphism) ``psi``."""
    A = R.algebra
    psi = as_operator(A, psi)
    if not is_automorphism(A, psi, anti=anti):
        kind = "antiautomorphism" if anti else "automorphism"
        raise PreconditionError(f"conjugating map is not an {kind}")
    return RBOperator.checked(A, psi.inverse() @ R.op @ psi, R.weight)


# -- subspace helpers --------------------------------------------------------

def _vectors(A: Algebra, basis: Sequence) -> list[tuple]:
    out = []
    for v in basis:
        if isinstance(v, str):
            v = A.parse(v)
        out.append(A.element(v).coords)
    return out


def _span(A: Algebra, basis: Sequence, what: str) -> Span:
    vecs = _vectors(A, basis)
    sp = Span(vecs, ambient=A.dim)
    if not sp.independent:
        raise HypothesisError(f"{what} basis is linearly dependent")
    return sp


def _decomposition(A: Algebra, parts: Sequence[Span], what: str) -> Span:
    total = [v for p in parts for v in p.vectors]
    sp = Span(total, ambient=A.dim)
    if not sp.independent or sp.dim != A.dim:
        raise HypothesisError(f"{what}: the parts do not form a direct sum equal to the algebra")
    return sp


def _from_parts(A: Algebra, parts: Sequence[Span], images: Sequence[Sequence[tuple | None]]) -> LinearOperator:
    """Operator sending the t-th vector of part p to ``images[p][t]`` (None means 0)."""
    whole = _decomposition(A, parts, "decomposition")
    flat = [img for imgs in images for img in imgs]
    cols = []
    for k in range(A.dim):
        e = [_ZERO] * A.dim
        e[k] = _ONE
        coef = whole.coordinates(e)
        acc = [_ZERO] * A.dim
        for c, img in zip(coef, flat):
            if c and img is not None:
                for t in range(A.dim):
                    acc[t] += c * img[t]
        cols.append(tuple(acc))
    return LinearOperator(A, RatMatrix.from_columns(cols))


def _prod(A: Algebra, x: tuple, y: tuple) -> tuple:
    return A._sparse_element(A._mul_sparse(_sparse(x), _sparse(y))).coords


def _products_in(A: Algebra, X: Sequence[tuple], Y: Sequence[tuple], target: Span | None) -> bool:
    for x in X:
        for y in Y:
            p = _prod(A, x, y)
            if target is None:
                if any(p):
                    return False
            elif p not in target:
                return False
    return True


def _maps_into(op: LinearOperator, X: Sequence[tuple], target: Span | None) -> bool:
    for x in X:
        img = op.matrix.apply(x)
        if target is None:
            if any(img):
                return False
        elif img not in target:
            return False
    return True


def _kernel_span(op: LinearOperator) -> Span:
    _, ker, _ = mat_reduce(op.matrix)
    return Span(ker, ambient=op.dim)


def _image_vectors(op: LinearOperator) -> list[tuple]:
    _, _, img = mat_reduce(op.matrix)
    return img


def build_splitting(A: Algebra, B1: Sequence, B2: Sequence, weight) -> RBOperator:
    """Zero on ``B1`` and ``-weight`` on ``B2`` for a direct sum of subalgebras."""
    lam = as_rational(weight)
    s1, s2 = _span(A, B1, "first summand"), _span(A, B2, "second summand")
    if not is_subalgebra(A, s1.vectors):
        raise HypothesisError("first summand is not a subalgebra")
    if not is_subalgebra(A, s2.vectors):
        raise HypothesisError("second summand is not a subalgebra")
    _decomposition(A, [s1, s2], "splitting")
    images = [[None] * len(s1.vectors), [tuple(-lam * x for x in v) for v in s2.vectors]]
    op = _from_parts(A, [s1, s2], images)
    return RBOperator.checked(A, op, lam, construction="splitting")


def _restricted_operator(A: Algebra, sub: Span, R0, lam: Fraction, what: str) -> tuple[Algebra, LinearOperator, list]:
    """Interpret ``R0`` on the subalgebra spanned by ``sub`` and return its images in ``A``."""
    S = induced_algebra(A, sub.vectors)
    m = len(sub.vectors)
    if isinstance(R0, RBOperator):
        R0 = R0.op
    if isinstance(R0, (LinearOperator, RatMatrix)) or (
        isinstance(R0, (list, tuple)) and R0 and isinstance(R0[0], (list, tuple)) and len(R0) == m
        and len(R0[0]) == m
    ):
        mat = R0.matrix if isinstance(R0, LinearOperator) else R0 if isinstance(R0, RatMatrix) else RatMatrix(R0)
        if mat.shape != (m, m):
            raise HypothesisError(f"{what} operator has the wrong size")
        local = LinearOperator(S, mat)
    else:
        coords = []
        for img in R0:
            if img is None or (isinstance(img, str) and img.strip() == "0"):
                img = [0] * A.dim
            v = A.parse(img) if isinstance(img, str) else A.element(img)
            c = sub.coordinates(v.coords)
            if c is None:
                raise HypothesisError(f"{what} operator leaves the subalgebra")
            coords.append(c)
        if len(coords) != m:
            raise HypothesisError(f"{what} operator needs one image per basis vector")
        local = LinearOperator(S, RatMatrix.from_columns(coords))
    if not verify_rb(S, local, lam):
        raise HypothesisError(f"{what} operator is not Rota-Baxter of weight {format_rational(lam)} on the subalgebra")
    images = []
    for t in range(m):
        c = local.matrix.column(t)
        acc = [_ZERO] * A.dim
        for coef, v in zip(c, sub.vectors):
            if coef:
                for k in range(A.dim):
                    acc[k] += coef * v[k]
        images.append(tuple(acc))
    return S, local, images


def build_triangular(A: Algebra, Aminus: Sequence, A0: Sequence, Aplus: Sequence, R0, weight) -> RBOperator:
    """``a_- + a_0 + a_+ -> R0(a_0) - weight * a_+``.

    ``R0`` may be a matrix on the induced basis of ``A0`` or a list of images
    (elements of ``A`` lying in ``A0``) of the ``A0`` basis vectors.
    """
    lam = as_rational(weight)
    parts = {}
    for label, basis in (("A-", Aminus), ("A0", A0), ("A+", Aplus)):
        parts[label] = _span(A, basis, label) if len(basis) else None
    for label, sp in parts.items():
        if sp is not None and not is_subalgebra(A, sp.vectors):
            raise HypothesisError(f"{label} is not a subalgebra")
    s0 = parts["A0"]
    for label in ("A-", "A+"):
        sp = parts[label]
        if sp is None or s0 is None:
            continue
        if not (_products_in(A, s0.vectors, sp.vectors, sp) and _products_in(A, sp.vectors, s0.vectors, sp)):
            raise HypothesisError(f"{label} is not an A0-module")
    present = [p for p in parts.values() if p is not None]
    _decomposition(A, present, "triangular splitting")
    images = []
    if parts["A-"] is not None:
        images.append([None] * len(parts["A-"].vectors))
    if s0 is not None:
        _, _, r0_images = _restricted_operator(A, s0, R0, lam, "A0")
        images.append(r0_images)
    if parts["A+"] is not None:
        images.append([tuple(-lam * x for x in v) for v in parts["A+"].vectors])
    op = _from_parts(A, present, images)
    return RBOperator.checked(A, op, lam, construction="triangular")


def _associator(A: Algebra, x: dict, y: dict, z: dict) -> dict:
    left = A._mul_sparse(A._mul_sparse(x, y), z)
    _axpy(left, -_ONE, A._mul_sparse(x, A._mul_sparse(y, z)))
    return left


def build_left_mult(A: Algebra, e, weight) -> RBOperator:
    """Left multiplication ``x -> e x`` for ``e^2 = -weight * e``."""
    lam = as_rational(weight)
    e = A.parse(e) if isinstance(e, str) else A.element(e)
    if e * e != e.scale(-lam):
        raise HypothesisError("left multiplier must satisfy e^2 = -weight * e")
    if not A.flag("associative"):
        if not A.flag("alternative_linearized"):
            raise HypothesisError("algebra is neither associative nor alternative")
        es = e.support()
        basis = [{i: _ONE} for i in range(A.dim)]
        commutes = all(A._mul_sparse(es, b) == A._mul_sparse(b, es) for b in basis)
        nucleus = all(
            not _associator(A, es, x, y) and not _associator(A, x, es, y) and not _associator(A, x, y, es)
            for x in basis
            for y in basis
        )
        if not (commutes or nucleus):
            raise HypothesisError("left multiplier lies in neither the commutative nor the associative center")
    cols = [(e * A.basis(j)).coords for j in range(A.dim)]
    return RBOperator.checked(A, RatMatrix.from_columns(cols), lam, construction="left_mult")


_LEMMA9_VARIANTS = ("a", "a1", "a2", "b", "b1", "b2", "c", "c1", "c2", "d", "e", "e1", "f", "g", "h", "i")


def _rb_on_pairs(A: Algebra, op: LinearOperator, X: Sequence[tuple], Y: Sequence[tuple]) -> bool:
    for x in X:
        Rx = op.matrix.apply(x)
        for y in Y:
            Ry = op.matrix.apply(y)
            lhs = _prod(A, Rx, Ry)
            arg = tuple(a + b for a, b in zip(_prod(A, Rx, y), _prod(A, x, Ry)))
            if lhs != op.matrix.apply(arg):
                return False
    return True


def build_lemma9(
    A: Algebra,
    variant: str,
    parts: Sequence[Sequence],
    op=None,
    ops: Sequence | None = None,
) -> RBOperator:
    """Weight-zero operators from the sufficient-condition constructions.

    ``parts`` lists the subspaces (B, C[, D]) or the graded components
    (A_0, A_1[, A_2]) as bases.  For most variants ``op`` is the operator on
    ``A`` (a :class:`LinearOperator` or a dict of basis images).  Variant
    ``h`` takes ``op`` as the list of images of ``B``'s basis under the inner
    operator, and variant ``i`` takes ``ops`` as two such lists, one per
    summand.  Every hypothesis is checked on basis elements and the result is
    verified independently afterwards.
    """
    if variant not in _LEMMA9_VARIANTS:
        raise PreconditionError(f"unknown lemma variant {variant!r}")
    spans = [_span(A, p, f"part {n}") for n, p in enumerate(parts)]
    P = [s.vectors for s in spans]
    _decomposition(A, spans, f"variant {variant}")

    def fail(cond: str):
        raise HypothesisError(f"variant {variant}: {cond}")

    def need(ok: bool, cond: str):
        if not ok:
            fail(cond)

    graded = variant in ("a1", "a2", "b1", "b2", "c1", "c2", "d", "e1", "f")
    if graded:
        m = len(spans)
        need(m == (2 if variant in ("a1", "a2", "b1", "b2", "c1", "c2") else 3), "wrong number of graded components")
        for i in range(m):
            for j in range(m):
                need(_products_in(A, P[i], P[j], spans[(i + j) % m]), f"grading fails for A{i}*A{j}")

    if variant == "h":
        need(len(spans) == 2, "needs parts B and C")
        need(op is not None, "needs the inner operator on B")
        need(is_subalgebra(A, P[0]), "B is not a subalgebra")
        _, local, images = _restricted_operator(A, spans[0], op, _ZERO, "inner")
        ker_local = _kernel_span(local)
        ker_vecs = []
        for v in ker_local.basis():
            acc = [_ZERO] * A.dim
            for coef, b in zip(v, P[0]):
                if coef:
                    for k in range(A.dim):
                        acc[k] += coef * b[k]
            ker_vecs.append(tuple(acc))
        target = Span(ker_vecs + list(P[1]), ambient=A.dim)
        need(_products_in(A, P[0], P[1], target) and _products_in(A, P[1], P[0], target), "BC, CB not inside ker P + C")
        R = _from_parts(A, spans, [images, [None] * len(P[1])])
        return RBOperator.checked(A, R, 0, construction="lemma9", lemma9_variant=variant)

    if variant == "i":
        need(len(spans) == 2, "needs two summands")
        need(ops is not None and len(ops) == 2, "needs one operator per summand")
        need(_products_in(A, P[0], P[1], None) and _products_in(A, P[1], P[0], None), "summands do not annihilate each other")
        imgs = []
        for n in range(2):
            need(is_subalgebra(A, P[n]), f"summand {n + 1} is not a subalgebra")
            _, _, images = _restricted_operator(A, spans[n], ops[n], _ZERO, f"summand {n + 1}")
            imgs.append(images)
        R = _from_parts(A, spans, imgs)
        return RBOperator.checked(A, R, 0, construction="lemma9", lemma9_variant=variant)

    if op is None:
        fail("operator required")
    R = LinearOperator.from_map(A, op) if isinstance(op, Mapping) else as_operator(A, op)
    image = _image_vectors(R)
    ker = _kernel_span(R)
    if variant in ("a", "b", "c"):
        need(len(spans) == 2, "needs parts B and C")
    if variant in ("e", "g"):
        need(len(spans) == 3, "needs parts B, C and D")

    if variant == "a":
        B, C = spans
        need(_products_in(A, image, image, None), "Im R is not abelian")
        need(_maps_into(R, P[0], C), "R(B) not inside C")
        need(_maps_into(R, P[1], None), "R(C) != 0")
        RB = [R.matrix.apply(b) for b in P[0]]
        need(_products_in(A, P[0], RB, C) and _products_in(A, RB, P[0], C), "B R(B), R(B) B not inside C")
    elif variant == "a1":
        need(_products_in(A, image, image, None), "Im R is not abelian")
        need(_maps_into(R, P[0], spans[1]), "R(A0) not inside A1")
        need(_maps_into(R, P[1], None), "R(A1) != 0")
    elif variant == "a2":
        need(_products_in(A, P[1], P[1], None), "odd part is not abelian")
        need(_maps_into(R, P[0], spans[1]), "R(A0) not inside A1")
        need(_maps_into(R, P[1], None), "R(A1) != 0")
    elif variant == "b":
        B, C = spans
        need(_maps_into(R, P[0], C), "R(B) not inside C")
        need(_maps_into(R, P[1], None), "R(C) != 0")
        RB = [R.matrix.apply(b) for b in P[0]]
        need(_products_in(A, RB, P[1], C) and _products_in(A, P[1], RB, C), "R(B) C, C R(B) not inside C")
        need(_rb_on_pairs(A, R, P[0], P[0]), "identity fails on B x B")
    elif variant == "b1":
        need(_maps_into(R, P[1], spans[0]), "R(A1) not inside A0")
        need(_maps_into(R, P[0], None), "R(A0) != 0")
        for c in P[1]:
            for d in P[1]:
                Rc, Rd = R.matrix.apply(c), R.matrix.apply(d)
                need(not any(_prod(A, Rc, Rd)), "R(c) R(d) != 0 on A1")
                arg = tuple(a + b for a, b in zip(_prod(A, Rc, d), _prod(A, c, Rd)))
                need(not any(R.matrix.apply(arg)), "R(R(c) d + c R(d)) != 0 on A1")
    elif variant == "b2":
        need(_products_in(A, P[0], P[0], None), "even part is not abelian")
        need(_maps_into(R, P[1], spans[0]), "R(A1) not inside A0")
        need(_maps_into(R, P[0], None), "R(A0) != 0")
        for c in P[1]:
            for d in P[1]:
                Rc, Rd = R.matrix.apply(c), R.matrix.apply(d)
                need(not any(a + b for a, b in zip(_prod(A, Rc, d), _prod(A, c, Rd))), "R(c) d + c R(d) != 0")
    elif variant == "c":
        B, C = spans
        need(_maps_into(R, P[0], B), "R(B) not inside B")
        need(_maps_into(R, P[1], None), "R(C) != 0")
        need(_products_in(A, P[0], P[0], None), "B^2 != 0")
        need(_products_in(A, P[0], P[1], ker) and _products_in(A, P[1], P[0], ker), "BC, CB not inside ker R")
    elif variant == "c1":
        need(_products_in(A, P[0], P[0], None), "even part is not abelian")
        need(_maps_into(R, P[0], spans[0]), "R(A0) not inside A0")
        need(_maps_into(R, P[1], None), "R(A1) != 0")
    elif variant == "c2":
        need(_products_in(A, P[1], P[1], None), "odd part is not abelian")
        need(_maps_into(R, P[0], None), "R(A0) != 0")
        need(_maps_into(R, P[1], spans[1]), "R(A1) not inside A1")
        need(_products_in(A, P[0], image, ker) and _products_in(A, image, P[0], ker), "A0 Im R, Im R A0 not inside ker R")
    elif variant == "d":
        need(_products_in(A, P[2], P[2], None), "A2^2 != 0")
        need(_maps_into(R, P[1], spans[2]), "R(A1) not inside A2")
        need(_maps_into(R, P[0] + P[2], None), "R(A0 + A2) != 0")
    elif variant in ("e", "e1"):
        if variant == "e":
            Bv, Cv, Dv = P
            Cs, Ds = spans[1], spans[2]
        else:
            # B = A2, C = A0, D = A1
            Bv, Cv, Dv = P[2], P[0], P[1]
            Cs, Ds = spans[0], spans[1]
        need(_products_in(A, Cv, Cv, None), "C^2 != 0")
        need(_products_in(A, Dv, Dv, None), "D^2 != 0")
        need(_products_in(A, Cv, Dv, Ds) and _products_in(A, Dv, Cv, Ds), "CD, DC not inside D")
        need(_maps_into(R, Bv, Cs), "R(B) not inside C")
        need(_maps_into(R, Cv, Ds), "R(C) not inside D")
        need(_maps_into(R, Dv, None), "R(D) != 0")
        for b in Bv:
            Rb = R.matrix.apply(b)
            for b2 in Bv:
                Rb2 = R.matrix.apply(b2)
                need(not any(a + c for a, c in zip(_prod(A, Rb, b2), _prod(A, b, Rb2))), "R(b) b' + b R(b') != 0")
            for d in Dv:
                need(R.matrix.apply(_prod(A, b, d)) == _prod(A, Rb, d), "R(bd) != R(b) d")
                need(R.matrix.apply(_prod(A, d, b)) == _prod(A, d, Rb), "R(db) != d R(b)")
    elif variant == "f":
        need(_products_in(A, P[1], P[2], None) and _products_in(A, P[2], P[1], None), "A1 A2, A2 A1 != 0")
        need(_products_in(A, P[2], P[2], None), "A2^2 != 0")
        need(_maps_into(R, P[0], spans[1]), "R(A0) not inside A1")
        need(_maps_into(R, P[1], spans[2]), "R(A1) not inside A2")
        need(_maps_into(R, P[2], None), "R(A2) != 0")
        need(_rb_on_pairs(A, R, P[0], P[0]), "identity fails on A0 x A0")
    elif variant == "g":
        Bv, Cv, Dv = P
        Ds = spans[2]
        need(_products_in(A, Cv, Dv, Ds) and _products_in(A, Dv, Cv, Ds) and _products_in(A, Dv, Dv, Ds),
             "CD, DC, D^2 not inside D")
        RC = [R.matrix.apply(c) for c in Cv]
        need(_products_in(A, RC, RC, None), "R(C) is not abelian")
        need(_maps_into(R, Bv, spans[1]), "R(B) not inside C")
        need(_maps_into(R, Cv, Ds), "R(C) not inside D")
        need(_maps_into(R, Dv, None), "R(D) != 0")
        need(_rb_on_pairs(A, R, Bv, Bv + Cv) and _rb_on_pairs(A, R, Bv + Cv, Bv), "identity fails on mixed pairs")
    return RBOperator.checked(A, R, 0, construction="lemma9", lemma9_variant=variant)


def induced_on_ideal(R: RBOperator, which: int, decomposition: Sequence[Sequence], names: Sequence[str] | None = None) -> RBOperator:
    """Projection onto one ideal of ``A = A_1 + A_2`` followed by restriction.

    The result lives on the induced algebra of the chosen summand, in the
    basis given for it.
    """
    if which not in (1, 2):
        raise PreconditionError("which must be 1 or 2")
    A = R.algebra
    s1 = _span(A, decomposition[0], "first ideal")
    s2 = _span(A, decomposition[1], "second ideal")
    whole = _decomposition(A, [s1, s2], "ideal decomposition")
    everything = [tuple(_ONE if k == i else _ZERO for k in range(A.dim)) for i in range(A.dim)]
    for label, sp in (("first", s1), ("second", s2)):
        if not (_products_in(A, sp.vectors, everything, sp) and _products_in(A, everything, sp.vectors, sp)):
            raise HypothesisError(f"{label} summand is not an ideal")
    target = s1 if which == 1 else s2
    offset = 0 if which == 1 else len(s1.vectors)
    m = len(target.vectors)
    cols = []
    for v in target.vectors:
        coef = whole.coordinates(R.matrix.apply(v))
        cols.append(coef[offset:offset + m])
    S = induced_algebra(A, target.vectors, names=names)
    return RBOperator.checked(S, RatMatrix.from_columns(cols), R.weight, construction="ideal_projection")


# -- analysis ----------------------------------------------------------------

def nilpotency_index(R) -> tuple[bool, int | None]:
    """Least n with R^n = 0; a nilpotent d x d matrix always has R^d = 0."""
    m = R.matrix if isinstance(R, (RBOperator, LinearOperator)) else R
    d = m.shape[0]
    if m.is_zero():
        return True, 1
    p = m
    for n in range(2, d + 1):
        p = p @ m
        if p.is_zero():
            return True, n
    return False, None


def max_rb_mat(n: int) -> RBOperator:
    """Weight-zero operator on n x n matrices with nilpotency index 2n - 1.

    ``R(e_ij) = e_{i,j+1} + e_{i+1,j+2} + ... + e_{n-j+i-1,n}`` for
    ``i <= j < n``, ``R(e_ij) = -(e_{i-1,j} + e_{i-2,j-1} + ... + e_{i-j,1})``
    for ``i > j``, and ``R(e_in) = 0``.
    """
    if n < 2:
        raise PreconditionError("max_rb_mat needs n >= 2")
    A = matrix_algebra(n)
    idx = lambda i, j: (i - 1) * n + (j - 1)  # noqa: E731
    cols = [[_ZERO] * (n * n) for _ in range(n * n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            col = cols[idx(i, j)]
            if j == n:
                continue
            if i <= j:
                for k in range(n - j):
                    col[idx(i + k, j + 1 + k)] += 1
            else:
                for k in range(j):
                    col[idx(i - 1 - k, j - k)] -= 1
    return RBOperator.checked(A, RatMatrix.from_columns(cols), 0, construction="max_rb_mat")


def _kernel_is_subalgebra(A: Algebra, m: RatMatrix) -> bool:
    _, ker, _ = mat_reduce(m)
    return not ker or is_subalgebra(A, ker)


def is_splitting(R: RBOperator) -> bool:
    if R.weight == 0:
        raise PreconditionError("splitting is defined here for nonzero weight only")
    m, lam = R.matrix, R.weight
    if m @ m != m.scale(-lam):
        return False
    A = R.algebra
    shifted = m + RatMatrix.identity(A.dim).scale(lam)
    return _kernel_is_subalgebra(A, m) and _kernel_is_subalgebra(A, shifted)


@dataclass
class Check:
    name: str
    status: str  # pass | fail | n/a | inconclusive
    witness: str | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, status: str, witness: str | None = None) -> None:
        self.checks.append(Check(name, status, witness))

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def status(self, name: str) -> str:
        for c in self.checks:
            if c.name == name:
                return c.status
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_dict() for c in self.checks], "data": self.data}

    def __str__(self) -> str:
        lines = [self.title]
        for c in self.checks:
            extra = f"  [{c.witness}]" if c.witness else ""
            lines.append(f"  {c.status:13s} {c.name}{extra}")
        return "\n".join(lines)


def _require_unit(A: Algebra) -> Element:
    u = A.unit
    if u is None:
        raise PreconditionError("algebra has no unit")
    return u


def _left_mult_matrix(A: Algebra, a: Element) -> RatMatrix:
    return RatMatrix.from_columns([(a * A.basis(j)).coords for j in range(A.dim)])


def _profile(values: Sequence[Fraction], lam: Fraction) -> bool:
    scaled = {v / lam for v in values}
    if any(s.denominator != 1 for s in scaled):
        return False
    ints = sorted(int(s) for s in scaled)
    return 0 in ints and ints == list(range(ints[0], ints[-1] + 1))


def spectrum_profile(R: RBOperator) -> Report:
    """Eigenvalues of multiplication by R(1): integer multiples of the weight
    forming a consecutive range through 0, for R or for phi(R)."""
    A = R.algebra
    u = _require_unit(A)
    lam = R.weight
    if lam == 0:
        raise PreconditionError("spectrum profile needs a nonzero weight")
    a = R(u)
    poly = char_poly(_left_mult_matrix(A, a))
    roots, split = rational_roots(poly)
    rep = Report("spectrum_profile")
    rep.data["R(1)"] = str(a)
    rep.data["char_poly"] = [format_rational(c) for c in poly.coeffs]
    if not split:
        rep.add("spectrum_profile", "inconclusive", "characteristic polynomial does not split over Q")
        return rep
    distinct = sorted(set(roots))
    rep.data["eigenvalues"] = [format_rational(v) for v in distinct]
    direct = _profile(distinct, lam)
    flipped = _profile([-v - lam for v in distinct], lam)
    rep.data["via_phi"] = (not direct) and flipped
    rep.add("spectrum_profile", "pass" if direct or flipped else "fail",
            None if direct or flipped else "eigenvalues/weight: " + ", ".join(format_rational(v / lam) for v in distinct))
    return rep


def _is_power_associative(A: Algebra) -> bool:
    return (
        A.flag("associative")
        or A.flag("alternative_linearized")
        or A.flag("jordan_linearized")
        or power_associative_sample(A)
    )


def _in_span(vec: tuple, vectors: Sequence[tuple], dim: int) -> bool:
    return tuple(vec) in Span(list(vectors), ambient=dim) if vectors else not any(vec)


def _matrix_of_element(n: int, x: Element) -> RatMatrix:
    c = x.coords
    return RatMatrix([[c[i * n + j] for j in range(n)] for i in range(n)])


def unital_report(R: RBOperator) -> Report:
    """Bundle of structural predicates that every operator on a unital algebra must satisfy."""
    A = R.algebra
    u = _require_unit(A)
    lam = R.weight
    m = R.matrix
    d = A.dim
    a = R(u)
    rep = Report("unital_report")
    rep.data["weight"] = format_rational(lam)
    rep.data["R(1)"] = str(a)
    _, _, image = mat_reduce(m)
    ker_dim = d - len(image)
    rep.data["dim_ker"] = ker_dim
    mat_n = A.meta.get("matrix_n")
    aug = A.meta.get("augmentation")
    scalar = a.coords in Span([u.coords])
    nil, nil_index = nilpotency_data(A, a)
    power_assoc = _is_power_associative(A)

    # unit is never in the image at weight zero
    if lam == 0:
        inside = _in_span(u.coords, image, d)
        rep.add("unit_not_in_image", "fail" if inside else "pass", "1 lies in Im R" if inside else None)
    else:
        rep.add("unit_not_in_image", "n/a")

    # scalar R(1) at weight zero forces R(1) = 0 and R^2 = 0
    if lam == 0 and scalar:
        ok = a.is_zero() and (m @ m).is_zero()
        rep.add("scalar_R1_weight0", "pass" if ok else "fail", None if ok else f"R(1) = {a}")
    else:
        rep.add("scalar_R1_weight0", "n/a")

    # (R(1))^n = n! R^n(1)
    if lam == 0 and power_assoc:
        bad = None
        Rn1 = u
        for n in range(1, d + 1):
            Rn1 = R(Rn1)
            if power(A, a, n) != Rn1.scale(math.factorial(n)):
                bad = n
                break
        rep.add("powers_of_R1", "pass" if bad is None else "fail", None if bad is None else f"n = {bad}")
    else:
        rep.add("powers_of_R1", "n/a")

    # weight zero: R(1) nilpotent; then R^(2m) = 0 in associative/alternative algebras
    if lam == 0 and power_assoc:
        rep.add("R1_nilpotent", "pass" if nil else "fail", None if nil else f"R(1) = {a}")
        if nil and (A.flag("associative") or A.flag("alternative_linearized")):
            ok = (m ** (2 * nil_index)).is_zero()
            rep.add("R_power_2m_vanishes", "pass" if ok else "fail", f"m = {nil_index}")
        else:
            rep.add("R_power_2m_vanishes", "n/a")
    else:
        rep.add("R1_nilpotent", "n/a")
        rep.add("R_power_2m_vanishes", "n/a")

    splitting = is_splitting(R) if lam != 0 else None

    # nonzero weight with scalar R(1): splitting
    if lam != 0 and scalar:
        rep.add("scalar_R1_splitting", "pass" if splitting else "fail")
    else:
        rep.add("scalar_R1_splitting", "n/a")

    # nonzero weight with nilpotent R(1): R(1) = 0 and splitting
    if lam != 0 and nil and power_assoc:
        ok = a.is_zero() and splitting
        rep.add("nilpotent_R1_splitting", "pass" if ok else "fail", None if ok else f"R(1) = {a}")
    else:
        rep.add("nilpotent_R1_splitting", "n/a")

    # matrix algebras
    if mat_n and lam != 0 and not splitting:
        ok = mat_n - 1 <= ker_dim <= mat_n * mat_n - mat_n
        rep.add("kernel_dimension_bounds", "pass" if ok else "fail", f"dim ker = {ker_dim}")
    else:
        rep.add("kernel_dimension_bounds", "n/a")

    if mat_n and lam != 0 and _is_diagonal(mat_n, a):
        diag = [a.coords[i * mat_n + i] for i in range(mat_n)]
        block = [
            tuple(_ONE if k == s * mat_n + t else _ZERO for k in range(d))
            for s in range(mat_n)
            for t in range(mat_n)
            if diag[s] == diag[t]
        ]
        sp = Span(block, ambient=d)
        ok = all(m.apply(v) in sp for v in block)
        rep.add("diagonal_blocks_invariant", "pass" if ok else "fail", f"{len(set(diag))} distinct values")
    else:
        rep.add("diagonal_blocks_invariant", "n/a")

    if mat_n and lam == 0:
        bad = [str(A.element(v)) for v in image if _matrix_of_element(mat_n, A.element(v)).det() != 0]
        ok = not bad and len(image) <= mat_n * mat_n - mat_n
        rep.add("image_singular", "pass" if ok else "fail", "; ".join(bad) if bad else f"dim Im = {len(image)}")
        ok = (m ** (2 * mat_n)).is_zero()
        rep.add("R_power_2n_vanishes", "pass" if ok else "fail")
    else:
        rep.add("image_singular", "n/a")
        rep.add("R_power_2n_vanishes", "n/a")

    # F1 + N algebras (Grassmann, truncated polynomials)
    if aug is not None:
        N = Span([tuple(_ONE if k == i else _ZERO for k in range(d)) for i in aug], ambient=d)
        if lam == 0:
            ok = all(v in N for v in image)
            rep.add("image_in_augmentation", "pass" if ok else "fail")
        else:
            rep.add("image_in_augmentation", "n/a")
            a_phi = -a - u.scale(lam)
            ok = splitting and (a.is_zero() or a_phi.is_zero())
            rep.add("nonzero_weight_splitting_R1_zero", "pass" if ok else "fail",
                    "instance evidence" if ok else f"R(1) = {a}")
    else:
        rep.add("image_in_augmentation", "n/a")
        rep.add("nonzero_weight_splitting_R1_zero", "n/a")

    gn = A.meta.get("grassmann_n")
    if gn and lam == 0:
        top = A.basis(d - 1)
        ok_top = R(top).is_zero()
        bound = (gn + 1) // 2 + 1
        ok_pow = power(A, a, bound).is_zero()
        rep.add("grassmann_top_annihilated", "pass" if ok_top else "fail")
        rep.add("grassmann_R1_power", "pass" if ok_pow else "fail", f"exponent {bound}")
    else:
        rep.add("grassmann_top_annihilated", "n/a")
        rep.add("grassmann_R1_power", "n/a")
    return rep


def _is_diagonal(n: int, x: Element) -> bool:
    return all(not x.coords[i * n + j] for i in range(n) for j in range(n) if i != j)


def check_stirling(R: RBOperator, N: int, assume_power_associative: bool = False) -> bool:
    """Both Stirling-number expansions relating R^n(1) and (R(1))^n for n <= N."""
    A = R.algebra
    u = _require_unit(A)
    if not (A.flag("associative") or assume_power_associative):
        raise PreconditionError("Stirling identities need an associative (or asserted power-associative) algebra")
    lam = R.weight
    a = R(u)
    iter_R = [u]
    for _ in range(N):
        iter_R.append(R(iter_R[-1]))
    pw = [u] + [power(A, a, k) for k in range(1, N + 1)]
    for n in range(1, N + 1):
        lhs = iter_R[n].scale(math.factorial(n))
        rhs = A.zero()
        for k in range(1, n + 1):
            rhs = rhs + pw[k].scale((-1) ** (n - k) * lam ** (n - k) * stirling("first", n, k))
        if lhs != rhs:
            return False
        rhs = A.zero()
        for k in range(1, n + 1):
            rhs = rhs + iter_R[k].scale(math.factorial(k) * lam ** (n - k) * stirling("second", n, k))
        if pw[n] != rhs:
            return False
    return True


def check_faulhaber(R: RBOperator) -> bool:
    """``R(a^n) = F_n(a)`` for ``a = R(1)`` and ``1 <= n <= dim`` (weight -1)."""
    if R.weight != -1:
        raise PreconditionError("power-sum identity needs weight -1; rescale first")
    A = R.algebra
    u = _require_unit(A)
    a = R(u)
    for n in range(1, A.dim + 1):
        if R(power(A, a, n)) != faulhaber(A, a, n):
            return False
    return True


def operator_from_rows(A: Algebra, rows: Sequence[Sequence]) -> LinearOperator:
    """Operator with ``R(b_i) = sum_k rows[i][k] b_k`` (row convention)."""
    return LinearOperator(A, RatMatrix(rows).transpose())


def sf_conditions(rmat) -> tuple[bool, list[str]]:
    """Conditions characterising weight-1 operators on a sum of fields.

    ``rmat`` uses the row convention ``R(e_i) = sum_k r[i][k] e_k``.
    """
    r = rmat.tolist() if isinstance(rmat, RatMatrix) else [[as_rational(x) for x in row] for row in rmat]
    n = len(r)
    if any(len(row) != n for row in r):
        raise PreconditionError("square matrix required")
    violated = []
    sf1 = True
    for i in range(n):
        others = [r[i][k] for k in range(n) if k != i]
        if r[i][i] == 0:
            ok = all(x in (0, 1) for x in others)
        elif r[i][i] == -1:
            ok = all(x in (0, -1) for x in others)
        else:
            ok = False
        sf1 = sf1 and ok
    if not sf1:
        violated.append("SF1")
    sf2 = all(
        r[i][l] * r[k][l] == 0
        for i in range(n)
        for k in range(n)
        if i != k and r[i][k] == 0 and r[k][i] == 0
        for l in range(n)
        if l not in (i, k)
    )
    if not sf2:
        violated.append("SF2")
    sf3 = True
    for i in range(n):
        for k in range(n):
            if i == k or r[i][k] == 0:
                continue
            if r[k][i] != 0:
                sf3 = False
            for l in range(n):
                if l not in (i, k) and not (r[k][l] == 0 or r[i][l] == r[i][k]):
                    sf3 = False
    if not sf3:
        violated.append("SF3")
    return not violated, violated


def derivation_check(A: Algebra, d, weight) -> bool:
    """``d(xy) = d(x) y + x d(y) + weight d(x) d(y)`` on basis pairs."""
    lam = as_rational(weight)
    op = as_operator(A, d)
    cols = [_sparse(op.matrix.column(j)) for j in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs: dict = {}
            for k, v in A.basis_product(i, j).items():
                _axpy(lhs, v, cols[k])
            rhs = A._mul_sparse(cols[i], {j: _ONE})
            _axpy(rhs, _ONE, A._mul_sparse({i: _ONE}, cols[j]))
            if lam:
                _axpy(rhs, lam, A._mul_sparse(cols[i], cols[j]))
            if lhs != rhs:
                return False
    return True


def rb_from_derivation(A: Algebra, d, weight) -> RBOperator:
    """The inverse of an invertible weighted derivation."""
    op = as_operator(A, d)
    if not derivation_check(A, op, weight):
        raise HypothesisError("map is not a derivation of the given weight")
    if op.matrix.det() == 0:
        raise HypothesisError("derivation is not invertible")
    return RBOperator.checked(A, op.inverse(), weight, construction="derivation_inverse")


def mybe_check(L: Algebra, R) -> bool:
    """``R(x)R(y) - R(R(x)y + xR(y)) = -xy`` on basis pairs."""
    op = as_operator(L, R)
    cols = [_sparse(op.matrix.column(j)) for j in range(L.dim)]

    def apply(vec):
        acc: dict = {}
        for k, v in vec.items():
            _axpy(acc, v, cols[k])
        return acc

    for i in range(L.dim):
        for j in range(L.dim):
            lhs = L._mul_sparse(cols[i], cols[j])
            arg = L._mul_sparse(cols[i], {j: _ONE})
            _axpy(arg, _ONE, L._mul_sparse({i: _ONE}, cols[j]))
            _axpy(lhs, -_ONE, apply(arg))
            _axpy(lhs, _ONE, L.basis_product(i, j))
            if lhs:
                return False
    return True


def _budget(budget: int | None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("ROTABAXTER_SEARCH_BUDGET")
    return int(env) if env else DEFAULT_SEARCH_BUDGET


def grid_search_rb(
    A: Algebra,
    weight,
    grid: Sequence,
    support=None,
    budget: int | None = None,
    limit: int | None = None,
    use_python: bool | None = None,
) -> list[RBOperator]:
    """Every operator with entries in ``grid`` passing the identity.

    ``support`` restricts the nonzero entries: a collection of ``(row, col)``
    matrix positions or a dim x dim boolean mask; by default all entries are
    free.  The number of raw candidates ``|grid| ** free`` must not exceed the
    budget (default ``DEFAULT_SEARCH_BUDGET``, or ``ROTABAXTER_SEARCH_BUDGET``).
    Results are in lexicographic order of the grid indices, column by column.
    """
    d = A.dim
    values = sorted(set(as_rational(g) for g in grid))
    if not values:
        raise PreconditionError("empty grid")
    if support is None:
        mask = [[True] * d for _ in range(d)]
    elif isinstance(support, (list, tuple)) and len(support) == d and all(
        isinstance(r, (list, tuple)) and len(r) == d and all(isinstance(x, bool) for x in r) for r in support
    ):
        mask = [list(r) for r in support]
    else:
        mask = [[False] * d for _ in range(d)]
        for (r, c) in support:
            mask[r][c] = True
    if any(not mask[r][c] for r in range(d) for c in range(d)) and _ZERO not in values:
        raise PreconditionError("a restricted support needs 0 in the grid")
    free_rows = [[r for r in range(d) if mask[r][c]] for c in range(d)]
    free = sum(len(f) for f in free_rows)
    cap = _budget(budget)
    if len(values) ** free > cap:
        raise BudgetExceededError(f"{len(values)}^{free} candidates exceed the budget {cap}")
    _, encs = kernels.grid_search(_scaled(A), as_rational(weight), values, free_rows, limit or (1 << 62), use_python)
    out = []
    for enc in encs:
        cols = [[_ZERO] * d for _ in range(d)]
        pos = 0
        for c in range(d):
            for r in free_rows[c]:
                cols[c][r] = values[enc[pos]]
                pos += 1
        out.append(RBOperator(LinearOperator(A, RatMatrix.from_columns(cols)), weight, True, {"construction": "search"}))
    return out
