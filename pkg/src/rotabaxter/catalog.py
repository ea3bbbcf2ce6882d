"""Named operators and tensors with their expected properties.

Each entry builds a concrete object from rational parameters and records
what should hold for it: the weight, the nilpotency index, whether it is
splitting or skew, and the construction that produces it.  The self-test
runs all of those checks and reports witnesses for any failure.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .algebra import Algebra, LinearOperator, PreconditionError, build_algebra, direct_sum, plus_minus
from .exact import as_rational, format_rational
from .rb import (
    RBOperator,
    Report,
    build_lemma9,
    build_splitting,
    build_triangular,
    is_splitting,
    max_rb_mat,
    nilpotency_index,
    operator_from_rows,
    phi,
    spectrum_profile,
    unital_report,
    verify_rb,
    verify_rb_reference,
)
from .ybe import (
    Tensor2,
    aybe_check,
    aybe_to_rb,
    cybe_check,
    cybe_to_rb,
    invariance_check,
    is_skew,
    is_skew_operator,
    trace_form,
)

__all__ = ["CatalogEntry", "catalog_list", "catalog_get", "catalog_entry", "catalog_selftest", "SAMPLE"]

SAMPLE = tuple(Fraction(x) for x in ("-2", "-1", "-1/2", "1/2", "1", "2"))
SAMPLE_WITH_ZERO = SAMPLE + (Fraction(0),)


@functools.lru_cache(maxsize=None)
def _algebra(spec: str) -> Algebra:
    if "+" in spec:
        left, right = spec.split("+", 1)
        A = direct_sum(_algebra(left), _algebra(right))
        A.meta["spec"] = spec
        return A
    return build_algebra(spec)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    algebra: Callable[..., str]
    kind: str  # operator | aybe | cybe
    build: Callable
    params: tuple[str, ...] = ()
    samples: tuple[Mapping, ...] = ({},)
    weight: Callable | Fraction | None = None
    index: Callable | int | None = None  # 0 means "not nilpotent"
    splitting: bool | None = None
    skew: bool | None = None
    lemma9: Callable | None = None
    images: Callable | None = None
    note: str = ""
    valid: Callable | None = None
    tags: tuple[str, ...] = field(default=())

    def algebra_spec(self, params: Mapping) -> str:
        return self.algebra(**params) if callable(self.algebra) else self.algebra

    def resolve(self, value, params: Mapping):
        return value(**params) if callable(value) else value

    def meta(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "params": list(self.params),
            "samples": [{k: format_rational(v) if isinstance(v, Fraction) else v for k, v in s.items()} for s in self.samples],
            "note": self.note,
        }


_ENTRIES: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry) -> None:
    if entry.id in _ENTRIES:
        raise RuntimeError(f"duplicate catalog id {entry.id}")
    _ENTRIES[entry.id] = entry


def _op(spec: str, images: Mapping[str, str], weight) -> RBOperator:
    A = _algebra(spec)
    return RBOperator.checked(A, LinearOperator.from_map(A, images), weight)


def _fmt(x) -> str:
    return format_rational(as_rational(x))


def _lin(*terms) -> str:
    """``_lin((2, "e"), (-1, "h"))`` -> ``"2*e-1*h"``; zero coefficients dropped."""
    parts = [f"{_fmt(c)}*{name}" for c, name in terms if as_rational(c)]
    return "+".join(parts).replace("+-", "-") or "0"


# -- 2 x 2 matrices, weight zero --------------------------------------------

def _m2w0(images, index, variant):
    return dict(algebra="matrix:2", kind="operator", weight=Fraction(0), index=index, lemma9=variant,
                build=lambda: _op("matrix:2", images, 0))


_register(CatalogEntry("M2w0.M1", **_m2w0({"e21": "e12"}, 2, lambda: ("a", [["e21"], ["e11", "e12", "e22"]], {"e21": "e12"}))))
_register(CatalogEntry("M2w0.M2", **_m2w0({"e21": "e11"}, 2, lambda: ("b", [["e21"], ["e11", "e12", "e22"]], {"e21": "e11"}))))
_register(CatalogEntry("M2w0.M3", **_m2w0({"e21": "e11", "e22": "e12"}, 2,
                                          lambda: ("b", [["e21", "e22"], ["e11", "e12"]], {"e21": "e11", "e22": "e12"}))))
_register(CatalogEntry("M2w0.M4", **_m2w0({"e21": "-e11", "e11": "e12"}, 3,
                                          lambda: ("g", [["e21"], ["e11"], ["e12", "e22"]], {"e21": "-e11", "e11": "e12"}))))


# -- 2 x 2 matrices, weight one ---------------------------------------------

_register(CatalogEntry(
    "M2w1.M1", "matrix:2", "operator", lambda: _op("matrix:2", {"e11": "e22", "e12": "-e12"}, 1),
    weight=Fraction(1), splitting=False))
_register(CatalogEntry(
    "M2w1.M2", "matrix:2", "operator", lambda: _op("matrix:2", {"e11": "-e11", "e12": "-e12"}, 1),
    weight=Fraction(1), splitting=True,
    note="projection onto span{e11, e12} along span{e21, e22}; both are subalgebras, neither unital"))
_register(CatalogEntry(
    "M2w1.M3", "matrix:2", "operator",
    lambda alpha, gamma: _op("matrix:2", {"e21": _lin((-alpha, "e11"), (-alpha * gamma, "e12"), (-1, "e21"), (-gamma, "e22"))}, 1),
    params=("alpha", "gamma"),
    samples=tuple({"alpha": a, "gamma": g} for a in SAMPLE_WITH_ZERO for g in (Fraction(0), Fraction(1), Fraction(-1, 2))),
    weight=Fraction(1), splitting=True))
_register(CatalogEntry(
    "M2w1.M4", "matrix:2", "operator",
    lambda alpha: _op("matrix:2", {"e12": _lin((alpha, "e11"), (-1, "e12")), "e21": _lin((-1, "e21"), (1 / alpha, "e22"))}, 1),
    params=("alpha",), samples=tuple({"alpha": a} for a in SAMPLE), valid=lambda alpha: alpha != 0,
    weight=Fraction(1), splitting=True, note="alpha = 0 excluded"))
_register(CatalogEntry(
    "M2w1.M5", "matrix:2", "operator",
    lambda alpha: _op("matrix:2", {
        "e11": "-e11", "e12": "-e12", "e21": _lin((alpha, "e11"), (-alpha * alpha / 4, "e12")), "e22": "e11"}, 1),
    params=("alpha",), samples=tuple({"alpha": a} for a in SAMPLE_WITH_ZERO),
    weight=Fraction(1), splitting=True))


# -- sl2, weight zero ---------------------------------------------------------

_register(CatalogEntry(
    "sl2.L1", "sl2", "operator", lambda t: _op("sl2", {"f": _lin((t, "e"), (-1, "h")), "h": "2*e"}, 0),
    params=("t",), samples=tuple({"t": t} for t in SAMPLE_WITH_ZERO), weight=Fraction(0), index=3,
    lemma9=lambda t: ("e", [["f"], [_lin((t, "e"), (-1, "h"))], ["e"]], {"f": _lin((t, "e"), (-1, "h")), "h": "2*e"})))
_register(CatalogEntry(
    "sl2.L2", "sl2", "operator", lambda t: _op("sl2", {"f": _lin((2 * t, "e"), (1, "h")), "h": _lin((2, "e"), (1 / t, "h"))}, 0),
    params=("t",), samples=tuple({"t": t} for t in SAMPLE), valid=lambda t: t != 0, weight=Fraction(0), index=0,
    lemma9=lambda t: ("c1", [[_lin((2 * t, "e"), (1, "h"))], ["e", _lin((1, "f"), (-t, "h"))]],
                      {"f": _lin((2 * t, "e"), (1, "h")), "h": _lin((2, "e"), (1 / t, "h"))}),
    note="t = 0 excluded"))
_register(CatalogEntry(
    "sl2.L3", "sl2", "operator", lambda: _op("sl2", {"h": "h"}, 0), weight=Fraction(0), index=0,
    lemma9=lambda: ("c1", [["h"], ["e", "f"]], {"h": "h"})))
_register(CatalogEntry(
    "sl2.L4", "sl2", "operator", lambda: _op("sl2", {"f": "h"}, 0), weight=Fraction(0), index=2,
    lemma9=lambda: ("h", [["f", "h"], ["e"]], ["h", "0"])))
_register(CatalogEntry(
    "sl2.L5", "sl2", "operator", lambda: _op("sl2", {"f": "e"}, 0), weight=Fraction(0), index=2,
    lemma9=lambda: ("d", [["h"], ["f"], ["e"]], {"f": "e"})))


# -- sl2, weight one ----------------------------------------------------------

_register(CatalogEntry(
    "sl2.w1.split", "sl2", "operator",
    lambda alpha: build_splitting(_algebra("sl2"), [_lin((1, "e"), (alpha, "h"))], ["h", "f"], 1),
    params=("alpha",), samples=tuple({"alpha": a} for a in SAMPLE), valid=lambda alpha: alpha != 0,
    weight=Fraction(1), splitting=True, note="alpha = 0 excluded"))
_register(CatalogEntry(
    "sl2.w1.triangular", "sl2", "operator",
    lambda kappa: build_triangular(_algebra("sl2"), ["e"], ["h"], ["f"], [[kappa]], 1),
    params=("kappa",), samples=tuple({"kappa": k} for k in SAMPLE_WITH_ZERO), weight=Fraction(1)))


# -- 3 x 3 matrices -----------------------------------------------------------

_SKEW_R = {
    "R1": {"e31": "e23", "e32": "-e13"},
    "R2": {"e11": "-e21-e32", "e12": "e11+e31", "e13": "e12-e21", "e21": "-e31", "e22": "-e32", "e23": "e11+e22"},
    "R3": {"e23": "e22", "e22": "-e32"},
    "R4": {"e13": "e12-e21", "e12": "e31", "e21": "-e31", "e23": "e11+e22", "e11": "-e32", "e22": "-e32"},
    "R5": {"e13": "e12", "e21": "-e31", "e23": "e11+e22", "e11": "-e32", "e22": "-e32"},
    "R6": {"e33": "e32", "e23": "-e33", "e13": "e11+e12", "e11": "-e31", "e21": "-e31"},
    "R7": {"e23": "-e11-e33", "e11": "e32", "e33": "e32"},
    "R8": {"e13": "e12", "e21": "-e31", "e33": "e32", "e23": "-e33"},
}
for _name, _imgs in _SKEW_R.items():
    _register(CatalogEntry(
        f"M3.skew.{_name}", "matrix:3", "operator", functools.partial(_op, "matrix:3", _imgs, 0),
        weight=Fraction(0), skew=True))

_register(CatalogEntry(
    "M3.w1.triangular", "matrix:3", "operator",
    lambda: _op("matrix:3", {"e13": "-e13", "e23": "-e23", "e33": "e22"}, 1), weight=Fraction(1),
    note="triangular with A- = span{e31, e32}, A+ = span{e13, e23}"))
_register(CatalogEntry(
    "M3.w0.glued", "matrix:3", "operator",
    lambda: build_lemma9(_algebra("matrix:3"), "h",
                         [["e11", "e12", "e21", "e22"], ["e13", "e23", "e31", "e32", "e33"]], ["e12", "0", "-e11", "0"]),
    weight=Fraction(0), index=3, note="the 2 x 2 index-3 operator extended by zero"))


# -- n x n matrices -----------------------------------------------------------

_register(CatalogEntry(
    "Mn.maxrb", lambda n: f"matrix:{n}", "operator", lambda n: max_rb_mat(n),
    params=("n",), samples=tuple({"n": n} for n in range(2, 7)), weight=Fraction(0), index=lambda n: 2 * n - 1))


def _chain_rows(n: int, s: int) -> list[list[Fraction]]:
    """Row-convention matrix on a sum of n fields: ones above position s, minus ones from s onward."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n + 1):
        if i < s:
            for l in range(i + 1, s + 1):
                rows[i - 1][l - 1] = Fraction(1)
        elif i > s:
            for l in range(i, n + 1):
                rows[i - 1][l - 1] = Fraction(-1)
    return rows


def _chain(n: int, s: int) -> RBOperator:
    A = _algebra(f"field_sum:{n}")
    return RBOperator.checked(A, operator_from_rows(A, _chain_rows(n, s)), 1)


_register(CatalogEntry(
    "Fn.w1.chain", lambda n, s: f"field_sum:{n}", "operator", _chain,
    params=("n", "s"), samples=tuple({"n": n, "s": s} for n in range(1, 6) for s in range(1, n + 1)),
    valid=lambda n, s: 1 <= s <= n, weight=Fraction(1),
    note="R(1) has diagonal 0, 1, ..., s-1, -1, ..., -(n-s)"))


def _triangular_mn(n: int, s: int) -> RBOperator:
    A = _algebra(f"matrix:{n}")
    lower = [f"e{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1) if i > j]
    diag = [f"e{i}{i}" for i in range(1, n + 1)]
    upper = [f"e{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1) if i < j]
    inner = [[Fraction(0)] * n for _ in range(n)] if s == 0 else _chain_rows(n, s)
    return build_triangular(A, lower, diag, upper, [list(col) for col in zip(*inner)], 1)


_register(CatalogEntry(
    "Mn.w1.triangular", lambda n, s: f"matrix:{n}", "operator", _triangular_mn,
    params=("n", "s"), samples=tuple({"n": n, "s": s} for n in range(2, 5) for s in range(0, n + 1)),
    valid=lambda n, s: 0 <= s <= n, weight=Fraction(1), splitting=lambda n, s: True if s == 0 else None,
    note="lower, diagonal and upper blocks; s = 0 puts the zero operator on the diagonal"))


# -- Grassmann algebras -------------------------------------------------------

_register(CatalogEntry(
    "Gr3.w0.odd", "grassmann:3", "operator", lambda: _op("grassmann:3", {"e12": "e3"}, 0),
    weight=Fraction(0), index=2,
    lemma9=lambda: ("a1", [["1", "e12", "e13", "e23"], ["e1", "e2", "e3", "e123"]], {"e12": "e3"})))
_register(CatalogEntry(
    "Gr3.exmp1", "grassmann:3", "operator", lambda: _op("grassmann:3", {"1": "e1+e23", "e1": "e123"}, 0),
    weight=Fraction(0), index=3,
    lemma9=lambda: ("h", [["1", "e1+e23", "e123"], ["e2", "e3", "e12", "e13", "e23"]], ["e1+e23", "e123", "0"]),
    note="R(1) = e1 + e23"))
_register(CatalogEntry(
    "Gr4.w0.odd", "grassmann:4", "operator", lambda: _op("grassmann:4", {"e12": "e3"}, 0),
    weight=Fraction(0), index=2,
    lemma9=lambda: ("a1", [["1", "e12", "e13", "e14", "e23", "e24", "e34", "e1234"],
                           ["e1", "e2", "e3", "e4", "e123", "e124", "e134", "e234"]], {"e12": "e3"})))
_register(CatalogEntry(
    "Gr4.exmp1", "grassmann:4", "operator", lambda: _op("grassmann:4", {"1": "e1+e23", "e1": "e123"}, 0),
    weight=Fraction(0), index=3))
_register(CatalogEntry(
    "Gr4.w0.unit", "grassmann:4", "operator", lambda: _op("grassmann:4", {"1": "e12", "e34": "e1234"}, 0),
    weight=Fraction(0), index=2))
for _n in (2, 3):
    _register(CatalogEntry(
        f"Gr{_n}.w1.split", f"grassmann:{_n}", "operator",
        functools.partial(lambda n: build_splitting(
            _algebra(f"grassmann:{n}"), ["1"], _algebra(f"grassmann:{n}").basis_names[1:], 1), _n),
        weight=Fraction(1), splitting=True, note="zero on the unit line, -1 on the augmentation ideal"))


# -- other algebras -----------------------------------------------------------

_register(CatalogEntry(
    "K3.w0", "kaplansky_k3", "operator", lambda a, b: _op("kaplansky_k3", {"y": _lin((a, "e"), (b, "x"))}, 0),
    params=("a", "b"),
    samples=tuple({"a": a, "b": b} for a, b in ((1, 2), (0, 1), (1, 0), (Fraction(-1, 2), 2), (2, -1))),
    weight=Fraction(0), index=lambda a, b: 2 if (a or b) else 1))
_register(CatalogEntry(
    "S2.w0", "prelie_s2", "operator", lambda alpha: _op("prelie_s2", {"e3": _lin((alpha, "e3"))}, 0),
    params=("alpha",), samples=tuple({"alpha": a} for a in SAMPLE_WITH_ZERO), weight=Fraction(0),
    index=lambda alpha: 1 if alpha == 0 else 0,
    lemma9=lambda alpha: ("c1", [["e3"], ["e1", "e2"]], {"e3": _lin((alpha, "e3"))})))


def _jordan_spec(n: int) -> str:
    return "jordan_bilinear:" + ",".join(["1"] + ["1" if k % 2 == 0 else "-1" for k in range(2 * n - 2)])


def _jordan_nonsplit(n: int) -> RBOperator:
    """Weight-2 operator with form (1, 1, -1, 1, -1, ...) so every square root is rational.

    Matrix in the basis 1, e1, ..., e_{2n-1}: entry (0,0) = -3, (0,1) = 1,
    (1,0) = -1, diagonal -1 elsewhere, and -1 at (i, i+1) and (i+1, i) for
    even i from 2 to 2n-2.  Entry (i, k) is the coefficient of basis k in
    the image of basis i.
    """
    spec = _jordan_spec(n)
    A = _algebra(spec)
    d = 2 * n
    rows = [[Fraction(0)] * d for _ in range(d)]
    rows[0][0], rows[0][1], rows[1][0] = Fraction(-3), Fraction(1), Fraction(-1)
    for j in range(1, d):
        rows[j][j] = Fraction(-1)
    for i in range(2, d - 1, 2):
        rows[i][i + 1] = Fraction(-1)
        rows[i + 1][i] = Fraction(-1)
    return RBOperator.checked(A, operator_from_rows(A, rows), 2)


_register(CatalogEntry(
    "Jordan.nonsplit", lambda n: _jordan_spec(n), "operator", _jordan_nonsplit,
    params=("n",), samples=({"n": 2}, {"n": 3}, {"n": 4}), valid=lambda n: n >= 2, weight=Fraction(2), splitting=False,
    note="bilinear form fixed to (1, 1, -1, 1, -1, ...)"))
_register(CatalogEntry(
    "Jordan3.w0", "jordan_bilinear:1,-1", "operator", lambda: _op("jordan_bilinear:1,-1", {"e2": "-1-e1"}, 0),
    weight=Fraction(0), index=2))
_register(CatalogEntry(
    "Jordan4.w0", "jordan_bilinear:1,1,-1", "operator",
    lambda: _op("jordan_bilinear:1,1,-1", {"1": "-e1-e3", "e1": "1-e2", "e2": "e1+e3", "e3": "-1+e2"}, 0),
    weight=Fraction(0), index=3, note="found by exhaustive search over entries in {-1, 0, 1}"))

_CAYLEY_B = ["e11", "e12", "e21", "e22"]
_CAYLEY_C = ["ve11", "ve12", "ve21", "ve22"]
_register(CatalogEntry(
    "Cayley.M4ext", "split_octonions", "operator",
    lambda: build_lemma9(_algebra("split_octonions"), "h", [_CAYLEY_B, _CAYLEY_C], ["e12", "0", "-e11", "0"]),
    weight=Fraction(0), index=3, note="the 2 x 2 index-3 operator, zero on the second copy"))
_register(CatalogEntry(
    "M2+M2.w0.pair", "matrix:2+matrix:2", "operator",
    lambda: build_lemma9(_algebra("matrix:2+matrix:2"), "i",
                         [["e11", "e12", "e21", "e22"], ["e11'", "e12'", "e21'", "e22'"]],
                         ops=[["0", "0", "e12", "0"], ["0", "0", "e12'", "0"]]),
    weight=Fraction(0), index=2))


# -- tensors ------------------------------------------------------------------

def _tensor(spec: str, terms) -> Tensor2:
    return Tensor2.from_terms(_algebra(spec), terms)


def _skew_terms(pairs):
    out = []
    for c, a, b in pairs:
        out += [(c, a, b), (-c, b, a)]
    return out


_SKEW_A = {
    "A1": [(1, "e32", "e31")],
    "A2": [(1, "e11", "e12"), (1, "e13", "e12-e21"), (1, "e11+e22", "e23")],
    "A3": [(1, "e22", "e23")],
    "A4": [(1, "e13", "e12-e21"), (1, "e11+e22", "e23")],
    "A5": [(1, "e11+e22", "e23"), (1, "e21", "e13")],
    "A6": [(1, "e11+e33", "e23"), (1, "e11", "e13")],
    "A7": [(1, "e13", "e21"), (1, "e33", "e23")],
    "A8": [(1, "e11+e33", "e23")],
}
for _name, _pairs in _SKEW_A.items():
    _register(CatalogEntry(
        f"M3.aybe.{_name}", "matrix:3", "aybe", functools.partial(_tensor, "matrix:3", _skew_terms(_pairs)),
        weight=Fraction(0), skew=True))

_M2_AYBE = {
    "1": [(1, "e11+e22", "e12")],
    "2": [(1, "e12", "e12")],
    "3": [(1, "e22", "e12")],
    "4": [(1, "e11", "e12"), (-1, "e12", "e11")],
}
for _name, _terms in _M2_AYBE.items():
    _register(CatalogEntry(
        f"M2.aybe.{_name}", "matrix:2", "aybe", functools.partial(_tensor, "matrix:2", _terms),
        weight=Fraction(0), skew=_name == "4"))


def _shift_tensor(n: int) -> Tensor2:
    terms = []
    for i in range(1, n):
        for j in range(i, n):
            block = "+".join(f"e{i + k}{j + 1 + k}" for k in range(n - j))
            terms += [(1, f"e{j}{i}", block), (-1, block, f"e{j}{i}")]
    return _tensor(f"matrix:{n}", terms)


_register(CatalogEntry(
    "Mn.aybe.shift", lambda n: f"matrix:{n}", "aybe", _shift_tensor,
    params=("n",), samples=tuple({"n": n} for n in range(2, 6)), valid=lambda n: 2 <= n <= 9,
    weight=Fraction(0), skew=True, index=lambda n: 2 * n - 1,
    note="its operator is the maximal-index operator Mn.maxrb"))
_register(CatalogEntry(
    "sl2.cybe.skew", "sl2", "cybe", lambda: _tensor("sl2", [(1, "e", "h"), (-1, "h", "e")]),
    weight=Fraction(0), skew=True, images=lambda: {"e": "0", "f": "4*h", "h": "-8*e"}))
_register(CatalogEntry(
    "sl2.cybe.casimir", "sl2", "cybe",
    lambda alpha: _tensor("sl2", [(alpha, "h", "e"), (-alpha, "e", "h"), (Fraction(1, 4), "h", "h"), (1, "e", "f")]),
    params=("alpha",), samples=tuple({"alpha": Fraction(a)} for a in (0, 1, 2, -1, Fraction(1, 2))),
    weight=Fraction(-4), skew=False,
    images=lambda alpha: {"e": "0", "h": _lin((2, "h"), (8 * alpha, "e")), "f": _lin((4, "f"), (-4 * alpha, "h"))}))


# -- access ---------------------------------------------------------------------

def catalog_list() -> list[dict]:
    return [e.meta() for e in _ENTRIES.values()]


def catalog_entry(entry_id: str) -> CatalogEntry:
    try:
        return _ENTRIES[entry_id]
    except KeyError:
        raise PreconditionError(f"unknown catalog id {entry_id!r}") from None


def _params(entry: CatalogEntry, params: Mapping) -> dict:
    unknown = set(params) - set(entry.params)
    if unknown:
        raise PreconditionError(f"{entry.id} has no parameter(s) {sorted(unknown)}")
    full = dict(entry.samples[0]) if entry.samples else {}
    full.update(params)
    missing = [p for p in entry.params if p not in full]
    if missing:
        raise PreconditionError(f"{entry.id} needs parameter(s) {missing}")
    out = {}
    for k in entry.params:
        v = full[k]
        out[k] = int(v) if k in ("n", "s") else as_rational(v)
    if entry.valid is not None and not entry.valid(**out):
        raise PreconditionError(f"parameters {out} outside the domain of {entry.id}")
    return out


def catalog_get(entry_id: str, **params):
    """Instantiate an entry: an :class:`RBOperator` or a :class:`Tensor2`."""
    entry = catalog_entry(entry_id)
    return entry.build(**_params(entry, params))


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _operator_checks(rep: Report, entry: CatalogEntry, R: RBOperator, params: Mapping) -> None:
    A = R.algebra
    lam = R.weight
    rep.add("verify_rb", _status(verify_rb(A, R, lam)))
    rep.add("verify_rb_reference", _status(verify_rb_reference(A, R, lam)))
    expected = entry.resolve(entry.weight, params)
    if expected is not None:
        rep.add("weight", _status(lam == expected), f"{format_rational(lam)} vs {format_rational(expected)}")
    index = entry.resolve(entry.index, params)
    if index is not None:
        nil, got = nilpotency_index(R)
        ok = (not nil) if index == 0 else (nil and got == index)
        rep.add("nilpotency_index", _status(ok), f"got {got if nil else 'not nilpotent'}, expected {index or 'not nilpotent'}")
    split = entry.resolve(entry.splitting, params)
    if split is not None:
        rep.add("is_splitting", _status(is_splitting(R) == split))
    if entry.skew is not None:
        rep.add("is_skew_operator", _status(is_skew_operator(R, trace_form(A)) == entry.skew))
    if entry.lemma9 is not None:
        variant, parts, data = entry.lemma9(**params)
        try:
            if variant == "i":
                built = build_lemma9(A, variant, parts, ops=data)
            else:
                built = build_lemma9(A, variant, parts, data)
            rep.add(f"lemma9_{variant}", _status(built.op == R.op))
        except PreconditionError as exc:
            rep.add(f"lemma9_{variant}", "fail", str(exc))
    P = phi(R)
    rep.add("phi_involution", _status(phi(P) == R))
    for sign in ("plus", "minus"):
        rep.add(f"verify_rb_{sign}", _status(verify_rb(plus_minus(A, sign), R.matrix, lam)))
    if A.unit is not None:
        if lam != 0 and A.flag("associative"):
            sp = spectrum_profile(R)
            rep.checks.extend(sp.checks)
        ur = unital_report(R)
        rep.checks.extend(c for c in ur.checks if c.status != "n/a")


def _tensor_checks(rep: Report, entry: CatalogEntry, r: Tensor2, params: Mapping) -> None:
    A = r.algebra
    if entry.skew is not None:
        rep.add("is_skew", _status(is_skew(r) == entry.skew))
    if entry.kind == "aybe":
        rep.add("aybe_check", _status(aybe_check(A, r, 0)))
        R = aybe_to_rb(A, r, 0)
        rep.add("operator_verified", _status(R.verified and verify_rb_reference(A, R, 0)))
        if entry.skew:
            rep.add("is_skew_operator", _status(is_skew_operator(R, trace_form(A))))
            rep.add("cybe_on_commutator", _status(cybe_check(plus_minus(A, "minus"), Tensor2(plus_minus(A, "minus"), r.coeffs))))
        index = entry.resolve(entry.index, params)
        if index is not None:
            nil, got = nilpotency_index(R)
            rep.add("nilpotency_index", _status(nil and got == index), f"got {got}")
    else:
        rep.add("cybe_check", _status(cybe_check(A, r)))
        rep.add("invariance_check", _status(invariance_check(A, r)))
        R, lam = cybe_to_rb(A, r)
        expected = entry.resolve(entry.weight, params)
        rep.add("weight", _status(lam == expected), f"{format_rational(lam)} vs {format_rational(expected)}")
        if entry.images is not None:
            want = LinearOperator.from_map(A, entry.images(**params))
            rep.add("images", _status(want == R.op), ", ".join(f"{k} -> {v}" for k, v in R.describe().items()))


def catalog_selftest(entry_id: str, params: Mapping | None = None) -> Report:
    """Run every recorded expectation of an entry at one parameter point."""
    entry = catalog_entry(entry_id)
    p = _params(entry, params or {})
    label = ", ".join(f"{k}={format_rational(v) if isinstance(v, Fraction) else v}" for k, v in p.items())
    rep = Report(f"{entry_id}" + (f" [{label}]" if label else ""))
    try:
        obj = entry.build(**p)
    except PreconditionError as exc:
        rep.add("build", "fail", str(exc))
        return rep
    rep.data["object"] = repr(obj)
    if isinstance(obj, RBOperator):
        _operator_checks(rep, entry, obj, p)
    else:
        _tensor_checks(rep, entry, obj, p)
    return rep
