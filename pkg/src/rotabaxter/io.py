"""JSON documents for algebras, operators, tensors and reports.

Every rational is written as a canonical ``"p/q"`` string (``"p"`` when the
denominator is 1) and every document carries ``"schema": 1``.  Serialization
is deterministic: keys are sorted and no timestamps are emitted, so exporting
the same value twice gives the same bytes.

An operator or tensor names its algebra either inline (a full algebra
document) or by reference: a path to an algebra file or a build spec such as
``"matrix:3"`` or ``"matrix:2+matrix:2"``.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any, Mapping

from .algebra import Algebra, LinearOperator, PreconditionError, build_algebra, direct_sum
from .exact import RatMatrix, as_rational, format_rational, parse_rational
from .rb import RBOperator, Report, verify_rb
from .ybe import Tensor2

__all__ = [
    "SCHEMA",
    "FormatError",
    "dumps",
    "loads",
    "resolve_algebra",
    "algebra_to_doc",
    "algebra_from_doc",
    "operator_to_doc",
    "operator_from_doc",
    "tensor_to_doc",
    "tensor_from_doc",
    "report_to_doc",
    "catalog_export",
    "read_document",
    "write_document",
    "load_algebra",
    "load_operator",
    "load_tensor",
]

SCHEMA = 1


class FormatError(PreconditionError):
    """A document is malformed or does not match its declared type."""


def _q(x) -> str:
    return format_rational(x)


def _grid(m: RatMatrix) -> list[list[str]]:
    return [[_q(v) for v in row] for row in m.tolist()]


def _parse_q(text, where: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise FormatError(f"{where}: expected a rational string, got {text!r}")
    try:
        return parse_rational(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"{where}: bad rational {text!r}") from exc


def _parse_grid(rows, n: int, where: str) -> list[list[Fraction]]:
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise FormatError(f"{where}: expected a {n} x {n} grid")
    return [[_parse_q(v, where) for v in r] for r in rows]


def jsonable(value: Any) -> Any:
    """Recursively turn Fractions into ``"p/q"`` and tuples into lists."""
    if isinstance(value, Fraction):
        return _q(value)
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def dumps(doc: Mapping) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc.msg} at line {exc.lineno}") from exc
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    if doc.get("schema") != SCHEMA:
        raise FormatError(f"unsupported schema {doc.get('schema')!r}")
    return doc


def read_document(path: str) -> dict:
    try:
        with open(path, encoding="ascii") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path} is not ASCII text") from exc


def write_document(doc: Mapping, path: str | None) -> str:
    text = dumps(doc)
    if path and path != "-":
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    return text


# -- algebras -----------------------------------------------------------------

def _build_spec(spec: str) -> Algebra:
    if "+" in spec:
        left, right = spec.split("+", 1)
        A = direct_sum(_build_spec(left), _build_spec(right))
        A.meta["spec"] = spec
        return A
    return build_algebra(spec)


def _spec_of(A: Algebra) -> str | None:
    for cand in (A.meta.get("spec"), A.name):
        if not cand:
            continue
        try:
            B = _build_spec(cand)
        except (PreconditionError, ValueError):
            continue
        if B.same_structure(A) and B.basis_names == A.basis_names:
            return cand
    return None


def algebra_to_doc(A: Algebra) -> dict:
    doc = {
        "schema": SCHEMA,
        "type": "algebra",
        "dim": A.dim,
        "basis_names": list(A.basis_names),
        "structure": [[[_q(v) for v in vec] for vec in plane] for plane in A.cube()],
        "unit": None if A.unit is None else [_q(v) for v in A.unit.coords],
    }
    spec = _spec_of(A)
    if spec is not None:
        doc["spec"] = spec
    return doc


def algebra_from_doc(doc: Mapping) -> Algebra:
    if doc.get("type", "algebra") != "algebra":
        raise FormatError(f"expected an algebra document, got {doc.get('type')!r}")
    try:
        d = int(doc["dim"])
        names = [str(n) for n in doc["basis_names"]]
        raw = doc["structure"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"algebra document is missing or has a bad field: {exc}") from exc
    if d < 1 or len(names) != d:
        raise FormatError("algebra dimension and basis names disagree")
    if not isinstance(raw, list) or len(raw) != d:
        raise FormatError("structure must be dim x dim x dim")
    cube = [_parse_grid(plane, d, "structure") for plane in raw]
    unit = doc.get("unit")
    unit_coords = None if unit is None else [_parse_q(v, "unit") for v in unit]
    if unit_coords is not None and len(unit_coords) != d:
        raise FormatError("unit has the wrong length")
    A = Algebra.from_cube(cube, basis_names=names, unit=unit_coords, name="raw", detect_unit=unit is None)
    spec = doc.get("spec")
    if spec is not None:
        B = _build_spec(str(spec))
        if not (B.same_structure(A) and B.basis_names == A.basis_names):
            raise FormatError(f"structure does not match the declared spec {spec!r}")
        return B
    return A


def resolve_algebra(ref, base_dir: str | None = None) -> Algebra:
    """An algebra from an inline document, a file path or a build spec."""
    if isinstance(ref, Algebra):
        return ref
    if isinstance(ref, Mapping):
        return algebra_from_doc(ref)
    if not isinstance(ref, str) or not ref:
        raise FormatError(f"bad algebra reference {ref!r}")
    for path in (ref, os.path.join(base_dir, ref) if base_dir else None):
        if path and os.path.isfile(path):
            return algebra_from_doc(read_document(path))
    return _build_spec(ref)


def load_algebra(ref) -> Algebra:
    return resolve_algebra(ref)


# -- operators ----------------------------------------------------------------

def operator_to_doc(R, weight=None, inline: bool = True) -> dict:
    if isinstance(R, RBOperator):
        A, m, w, verified = R.algebra, R.matrix, R.weight, R.verified
    elif isinstance(R, LinearOperator):
        A, m = R.algebra, R.matrix
        w = Fraction(0) if weight is None else as_rational(weight)
        verified = verify_rb(A, R, w)
    else:
        raise TypeError("expected an RBOperator or LinearOperator")
    if weight is not None and as_rational(weight) != w:
        w = as_rational(weight)
        verified = verify_rb(A, m, w)
    spec = _spec_of(A)
    return {
        "schema": SCHEMA,
        "type": "operator",
        "algebra": algebra_to_doc(A) if inline or spec is None else spec,
        "weight": _q(w),
        "matrix": _grid(m),
        "verified": bool(verified),
    }


def operator_from_doc(doc: Mapping, algebra: Algebra | None = None, base_dir: str | None = None) -> RBOperator:
    """Load an operator; its ``verified`` flag is recomputed, never trusted."""
    if doc.get("type", "operator") != "operator":
        raise FormatError(f"expected an operator document, got {doc.get('type')!r}")
    if algebra is None:
        if "algebra" not in doc:
            raise FormatError("operator document names no algebra")
        algebra = resolve_algebra(doc["algebra"], base_dir)
    if "matrix" not in doc:
        raise FormatError("operator document has no matrix")
    m = RatMatrix(_parse_grid(doc["matrix"], algebra.dim, "matrix"))
    w = _parse_q(doc.get("weight", "0"), "weight")
    op = LinearOperator(algebra, m)
    return RBOperator(op, w, verify_rb(algebra, op, w))


def load_operator(path: str, algebra: Algebra | None = None) -> RBOperator:
    return operator_from_doc(read_document(path), algebra, os.path.dirname(os.path.abspath(path)))


# -- tensors ------------------------------------------------------------------

def tensor_to_doc(r: Tensor2, inline: bool = True, four_index: bool = False) -> dict:
    A = r.algebra
    spec = _spec_of(A)
    doc = {
        "schema": SCHEMA,
        "type": "tensor",
        "algebra": algebra_to_doc(A) if inline or spec is None else spec,
    }
    if four_index:
        doc["entries"] = {",".join(map(str, k)): _q(v) for k, v in sorted(r.matrix_indices().items())}
    else:
        doc["coeffs"] = _grid(r.coeffs)
    return doc


def _index_key(key: str) -> tuple:
    try:
        parts = tuple(int(t) for t in key.strip().strip("()").split(","))
    except ValueError as exc:
        raise FormatError(f"bad four-index key {key!r}") from exc
    if len(parts) != 4:
        raise FormatError(f"four-index key {key!r} needs four indices")
    return parts


def tensor_from_doc(doc: Mapping, algebra: Algebra | None = None, base_dir: str | None = None) -> Tensor2:
    """Load a tensor; the four-index ``entries`` form is normalized to a grid."""
    if doc.get("type", "tensor") != "tensor":
        raise FormatError(f"expected a tensor document, got {doc.get('type')!r}")
    if algebra is None:
        if "algebra" not in doc:
            raise FormatError("tensor document names no algebra")
        algebra = resolve_algebra(doc["algebra"], base_dir)
    if "coeffs" in doc:
        return Tensor2(algebra, _parse_grid(doc["coeffs"], algebra.dim, "coeffs"))
    if "entries" in doc and isinstance(doc["entries"], Mapping):
        entries: dict = {}
        for k, v in doc["entries"].items():
            key = _index_key(k)
            entries[key] = entries.get(key, Fraction(0)) + _parse_q(v, f"entry {k}")
        return Tensor2.from_matrix_indices(algebra, entries)
    raise FormatError("tensor document needs 'coeffs' or 'entries'")


def load_tensor(path: str, algebra: Algebra | None = None) -> Tensor2:
    return tensor_from_doc(read_document(path), algebra, os.path.dirname(os.path.abspath(path)))


# -- reports and catalog --------------------------------------------------------

def report_to_doc(rep: Report | list[Report]) -> dict:
    if isinstance(rep, Report):
        return {"schema": SCHEMA, "type": "report", **jsonable(rep.to_dict())}
    items = [jsonable(r.to_dict()) for r in rep]
    return {"schema": SCHEMA, "type": "reports", "ok": all(r["ok"] for r in items), "reports": items}


def catalog_export(entry_id: str, inline: bool = True, **params) -> dict:
    """The operator or tensor document of an instantiated catalog entry."""
    from .catalog import _params, catalog_entry

    entry = catalog_entry(entry_id)
    p = _params(entry, params)
    obj = entry.build(**p)
    doc = operator_to_doc(obj, inline=inline) if isinstance(obj, RBOperator) else tensor_to_doc(obj, inline=inline)
    doc["source"] = {"catalog": entry_id, "params": jsonable(p)}
    return doc
