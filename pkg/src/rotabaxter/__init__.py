"""Exact toolkit for Rota-Baxter operators and Yang-Baxter solutions."""

from .algebra import Algebra, Element, LinearOperator, PreconditionError, build_algebra
from .catalog import catalog_get, catalog_list, catalog_selftest
from .exact import RatMatrix, format_rational, parse_rational
from .kernels import BACKEND
from .rb import NotRotaBaxterError, RBOperator, max_rb_mat, nilpotency_index, verify_rb
from .ybe import Tensor2, aybe_check, aybe_to_rb, cybe_check, cybe_to_rb, rb_to_aybe

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "Element",
    "LinearOperator",
    "PreconditionError",
    "build_algebra",
    "catalog_get",
    "catalog_list",
    "catalog_selftest",
    "RatMatrix",
    "format_rational",
    "parse_rational",
    "BACKEND",
    "NotRotaBaxterError",
    "RBOperator",
    "max_rb_mat",
    "nilpotency_index",
    "verify_rb",
    "Tensor2",
    "aybe_check",
    "aybe_to_rb",
    "cybe_check",
    "cybe_to_rb",
    "rb_to_aybe",
]
