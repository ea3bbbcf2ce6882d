import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import frozen_values as fv
from rotabaxter.algebra import LinearOperator, PreconditionError, build_algebra, matrix_algebra, plus_minus
from rotabaxter.catalog import catalog_get, catalog_list
from rotabaxter.exact import RatMatrix, format_rational
from rotabaxter.rb import max_rb_mat, verify_rb
from rotabaxter.ybe import (
    Tensor2,
    aybe_check,
    aybe_operator,
    aybe_to_rb,
    cybe_check,
    cybe_operator,
    cybe_to_rb,
    flip,
    invariance_check,
    is_skew,
    is_skew_operator,
    rb_to_aybe,
    solve_weight,
    tau,
    trace_form,
)

SL2 = build_algebra("sl2")


def t(spec_or_alg, terms):
    A = build_algebra(spec_or_alg) if isinstance(spec_or_alg, str) else spec_or_alg
    return Tensor2.from_terms(A, terms)


def images(R):
    A = R.algebra
    out = {}
    for i, name in enumerate(A.basis_names):
        img = R.image(i)
        out[name] = {A.basis_names[k]: format_rational(v) for k, v in img.support().items()}
    return out


def catalog_tensors(kind):
    out = []
    for e in catalog_list():
        if e["kind"] == kind:
            for s in e["samples"]:
                out.append(pytest.param(catalog_get(e["id"], **s), id=f"{e['id']}{s}"))
    return out


AYBE_TENSORS = catalog_tensors("aybe")


def random_tensor(A, rng, density=0.2):
    d = A.dim
    vals = [Fraction(p, q) for p in range(-2, 3) for q in (1, 2) if p]
    return Tensor2(A, [[rng.choice(vals) if rng.random() < density else Fraction(0) for _ in range(d)] for _ in range(d)])


# -- switch map ----------------------------------------------------------------

def test_skew_examples():
    r = t(SL2, [(1, "e", "h"), (-1, "h", "e")])
    assert is_skew(r) and r + flip(r) == Tensor2.zero(SL2)
    hh = t(SL2, [(1, "h", "h")])
    assert not is_skew(hh)
    assert tau(hh) == hh.scale(-1)


@given(st.data())
def test_tau_involution(data):
    A = matrix_algebra(2)
    r = random_tensor(A, random.Random(data.draw(st.integers(0, 10**6))), 0.4)
    assert tau(tau(r)) == r
    assert flip(flip(r)) == r
    assert is_skew(r - flip(r))


# -- associative equation ---------------------------------------------------------

def test_zero_tensor_solves_everything():
    for spec in ("matrix:2", "matrix:3", "grassmann:2"):
        A = build_algebra(spec)
        for w in (0, 1, Fraction(-3, 2)):
            assert aybe_check(A, Tensor2.zero(A), w)


def test_aybe_rejects_non_associative():
    with pytest.raises(PreconditionError):
        aybe_check(SL2, Tensor2.zero(SL2))


@pytest.mark.parametrize("r", AYBE_TENSORS)
def test_catalog_tensors_solve_aybe(r):
    assert aybe_check(r.algebra, r, 0)
    R = aybe_to_rb(r.algebra, r)
    assert R.verified and R.weight == 0
    assert rb_to_aybe(R) == r


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_shift_tensor_solves_aybe(n):
    r = catalog_get("Mn.aybe.shift", n=n)
    assert is_skew(r) and aybe_check(r.algebra, r, 0)


def test_e12_e12_gives_m1():
    A = matrix_algebra(2)
    R = aybe_to_rb(A, t(A, [(1, "e12", "e12")]))
    assert R.describe() == {"e21": "e12"}
    assert R == catalog_get("M2w0.M1")
    assert rb_to_aybe(catalog_get("M2w0.M1")) == t(A, [(1, "e12", "e12")])
    assert rb_to_aybe(catalog_get("M2w0.M1")).matrix_indices() == {(1, 2, 1, 2): Fraction(1)}


def test_a3_expansion():
    r = catalog_get("M3.aybe.A3")
    A = r.algebra
    R = aybe_to_rb(A, r)
    e22, e23 = A["e22"], A["e23"]
    for x in A.basis_elements():
        assert R(x) == e22 * x * e23 - e23 * x * e22


@pytest.mark.parametrize("n", [2, 3, 4])
def test_shift_tensor_gives_maximal_operator(n):
    R = aybe_to_rb(matrix_algebra(n), catalog_get("Mn.aybe.shift", n=n))
    assert (R.op == max_rb_mat(n).op) is fv.SHIFT_TENSOR_GIVES_MAXRB[n]


def test_zero_operator_gives_zero_tensor():
    A = matrix_algebra(3)
    assert rb_to_aybe(LinearOperator.zero(A)).is_zero()
    with pytest.raises(PreconditionError):
        rb_to_aybe(LinearOperator.zero(SL2))


def test_aybe_to_rb_rejects_non_solution():
    A = matrix_algebra(2)
    r = t(A, [(1, "e11", "e11")])
    assert not aybe_check(A, r)
    with pytest.raises(PreconditionError):
        aybe_to_rb(A, r)


def _equivalence_sample(n, count, seed):
    A = matrix_algebra(n)
    rng = random.Random(seed)
    base = [p.values[0] for p in AYBE_TENSORS if p.values[0].algebra.dim == n * n]
    out = []
    for k in range(count):
        if k % 3 == 0:
            out.append(random_tensor(A, rng, 0.1))
        elif k % 3 == 1:
            out.append(rng.choice(base).scale(rng.choice([-2, Fraction(1, 2), 3])))
        else:
            out.append(rng.choice(base) + random_tensor(A, rng, 0.05))
    return A, out


@pytest.mark.parametrize("n, seed", [(2, 11), (3, 12)])
def test_tensor_operator_equivalence(n, seed):
    A, sample = _equivalence_sample(n, 60, seed)
    solutions = 0
    for r in sample:
        sol = aybe_check(A, r, 0)
        assert sol == verify_rb(A, aybe_operator(A, r), 0)
        solutions += sol
        assert rb_to_aybe(aybe_operator(A, r)) == r
    assert 0 < solutions < len(sample)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_operator_round_trip(n):
    rng = random.Random(n)
    A = matrix_algebra(n)
    for _ in range(10):
        d = A.dim
        m = RatMatrix([[rng.choice([0, 0, 0, 1, -1, Fraction(1, 2)]) for _ in range(d)] for _ in range(d)])
        op = LinearOperator(A, m)
        assert aybe_operator(A, rb_to_aybe(op)) == op


@pytest.mark.parametrize("r", [p for p in AYBE_TENSORS if p.id.startswith("M3.aybe")])
def test_skew_solutions_give_skew_operators(r):
    A = r.algebra
    R = aybe_to_rb(A, r)
    assert is_skew_operator(R, trace_form(A))
    L = plus_minus(A, "minus")
    assert cybe_check(L, Tensor2(L, r.coeffs))


def test_m2_skew_solution_solves_cybe_on_commutator_algebra():
    r = catalog_get("M2.aybe.4")
    L = plus_minus(r.algebra, "minus")
    assert cybe_check(L, Tensor2(L, r.coeffs))


def test_is_skew_operator_examples():
    A = matrix_algebra(2)
    form = trace_form(A)
    assert not is_skew_operator(catalog_get("M2w0.M2"), form)
    assert is_skew_operator(LinearOperator.zero(A), form)
    for k in range(1, 9):
        assert is_skew_operator(catalog_get(f"M3.skew.R{k}"), trace_form(matrix_algebra(3)))
    with pytest.raises(PreconditionError):
        is_skew_operator(LinearOperator.zero(A), RatMatrix.zeros(4))


NONZERO_WEIGHT_MATRIX_OPS = [
    pytest.param(catalog_get(e["id"], **s), id=f"{e['id']}{s}")
    for e in catalog_list()
    if e["kind"] == "operator"
    for s in e["samples"]
    if catalog_get(e["id"], **s).weight != 0 and catalog_get(e["id"], **s).algebra.meta.get("matrix_n")
]


@pytest.mark.parametrize("R", NONZERO_WEIGHT_MATRIX_OPS)
def test_weighted_tensors_negated_convention(R):
    A = R.algebra
    r = rb_to_aybe(R)
    lam = -R.weight
    assert aybe_check(A, r, lam)
    P = aybe_to_rb(A, r, lam)
    assert P.weight == R.weight and P.op == R.op
    assert P.tags["weight_convention"] == "negated"


def test_weighted_non_solution():
    A = matrix_algebra(2)
    r = rb_to_aybe(catalog_get("M2w1.M1"))
    assert not aybe_check(A, r, 1)
    with pytest.raises(PreconditionError):
        aybe_to_rb(A, r, 1)


# -- classical equation ------------------------------------------------------------

def test_example5():
    r = catalog_get("sl2.cybe.skew")
    assert cybe_check(SL2, r) and is_skew(r) and invariance_check(SL2, r)
    R, w = cybe_to_rb(SL2, r)
    assert images(R) == fv.EXAMPLE5_IMAGES
    assert format_rational(w) == fv.EXAMPLE5_WEIGHT and R.weight == 0


@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_example6(alpha):
    r = catalog_get("sl2.cybe.casimir", alpha=alpha)
    assert cybe_check(SL2, r) and invariance_check(SL2, r) and not is_skew(r)
    R, w = cybe_to_rb(SL2, r)
    expected_images, expected_weight = fv.EXAMPLE6[alpha]
    assert images(R) == expected_images
    assert format_rational(w) == expected_weight == "-4"
    assert R.verified


def test_example6_alpha_one_literal_images():
    R, _ = cybe_to_rb(SL2, catalog_get("sl2.cybe.casimir", alpha=1))
    assert R(SL2["h"]) == SL2["h"].scale(2) + SL2["e"].scale(8)
    assert R(SL2["f"]) == (SL2["f"] - SL2["h"]).scale(4)
    assert R(SL2["e"]).is_zero()


def test_cybe_e_tensor_e_is_a_solution():
    # every bracket involves [e, e] = 0
    assert cybe_check(SL2, t(SL2, [(1, "e", "e")]))


def test_cybe_negative_example():
    r = t(SL2, [(1, "h", "e")])
    assert not cybe_check(SL2, r)
    with pytest.raises(PreconditionError):
        cybe_to_rb(SL2, r)


def test_cybe_rejects_non_lie():
    with pytest.raises(PreconditionError):
        cybe_check(matrix_algebra(2), Tensor2.zero(matrix_algebra(2)))


def test_invariance_examples():
    assert invariance_check(SL2, t(SL2, [(1, "e", "f"), (-1, "f", "e")]))
    assert not invariance_check(SL2, t(SL2, [(1, "h", "h")]))


def test_zero_tensor_operator():
    R, w = cybe_to_rb(SL2, Tensor2.zero(SL2))
    assert R.op.is_zero() and w == 0
    assert solve_weight(SL2, LinearOperator.zero(SL2)) == 0


def test_cybe_operator_uses_killing_form():
    op = cybe_operator(SL2, t(SL2, [(1, "h", "h")]))
    assert op(SL2["h"]) == SL2["h"].scale(8)


def test_solve_weight():
    assert solve_weight(SL2, catalog_get("sl2.w1.split", alpha=1)) == 1
    A = matrix_algebra(2)
    assert solve_weight(A, LinearOperator.identity(A).scale(3)) == -3
    assert solve_weight(A, LinearOperator.identity(A)) == -1
    assert solve_weight(A, LinearOperator.from_map(A, {"e11": "e12"})) is None
