from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen_values as fv
from rotabaxter.algebra import (
    LinearOperator,
    PreconditionError,
    build_algebra,
    direct_sum,
    matrix_algebra,
    plus_minus,
    power,
)
from rotabaxter.catalog import _params, catalog_entry, catalog_get, catalog_list
from rotabaxter.exact import RatMatrix, Span, mat_reduce
from rotabaxter.rb import (
    BudgetExceededError,
    HypothesisError,
    NotRotaBaxterError,
    RBOperator,
    build_lemma9,
    build_left_mult,
    build_splitting,
    build_triangular,
    check_faulhaber,
    check_stirling,
    conjugate,
    derivation_check,
    grid_search_rb,
    induced_on_ideal,
    is_splitting,
    max_rb_mat,
    mybe_check,
    nilpotency_index,
    operator_from_rows,
    phi,
    rb_from_derivation,
    rb_witness,
    rescale,
    sf_conditions,
    spectrum_profile,
    unital_report,
    verify_rb,
    verify_rb_reference,
)
from strategies import inner_automorphism, invertible_matrices, nonzero_rationals


def catalog_operators(pred=lambda e, R: True):
    out = []
    for e in catalog_list():
        if e["kind"] != "operator":
            continue
        for s in e["samples"]:
            R = catalog_get(e["id"], **s)
            if R.dim <= 16 and pred(e, R):
                out.append(pytest.param(R, id=f"{e['id']}{s}"))
    return out


ALL_OPERATORS = catalog_operators()


# -- verify_rb ---------------------------------------------------------------

@pytest.mark.parametrize("spec", ["matrix:2", "sl2", "grassmann:3", "field_sum:2", "kaplansky_k3"])
@pytest.mark.parametrize("weight", [0, 1, Fraction(-2, 3)])
def test_trivial_operators(spec, weight):
    A = build_algebra(spec)
    assert verify_rb(A, LinearOperator.zero(A), weight)
    assert verify_rb(A, LinearOperator.identity(A).scale(-weight), weight)
    assert verify_rb_reference(A, LinearOperator.identity(A).scale(-weight), weight)


def test_identity_is_not_weight_zero():
    A = matrix_algebra(2)
    assert not verify_rb(A, LinearOperator.identity(A), 0)
    assert rb_witness(A, LinearOperator.identity(A), 0) is not None


def test_checked_constructor_refuses():
    A = matrix_algebra(2)
    with pytest.raises(NotRotaBaxterError):
        RBOperator.checked(A, LinearOperator.identity(A), 0)
    assert not RBOperator.unchecked(A, LinearOperator.identity(A), 0).verified


# -- phi, rescale, conjugate ---------------------------------------------------

def test_phi_of_zero_is_minus_identity():
    A = matrix_algebra(2)
    R = RBOperator.checked(A, LinearOperator.zero(A), 1)
    assert phi(R).op == -LinearOperator.identity(A)


def test_phi_of_m2_weight_one():
    P = phi(catalog_get("M2w1.M2"))
    A = P.algebra
    assert P(A["e11"]).is_zero()
    assert P(A["e22"]) == -A["e22"]


def test_phi_swaps_splitting_roles():
    A = build_algebra("grassmann:2")
    R = build_splitting(A, ["1"], ["e1", "e2", "e12"], 1)
    swapped = build_splitting(A, ["e1", "e2", "e12"], ["1"], 1)
    assert phi(R) == swapped


@pytest.mark.parametrize("R", ALL_OPERATORS)
def test_phi_is_an_involution(R):
    P = phi(R)
    assert P.verified and P.weight == R.weight
    assert phi(P) == R


def test_rescale_jordan_weight_two():
    R = catalog_get("Jordan.nonsplit", n=2)
    assert R.weight == 2
    S = rescale(R, Fraction(1, 2))
    assert S.weight == 1 and verify_rb(S.algebra, S, 1)


@given(nonzero_rationals)
def test_rescale_weight_zero_and_inverse(mu):
    R = catalog_get("M2w0.M4")
    assert rescale(R, mu).weight == 0
    T = catalog_get("M2w1.M1")
    assert rescale(rescale(T, mu), 1 / mu) == T


def test_rescale_by_zero_rejected():
    with pytest.raises(PreconditionError):
        rescale(catalog_get("M2w0.M1"), 0)


def test_conjugate_by_identity_and_transpose():
    R = catalog_get("M2w0.M1")
    A = R.algebra
    assert conjugate(R, LinearOperator.identity(A)) == R
    t = LinearOperator.from_map(A, {"e11": "e11", "e12": "e21", "e21": "e12", "e22": "e22"})
    T = conjugate(R, t, anti=True)
    assert T.describe() == {"e12": "e21"}
    assert {k: dict(v) for k, v in fv.M1_TRANSPOSE_CONJUGATE.items()} == {"e12": {"e21": "1"}}
    with pytest.raises(PreconditionError):
        conjugate(R, t)


@pytest.mark.parametrize("entry, params", [("M2w0.M4", {}), ("M2w1.M1", {}), ("M2w1.M5", {"alpha": 1}),
                                           ("Mn.maxrb", {"n": 3}), ("M3.w1.triangular", {}), ("M3.skew.R2", {})])
@settings(max_examples=6)
@given(data=st.data())
def test_conjugation_invariants(entry, params, data):
    R = catalog_get(entry, **params)
    n = R.algebra.meta["matrix_n"]
    g = data.draw(invertible_matrices(n))
    C = conjugate(R, inner_automorphism(R.algebra, g))
    assert C.verified and C.weight == R.weight
    assert nilpotency_index(C) == nilpotency_index(R)
    if R.weight != 0:
        assert is_splitting(C) == is_splitting(R)


# -- constructions -------------------------------------------------------------

def test_splitting_precondition():
    A = matrix_algebra(2)
    with pytest.raises(HypothesisError):
        build_splitting(A, ["e11", "e22"], ["e12", "e21+e11"], 1)
    with pytest.raises(PreconditionError):
        build_splitting(A, ["e11", "e22"], ["e12"], 1)


def test_splitting_grassmann_two():
    A = build_algebra("grassmann:2")
    R = build_splitting(A, ["1"], ["e1", "e2", "e12"], 1)
    assert R.verified and R(A.unit).is_zero()
    assert is_splitting(R)


@pytest.mark.parametrize("alpha", [Fraction(-2), Fraction(1, 2), Fraction(3)])
def test_splitting_sl2(alpha):
    A = build_algebra("sl2")
    R = build_splitting(A, [A["e"] + A["h"].scale(alpha)], ["h", "f"], 1)
    assert R.verified and is_splitting(R)


def test_triangular_sl2_and_matrices():
    A = build_algebra("sl2")
    for k in (0, 1, Fraction(-3, 2)):
        assert build_triangular(A, ["e"], ["h"], ["f"], [[k]], 1).verified
    R = catalog_get("Mn.w1.triangular", n=3, s=0)
    assert is_splitting(R)
    assert catalog_get("Mn.w1.triangular", n=3, s=2).verified


def test_triangular_remark_operator_on_m3():
    A = matrix_algebra(3)
    R = build_triangular(A, ["e31", "e32"], ["e11", "e12", "e21", "e22", "e33"], ["e13", "e23"],
                         ["0", "0", "0", "0", "e22"], 1)
    assert R.op == catalog_get("M3.w1.triangular").op


def test_triangular_rejects_bad_inner_operator():
    A = build_algebra("sl2")
    with pytest.raises(HypothesisError):
        build_triangular(A, ["e", "f"], ["h"], [], [[1]], 0)
    with pytest.raises(HypothesisError):
        build_triangular(A, ["e"], ["h"], ["f"], ["e"], 1)


def test_left_mult():
    A = matrix_algebra(2)
    R = build_left_mult(A, "e12", 0)
    assert (R.matrix @ R.matrix).is_zero()
    S = build_left_mult(A, "-e11", 1)
    assert is_splitting(S)
    m = S.matrix
    assert m @ m + m == RatMatrix.zeros(4, 4)
    assert build_left_mult(A, "0", 3).op.is_zero()
    with pytest.raises(HypothesisError):
        build_left_mult(A, "e11", 1)


def test_lemma9_variant_a_gives_m1():
    A = matrix_algebra(2)
    R = build_lemma9(A, "a", [["e21"], ["e11", "e12", "e22"]], {"e21": "e12"})
    assert R == catalog_get("M2w0.M1")


def test_lemma9_variant_h_extends_by_zero():
    R = catalog_get("M3.w0.glued")
    A = R.algebra
    for i in range(1, 4):
        assert R(A[f"e{i}3"]).is_zero() and R(A[f"e3{i}"]).is_zero()
    assert R(A["e21"]) == -A["e11"] and R(A["e11"]) == A["e12"]
    assert nilpotency_index(R) == (True, 3)


def test_lemma9_variant_i_on_direct_sum():
    A = direct_sum(matrix_algebra(2), matrix_algebra(2))
    R = build_lemma9(A, "i", [["e11", "e12", "e21", "e22"], ["e11'", "e12'", "e21'", "e22'"]],
                     ops=[["0", "0", "e12", "0"], ["0", "0", "e12'", "0"]])
    assert R.verified and R.weight == 0
    assert R(A["e21"]) == A["e12"] and R(A["e21'"]) == A["e12'"]


def test_lemma9_hypothesis_failure():
    A = matrix_algebra(2)
    with pytest.raises(HypothesisError):
        build_lemma9(A, "a", [["e21"], ["e11", "e12", "e22"]], {"e21": "e11+e12"})
    with pytest.raises(PreconditionError):
        build_lemma9(A, "z", [["e21"], ["e11", "e12", "e22"]], {"e21": "e12"})


@pytest.mark.parametrize("entry", [e["id"] for e in catalog_list() if catalog_entry(e["id"]).lemma9])
def test_catalog_lemma9_reconstructions(entry):
    ce = catalog_entry(entry)
    for s in ce.samples:
        variant, parts, data = ce.lemma9(**_params(ce, s))
        target = catalog_get(entry, **s)
        kw = {"ops": data} if variant == "i" else {"op": data}
        assert build_lemma9(target.algebra, variant, parts, **kw).op == target.op


def test_induced_on_ideal_gl2():
    # gl2 = sl2 + span{1}; the sl2 basis e, f, h is e12, e21, e11 - e22
    L = build_algebra("sl2")
    decomposition = [["e12", "e21", "e11-e22"], ["e11+e22"]]

    def project(entry):
        M = catalog_get(entry)
        gl2 = plus_minus(M.algebra, "minus")
        return induced_on_ideal(RBOperator.checked(gl2, M.matrix, 0), 1, decomposition, names=L.basis_names)

    S = project("M2w0.M1")
    assert S.algebra.same_structure(L)
    assert S.describe() == {"f": "e"}
    assert S.matrix == catalog_get("sl2.L5").matrix
    T = project("M2w0.M2")
    assert T.describe() == {"f": "1/2*h"}
    assert rescale(T, 2).matrix == catalog_get("sl2.L4").matrix


def test_induced_on_ideal_block():
    R = catalog_get("M2+M2.w0.pair")
    A = R.algebra
    S = induced_on_ideal(R, 2, [list(A.basis_names[:4]), list(A.basis_names[4:])])
    assert S.matrix == catalog_get("M2w0.M1").matrix


def test_induced_on_ideal_rejects_non_ideal():
    R = catalog_get("M2w0.M1")
    with pytest.raises(HypothesisError):
        induced_on_ideal(R, 1, [["e11", "e12"], ["e21", "e22"]])


# -- nilpotency and the maximal operator ----------------------------------------------

def test_nilpotency_examples():
    A = matrix_algebra(2)
    assert nilpotency_index(LinearOperator.zero(A)) == (True, 1)
    assert nilpotency_index(LinearOperator.identity(A)) == (False, None)
    assert nilpotency_index(max_rb_mat(2)) == (True, 3)
    assert nilpotency_index(max_rb_mat(4)) == (True, 7)


def test_max_rb_mat_small_cases():
    R = max_rb_mat(2)
    A = R.algebra
    assert R(A["e21"]) == -A["e11"] and R(A["e11"]) == A["e12"]
    assert R(A["e12"]).is_zero() and R(A["e22"]).is_zero()
    S = max_rb_mat(3)
    B = S.algebra
    assert S(B["e11"]) == B["e12"] + B["e23"]
    with pytest.raises(PreconditionError):
        max_rb_mat(1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_max_rb_mat_index_against_oracle(n):
    assert nilpotency_index(max_rb_mat(n)) == (True, fv.MAXRB_INDEX[n])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_max_rb_mat_preserves_grading(n):
    R = max_rb_mat(n)
    A = R.algebra
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            img = R(A[f"e{i}{j}"])
            names = [A.basis_names[k] for k in img.support()]
            degrees = {int(name[2]) - int(name[1]) for name in names}
            assert degrees <= {j - i + 1}


def test_m4_coincides_with_maximal_at_n2():
    # recorded observation: the corrected general formula reproduces (M4) literally
    assert catalog_get("M2w0.M4").op == catalog_get("Mn.maxrb", n=2).op


# -- splitting and spectra ------------------------------------------------------

def test_is_splitting_examples():
    assert not is_splitting(catalog_get("Jordan.nonsplit", n=2))
    assert is_splitting(catalog_get("Gr3.w1.split"))
    with pytest.raises(PreconditionError):
        is_splitting(catalog_get("M2w0.M1"))


def test_spectrum_profile_examples():
    R = catalog_get("M2w1.M1")
    A = R.algebra
    assert R(A.unit) == A["e22"]
    rep = spectrum_profile(R)
    assert rep.status("spectrum_profile") == "pass"
    assert rep.data["eigenvalues"] == ["0", "1"]
    S = catalog_get("M2w1.M3", alpha=1, gamma=0)
    assert S(S.algebra.unit).is_zero()
    assert spectrum_profile(S).status("spectrum_profile") == "pass"


@pytest.mark.parametrize("n, s", [(3, 1), (4, 2), (5, 5)])
def test_spectrum_chain(n, s):
    R = catalog_get("Fn.w1.chain", n=n, s=s)
    a = R(R.algebra.unit)
    expected = list(range(0, s)) + list(range(-1, -(n - s) - 1, -1))
    assert list(a.coords) == [Fraction(x) for x in expected]
    assert spectrum_profile(R).ok


def test_spectrum_profile_rejects_weight_zero():
    with pytest.raises(PreconditionError):
        spectrum_profile(catalog_get("M2w0.M1"))


def test_spectrum_profile_fails_for_a_non_operator():
    A = matrix_algebra(2)
    fake = RBOperator.unchecked(A, LinearOperator.from_map(A, {"e11": "3*e11"}), 1)
    assert spectrum_profile(fake).status("spectrum_profile") == "fail"


# -- unital report ---------------------------------------------------------------

def test_unital_report_m4():
    rep = unital_report(catalog_get("M2w0.M4"))
    assert rep.ok
    assert rep.status("powers_of_R1") == "pass"
    assert rep.status("image_singular") == "pass"


def test_unital_report_maxrb3():
    R = max_rb_mat(3)
    A = R.algebra
    a = R(A.unit)
    # R(e11) = e12 + e23 and R(e22) = e23, so the unit picks up e23 twice
    assert a == A["e12"] + A["e23"].scale(2)
    assert power(A, a, 2) == A["e13"].scale(2) == R(R(A.unit)).scale(2)
    assert unital_report(R).status("powers_of_R1") == "pass"


def test_unital_report_grassmann_split():
    R = build_splitting(build_algebra("grassmann:3"), ["1"], ["e1", "e2", "e3", "e12", "e13", "e23", "e123"], 1)
    rep = unital_report(R)
    assert rep.ok
    assert rep.status("nonzero_weight_splitting_R1_zero") == "pass"
    assert rep.to_dict()["checks"]


def test_unital_report_detects_bad_operator():
    A = matrix_algebra(2)
    fake = RBOperator.unchecked(A, LinearOperator.from_map(A, {"e11": "e11+e22"}), 0)
    assert unital_report(fake).status("unit_not_in_image") == "fail"


def test_unital_report_needs_unit():
    with pytest.raises(PreconditionError):
        unital_report(catalog_get("sl2.L5"))


@pytest.mark.parametrize("R", catalog_operators(lambda e, R: R.algebra.unit is not None))
def test_unital_report_catalog(R):
    assert unital_report(R).ok


# -- Stirling and power sums -------------------------------------------------------

def test_stirling_examples():
    assert check_stirling(catalog_get("M2w1.M1"), 4)
    assert check_stirling(catalog_get("M2w1.M3", alpha=1, gamma=1), 5)
    assert check_stirling(catalog_get("Fn.w1.chain", n=4, s=2), 5)
    with pytest.raises(PreconditionError):
        check_stirling(catalog_get("Jordan.nonsplit", n=2), 3)
    assert check_stirling(catalog_get("Jordan.nonsplit", n=2), 3, assume_power_associative=True)


def test_stirling_fails_for_a_non_operator():
    A = build_algebra("field_sum:2")
    fake = RBOperator.unchecked(A, LinearOperator.from_map(A, {"e1": "2*e1"}), 1)
    assert not check_stirling(fake, 3)


def test_faulhaber_examples():
    R = rescale(catalog_get("Fn.w1.chain", n=3, s=2), -1)
    assert R.weight == -1 and check_faulhaber(R)
    A = build_algebra("grassmann:2")
    S = build_splitting(A, ["1"], ["e1", "e2", "e12"], -1)
    assert S(A.unit).is_zero() and check_faulhaber(S)
    assert check_faulhaber(phi(S))
    with pytest.raises(PreconditionError):
        check_faulhaber(catalog_get("Fn.w1.chain", n=3, s=2))


# -- field sums -------------------------------------------------------------------

def test_sf_conditions_examples():
    R = catalog_get("Fn.w1.chain", n=3, s=2)
    rows = R.matrix.transpose()
    assert sf_conditions(rows) == (True, [])
    assert "SF1" in sf_conditions([[1, 0], [0, 0]])[1]
    assert sf_conditions([[0, 1], [1, 0]])[1] == ["SF3"]


@pytest.mark.parametrize("n", [2, 3])
def test_grid_search_matches_sf_conditions(n):
    A = build_algebra(f"field_sum:{n}")
    found = {R.matrix for R in grid_search_rb(A, 1, [-1, 0, 1])}
    assert len(found) == fv.FIELD_SUM_COUNTS[(n, 1)]
    import itertools

    for entries in itertools.product([-1, 0, 1], repeat=n * n):
        rows = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        ok, _ = sf_conditions(rows)
        assert ok == (operator_from_rows(A, rows).matrix in found)


# -- derivations and the modified equation ---------------------------------------

def test_derivation_examples():
    A = matrix_algebra(2)
    assert derivation_check(A, LinearOperator.zero(A), 5)
    assert derivation_check(A, LinearOperator.identity(A).scale(Fraction(-1, 3)), 3)
    P = build_algebra("truncated_poly:3")
    euler = LinearOperator.from_map(P, {"x1": "x1", "x1^2": "2*x1^2"})
    assert derivation_check(P, euler, 0)
    # plain d/dx does not preserve x^3 = 0: x * x^2 = 0 but d(x) x^2 + x d(x^2) = 3 x^2
    d = LinearOperator.from_map(P, {"x1": "1", "x1^2": "2*x1"})
    assert not derivation_check(P, d, 0)
    R = rb_from_derivation(A, LinearOperator.identity(A).scale(-Fraction(1, 2)), 2)
    assert R.op == LinearOperator.identity(A).scale(-2)


def test_derivation_errors():
    P = build_algebra("truncated_poly:3")
    euler = LinearOperator.from_map(P, {"x1": "x1", "x1^2": "2*x1^2"})
    with pytest.raises(HypothesisError):
        rb_from_derivation(P, euler, 0)
    A = matrix_algebra(2)
    with pytest.raises(HypothesisError):
        rb_from_derivation(A, LinearOperator.identity(A), 1)


def test_no_nontrivial_invertible_derivation_on_m2():
    A = matrix_algebra(2)
    for R in (catalog_get("M2w1.M1"), catalog_get("M2w1.M4", alpha=1)):
        assert not derivation_check(A, R.op, 1)
    assert not derivation_check(A, LinearOperator.identity(A).scale(-2), 1)


def test_mybe():
    L = build_algebra("sl2")
    ident = LinearOperator.identity(L)
    assert mybe_check(L, ident) and mybe_check(L, -ident)
    L1 = catalog_get("sl2.L1", t=0)
    assert not mybe_check(L, L1.op.scale(2) - ident)
    T = rescale(catalog_get("sl2.w1.triangular", kappa=1), -2)
    assert T.weight == -2
    assert mybe_check(L, T.op - ident)


@given(st.sampled_from(["sl2", "matrix:2"]), st.data())
def test_mybe_companion(spec, data):
    A = build_algebra(spec)
    vals = st.sampled_from([Fraction(0)] * 3 + [Fraction(1), Fraction(-1)])
    d = A.dim
    m = RatMatrix(data.draw(st.lists(st.lists(vals, min_size=d, max_size=d), min_size=d, max_size=d)))
    R = LinearOperator(A, m)
    assert mybe_check(A, R) == verify_rb(A, R + LinearOperator.identity(A), -2)


# -- grid search --------------------------------------------------------------------

def test_grid_search_weight_zero_field_sums():
    for n in (1, 2):
        found = grid_search_rb(build_algebra(f"field_sum:{n}"), 0, [-1, 0, 1])
        assert len(found) == 1 and found[0].op.is_zero()


def test_grid_search_budget():
    A = matrix_algebra(2)
    with pytest.raises(BudgetExceededError):
        grid_search_rb(A, 0, [-1, 0, 1], budget=1000)
    assert len(grid_search_rb(A, 0, [-1, 0, 1], support=[(0, 2), (1, 2)], budget=10)) >= 1


def test_grid_search_env_budget(monkeypatch):
    monkeypatch.setenv("ROTABAXTER_SEARCH_BUDGET", "5")
    with pytest.raises(BudgetExceededError):
        grid_search_rb(build_algebra("field_sum:2"), 1, [-1, 0, 1])


def test_jordan_weight_zero_count():
    found = grid_search_rb(build_algebra("jordan_bilinear:1,-1"), 0, [-1, 0, 1])
    assert len(found) == fv.JORDAN_1_M1_W0_COUNT


# -- global invariants ---------------------------------------------------------------

@pytest.mark.parametrize("R", ALL_OPERATORS)
def test_plus_minus_functoriality(R):
    for sign in ("plus", "minus"):
        B = plus_minus(R.algebra, sign)
        assert verify_rb(B, R.matrix, R.weight)


@pytest.mark.parametrize("R", catalog_operators(lambda e, R: R.weight == 0 and R.algebra.meta.get("matrix_n")))
def test_matrix_weight_zero_power_bound(R):
    n = R.algebra.meta["matrix_n"]
    assert (R.matrix ** (2 * n)).is_zero()


@pytest.mark.parametrize("R", catalog_operators(
    lambda e, R: R.weight == 0 and R.algebra.unit is not None and R.algebra.flag("associative")))
def test_weight_zero_nilpotent_unit_bound(R):
    A = R.algebra
    a = R(A.unit)
    m = next(k for k in range(1, A.dim + 2) if power(A, a, k).is_zero())
    assert (R.matrix ** (2 * m)).is_zero()


@pytest.mark.parametrize("spec", ["field_sum:2", "truncated_poly:2", "truncated_poly:3"])
def test_commutative_images_avoid_idempotents(spec):
    A = build_algebra(spec)
    idempotents = [A.unit] + [b for b in A.basis_elements() if b * b == b]
    found = grid_search_rb(A, 0, [-1, 0, 1], budget=10**5)
    assert found
    for R in found:
        _, _, image = mat_reduce(R.matrix)
        sp = Span(image, ambient=A.dim)
        assert all(x.coords not in sp for x in idempotents)


@pytest.mark.parametrize("n", [3, 4])
def test_grassmann_weight_zero_bounds(n):
    A = build_algebra(f"grassmann:{n}")
    ops = [R for R in (catalog_get(f"Gr{n}.w0.odd"), catalog_get(f"Gr{n}.exmp1")) if R.algebra.dim == A.dim]
    aug = A.meta["augmentation"]
    for R in ops:
        _, _, image = mat_reduce(R.matrix)
        assert all(v[0] == 0 for v in image)
        assert set(i for v in image for i, c in enumerate(v) if c) <= set(aug)
        assert R(A.basis(A.dim - 1)).is_zero()
        assert power(A, R(A.unit), (n + 1) // 2 + 1).is_zero()
