"""Shared hypothesis strategies: small exact rationals, matrices, elements."""

from fractions import Fraction

from hypothesis import strategies as st

from rotabaxter.exact import RatMatrix

rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_rationals = rationals.filter(lambda x: x != 0)


def square_matrices(n_min=1, n_max=4):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n).map(RatMatrix)
    )


def elements(A):
    return st.lists(rationals, min_size=A.dim, max_size=A.dim).map(A.element)


def invertible_matrices(n):
    return st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n).map(
        RatMatrix
    ).filter(lambda m: m.det() != 0)


def inner_automorphism(M, g):
    """The map x -> g^-1 x g on the matrix algebra ``M``, as a linear operator."""
    from rotabaxter.algebra import LinearOperator

    n = g.shape[0]
    gi = g.inverse()
    cols = []
    for i in range(n):
        for j in range(n):
            e = RatMatrix([[1 if (a, b) == (i, j) else 0 for b in range(n)] for a in range(n)])
            img = gi @ e @ g
            cols.append([img[a, b] for a in range(n) for b in range(n)])
    return LinearOperator(M, RatMatrix.from_columns(cols))
