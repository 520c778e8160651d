from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from hpk.linalg import kernel, rank, solve

small = st.integers(-3, 3)


def matrices(rows=4, cols=5):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=1, max_size=rows)


def as_vectors(mat):
    return [{j: Fraction(c) for j, c in enumerate(row) if c} for row in mat]


@settings(max_examples=60)
@given(matrices())
def test_rank_matches_sympy(mat):
    assert rank(as_vectors(mat)) == sympy.Matrix(mat).rank()


@settings(max_examples=60)
@given(matrices())
def test_kernel_is_kernel(mat):
    # images[j] is the image of basis vector j: columns of mat
    cols = len(mat[0])
    images = [{i: Fraction(mat[i][j]) for i in range(len(mat)) if mat[i][j]} for j in range(cols)]
    ker = kernel(images)
    assert len(ker) == cols - sympy.Matrix(mat).rank()
    for v in ker:
        for i in range(len(mat)):
            assert sum(mat[i][j] * c for j, c in v.items()) == 0


@settings(max_examples=60)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve(mat, x0):
    cols = len(mat[0])
    columns = [{i: Fraction(mat[i][j]) for i in range(len(mat)) if mat[i][j]} for j in range(cols)]
    x0 = (x0 + [0] * cols)[:cols]
    rhs = {}
    for i in range(len(mat)):
        v = sum(mat[i][j] * x0[j] for j in range(cols))
        if v:
            rhs[i] = Fraction(v)
    x, nullity = solve(columns, rhs)
    assert x is not None
    assert nullity == cols - sympy.Matrix(mat).rank()
    for i in range(len(mat)):
        assert sum(mat[i][j] * c for j, c in x.items()) == rhs.get(i, 0)
