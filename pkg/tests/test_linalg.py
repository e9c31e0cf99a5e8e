from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainfss.linalg import (Field, LinearSolver, Matrix, nullspace, rank_of_vectors, rref, solve_linear,
                           split_subspace)

GF7 = Field.prime(7)
GF101 = Field.prime(101)
GF2 = Field.prime(2)
QQ = Field.rationals()


def matrices(F: Field, max_rows=5, max_cols=5):
    if F.is_rational:
        entry = st.fractions(min_value=-4, max_value=4, max_denominator=3)
    else:
        entry = st.integers(0, F.p - 1)

    @st.composite
    def build(draw):
        r = draw(st.integers(0, max_rows))
        c = draw(st.integers(0, max_cols))
        rows = [[F(draw(entry)) for _ in range(c)] for _ in range(r)]
        return Matrix.from_rows(F, rows, c)
    return build()


def test_field_basics():
    assert GF7(9) == 2
    assert GF7.inv(3) * 3 % 7 == 1
    assert QQ(Fraction(2, 4)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        Field.prime(6)
    with pytest.raises(ZeroDivisionError):
        GF7.inv(0)
    assert Field.from_name("GF(101)") == GF101 and Field.from_name("Q") == QQ


def test_coefficient_strings_are_canonical():
    assert QQ.parse("-3/4") == Fraction(-3, 4)
    assert QQ.format(Fraction(6, 8)) == "3/4"
    for bad in ("2/4", "1/1", "3/-4", "+1", "0/5", "1.5"):
        with pytest.raises(ValueError):
            QQ.parse(bad)
    assert GF7.parse("6") == 6
    for bad in ("7", "-1", "06"):
        with pytest.raises(ValueError):
            GF7.parse(bad)


def test_rref_examples():
    R, piv = rref(Matrix.identity(QQ, 2))
    assert R == Matrix.identity(QQ, 2) and piv == [0, 1]
    R, piv = rref(Matrix.zeros(QQ, 2, 3))
    assert R.is_zero() and piv == []
    R, piv = rref(Matrix.from_rows(GF7, [[2, 4], [1, 2]]))
    assert R.rows == ((1, 2), (0, 0)) and piv == [0]


def test_solve_examples():
    assert solve_linear(Matrix.identity(QQ, 3), [1, 2, 3]) == [1, 2, 3]
    assert solve_linear(Matrix.zeros(QQ, 2, 2), [1, 0]) is None
    assert solve_linear(Matrix.from_rows(QQ, [[1, 1]]), [1]) == [1, 0]
    with pytest.raises(ValueError):
        solve_linear(Matrix.identity(QQ, 2), [1])


def test_split_subspace_examples():
    assert split_subspace(QQ, [[1, 0]], 2) == [[0, 1]]
    assert split_subspace(QQ, [], 2) == [[1, 0], [0, 1]]
    assert split_subspace(QQ, [[1, 1]], 2) == [[0, 1]]
    with pytest.raises(ValueError):
        split_subspace(QQ, [[1, 1], [2, 2]], 2)


@pytest.mark.parametrize("F", [GF101, QQ, GF2], ids=["GF101", "Q", "GF2"])
@settings(max_examples=500)
@given(data=st.data())
def test_rref_rank_nullity(F, data):
    M = data.draw(matrices(F))
    R, piv = rref(M)
    assert rref(R)[0] == R
    assert piv == sorted(piv)
    assert M.rank() == len(piv)
    K = nullspace(M)
    assert len(piv) + len(K) == M.ncols
    for v in K:
        assert all(x == 0 for x in M.apply(v))
    # pivot columns of R are unit columns
    for i, c in enumerate(piv):
        assert [R.rows[k][c] for k in range(R.nrows)] == [1 if k == i else 0 for k in range(R.nrows)]


@pytest.mark.parametrize("F", [GF101, QQ], ids=["GF101", "Q"])
@settings(max_examples=200)
@given(data=st.data())
def test_solve_is_exact(F, data):
    M = data.draw(matrices(F))
    x0 = [F(data.draw(st.integers(-3, 3))) for _ in range(M.ncols)]
    b = M.apply(x0)
    x = solve_linear(M, b)
    assert x is not None and M.apply(x) == b
    R, piv = rref(M)
    free = set(range(M.ncols)) - set(piv)
    assert all(x[c] == 0 for c in free)
    assert LinearSolver(M).solve(b) == x


@pytest.mark.parametrize("F", [GF101, QQ], ids=["GF101", "Q"])
@settings(max_examples=200)
@given(data=st.data())
def test_split_subspace_complements(F, data):
    M = data.draw(matrices(F, 4, 5))
    n = M.ncols
    R, piv = rref(M)
    S = [list(r) for r in R.rows[: len(piv)]]
    C = split_subspace(F, S, n)
    assert len(S) + len(C) == n
    assert rank_of_vectors(F, S + C, n) == n
