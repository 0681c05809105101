import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadow_obstruct.exactcore import (
    PsdStatus,
    SymRatMatrix,
    det,
    kernel_vector,
    nullspace,
    psd_check,
    rat_from_str,
    rat_to_str,
    rref,
    solve_consistent,
    solve_linear,
)


def karlin_matrix():
    def f(x):
        return F(2) ** x + F(3) ** x + F(2) ** (-x) + F(3) ** (-x) - F(1, 11)

    return SymRatMatrix.from_rows([[f(a + b) for b in (5, 6, 7)] for a in (5, 6, 7)])


def test_rank_one_gram_is_psd():
    A = SymRatMatrix.from_rows([[1, 1], [1, 1]])
    v = psd_check(A)
    assert v.status == PsdStatus.POSITIVE_SEMIDEFINITE
    assert v.pivots == (F(1),)


def test_antidiagonal_is_indefinite_with_witness():
    A = SymRatMatrix.from_rows([[0, 1], [1, 0]])
    v = psd_check(A)
    assert v.status == PsdStatus.INDEFINITE
    assert A.quadratic_form(v.witness) < 0


def test_karlin_gram_matrix_indefinite():
    A = karlin_matrix()
    v = psd_check(A)
    assert v.status == PsdStatus.INDEFINITE
    assert A.quadratic_form(v.witness) < 0


def test_det_examples():
    assert det(SymRatMatrix.identity(3)) == 1
    assert det(SymRatMatrix.from_rows([[2, 1], [1, 2]])) == 3
    assert det(karlin_matrix()) == F(-2277541160576348197, 107750725632)


def test_kernel_vector_examples():
    assert kernel_vector(SymRatMatrix.from_rows([[1, 1], [1, 1]])) == (F(1), F(-1))
    assert kernel_vector(SymRatMatrix.identity(2)) is None


def test_vandermonde_surrogate_kernel():
    rows = [(1, 1, 1), (1, 2, 4)]
    G = SymRatMatrix.from_rows(
        [[sum(F(r[i]) * r[j] for r in rows) for j in range(3)] for i in range(3)]
    )
    assert kernel_vector(G) == (F(2), F(-3), F(1))


def test_positive_definite_detection():
    A = SymRatMatrix.from_rows([[2, 1], [1, 2]])
    v = psd_check(A)
    assert v.status == PsdStatus.POSITIVE_DEFINITE
    prod = F(1)
    for piv in v.pivots:
        assert piv > 0
        prod *= piv
    assert prod == det(A)


def test_zero_diagonal_with_offdiagonal_residue():
    # a PSD-looking diagonal but a hidden 2x2 obstruction
    A = SymRatMatrix.from_rows([[1, 0, 2], [0, 0, 1], [2, 1, 0]])
    v = psd_check(A)
    assert v.status == PsdStatus.INDEFINITE
    assert A.quadratic_form(v.witness) < 0


def _random_rat_matrix(rng, rows, cols, den=6):
    return [
        [F(rng.randint(-8, 8), rng.randint(1, den)) for _ in range(cols)]
        for _ in range(rows)
    ]


def test_gram_matrices_randomized():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 8)
        r = rng.randint(1, n)
        B = _random_rat_matrix(rng, r, n)
        A = SymRatMatrix.from_rows(
            [[sum(B[k][i] * B[k][j] for k in range(r)) for j in range(n)] for i in range(n)]
        )
        v = psd_check(A)
        assert v.is_psd
        _, pivots = rref(B)
        full_rank = len(pivots) == n
        if full_rank:
            assert v.status == PsdStatus.POSITIVE_DEFINITE
        else:
            assert v.status == PsdStatus.POSITIVE_SEMIDEFINITE
        # determinant equals the pivot product for completed factorizations
        prod = F(1)
        for piv in v.pivots:
            prod *= piv
        if len(v.pivots) == n:
            assert det(A) == prod
        else:
            assert det(A) == 0


def test_indefinite_witnesses_randomized():
    rng = random.Random(3)
    found = 0
    for _ in range(100):
        n = rng.randint(2, 6)
        M = _random_rat_matrix(rng, n, n)
        A = SymRatMatrix.from_rows(
            [[M[i][j] + M[j][i] for j in range(n)] for i in range(n)]
        )
        v = psd_check(A)
        if v.status == PsdStatus.INDEFINITE:
            found += 1
            assert A.quadratic_form(v.witness) < 0
    assert found > 30  # random symmetric matrices are mostly indefinite


@given(st.integers(-50, 50), st.integers(1, 50))
def test_rat_string_round_trip(num, den):
    x = F(num, den)
    assert rat_from_str(rat_to_str(x)) == x


def test_matrix_json_round_trip():
    A = karlin_matrix()
    assert SymRatMatrix.from_json(A.to_json()).entries == A.entries


def test_symmetry_enforced():
    with pytest.raises(Exception):
        SymRatMatrix.from_rows([[1, 2], [3, 4]])


def test_solve_linear_and_consistent():
    A = [[F(2), F(1)], [F(1), F(3)]]
    x = solve_linear(A, [F(5), F(10)])
    assert [A[i][0] * x[0] + A[i][1] * x[1] for i in range(2)] == [F(5), F(10)]
    # a singular but consistent system
    B = [[F(1), F(1)], [F(2), F(2)]]
    y = solve_consistent(B, [F(3), F(6)])
    assert y is not None and y[0] + y[1] == 3
    assert solve_consistent(B, [F(3), F(7)]) is None


@settings(max_examples=30)
@given(
    st.lists(
        st.lists(st.integers(-4, 4), min_size=3, max_size=3),
        min_size=2,
        max_size=2,
    )
)
def test_nullspace_annihilates(rows):
    rats = [[F(x) for x in row] for row in rows]
    for v in nullspace(rats):
        for row in rats:
            assert sum(a * b for a, b in zip(row, v)) == 0
