import random
from fractions import Fraction

import pytest

from sullivan.linalg import (
    DimensionMismatchError,
    Echelon,
    RatMatrix,
    kernel_basis,
    matmul,
    quotient_dimension,
    rank,
    solve_membership,
)


def F(x):
    return Fraction(x)


def test_rank_identity():
    assert rank(RatMatrix.from_rows([[1, 0], [0, 1]])) == 2


def test_rank_zero_matrix():
    assert rank(RatMatrix(3, 4)) == 0


def test_rank_dependent_rows():
    assert rank(RatMatrix.from_rows([[1, 2], [2, 4]])) == 1


def test_kernel_of_identity_is_empty():
    assert kernel_basis(RatMatrix.from_rows([[1, 0], [0, 1]])) == []


def test_kernel_of_zero_matrix_is_standard_basis():
    basis = kernel_basis(RatMatrix(2, 3))
    assert basis == [
        (F(1), F(0), F(0)),
        (F(0), F(1), F(0)),
        (F(0), F(0), F(1)),
    ]


def test_kernel_single_relation():
    basis = kernel_basis(RatMatrix.from_rows([[1, 1, 0]]))
    assert basis == [(F(-1), F(1), F(0)), (F(0), F(0), F(1))]


def test_kernel_vectors_are_integral_content_one():
    m = RatMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)]])
    for v in kernel_basis(m):
        assert all(x.denominator == 1 for x in v)
        from math import gcd

        g = 0
        for x in v:
            g = gcd(g, abs(x.numerator))
        assert g == 1


def test_solve_membership_identity():
    m = RatMatrix.from_rows([[1, 0], [0, 1]])
    assert solve_membership(m, (3, 5)) == (F(3), F(5))


def test_solve_membership_not_in_span():
    assert solve_membership(RatMatrix(2, 2), (1, 0)) is None


def test_solve_membership_scaling():
    m = RatMatrix.from_rows([[2], [4]])
    assert solve_membership(m, (1, 2)) == (Fraction(1, 2),)


def test_solve_membership_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve_membership(RatMatrix(2, 2), (1, 0, 0))


def test_quotient_dimension_empty_subspace():
    assert quotient_dimension(4, []) == 4


def test_quotient_dimension_full():
    assert quotient_dimension(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 0


def test_quotient_dimension_dependent():
    assert quotient_dimension(3, [(1, 0, 0), (2, 0, 0)]) == 2


def _random_matrix(rng, rows, cols, density=0.6):
    pool = [0, 1, -1, 2, -3, Fraction(1, 2), Fraction(2, 3), Fraction(-5, 4)]
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = pool[rng.randrange(len(pool))]
                if v:
                    entries[(r, c)] = Fraction(v)
    return RatMatrix(rows, cols, entries)


def test_rank_equals_rank_of_transpose():
    rng = random.Random(7)
    for _ in range(150):
        m = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert rank(m) == rank(m.transpose())


def test_kernel_vectors_annihilate():
    rng = random.Random(11)
    for _ in range(150):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
        for v in kernel_basis(m):
            assert all(x == 0 for x in m.apply(v))


def test_rank_nullity():
    rng = random.Random(13)
    for _ in range(150):
        m = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert rank(m) + len(kernel_basis(m)) == m.cols


def test_rank_invariant_under_row_permutation():
    rng = random.Random(17)
    for _ in range(100):
        rows = rng.randint(2, 6)
        m = _random_matrix(rng, rows, rng.randint(1, 6))
        perm = list(range(rows))
        rng.shuffle(perm)
        permuted = RatMatrix(
            m.rows, m.cols,
            {(perm[r], c): v for (r, c), v in m._entries.items()},
        )
        assert rank(m) == rank(permuted)


def test_solve_membership_roundtrip():
    rng = random.Random(19)
    for _ in range(100):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(m.cols)]
        v = [Fraction(0)] * m.rows
        for c, coeff in enumerate(coeffs):
            col = m.column(c)
            for r in range(m.rows):
                v[r] += coeff * col[r]
        sol = solve_membership(m, v)
        assert sol is not None
        rebuilt = [Fraction(0)] * m.rows
        for c, coeff in enumerate(sol):
            col = m.column(c)
            for r in range(m.rows):
                rebuilt[r] += coeff * col[r]
        assert rebuilt == v


def test_matmul_against_apply():
    rng = random.Random(23)
    for _ in range(50):
        a = _random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        b = _random_matrix(rng, a.cols, rng.randint(1, 4))
        prod = matmul(a, b)
        for c in range(b.cols):
            assert prod.column(c) == a.apply(b.column(c))


def test_sparse_and_dense_elimination_agree():
    # below/above the 50% fill-in threshold the two paths must agree
    from sullivan.linalg import _rref, _rref_dense

    rng = random.Random(29)
    for _ in range(120):
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        for density in (0.15, 0.45, 0.9):
            m = _random_matrix(rng, rows, cols, density)
            dense_rows, dense_pivots = _rref_dense(m._row_lists(), m.cols, [], 0, 0)
            unified_rows, unified_pivots = _rref(m)
            assert unified_pivots == dense_pivots
            assert unified_rows == dense_rows
            for v in kernel_basis(m):
                assert all(x == 0 for x in m.apply(v))


def test_echelon_membership_and_coords():
    ech = Echelon(3)
    ech.add((1, 1, 0))
    ech.add((0, 0, 2), label="z")
    assert ech.rank == 2
    assert ech.contains((2, 2, 6))
    assert not ech.contains((1, 0, 0))
    residual, coeffs = ech.reduce_with_coeffs((3, 3, 4))
    assert not any(residual)
    assert coeffs == {"z": Fraction(4)}


def test_echelon_clone_is_independent():
    ech = Echelon(2)
    ech.add((1, 0))
    dup = ech.clone()
    dup.add((0, 1))
    assert ech.rank == 1 and dup.rank == 2
