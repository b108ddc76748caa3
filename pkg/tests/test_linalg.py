from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det_leibniz, invariant_factors, rank_mod, rank_q
from wfilt.linalg import (
    GF,
    QQ,
    ZZ,
    Matrix,
    ModulePresentation,
    Quotient,
    Ring,
    Submodule,
    determinant,
    direct_sum,
    image,
    induced_matrix,
    is_isomorphism,
    kernel,
    preimage,
    smith_normal_form,
)

small = st.integers(min_value=-4, max_value=4)


@st.composite
def int_matrices(draw, max_rows=4, max_cols=4):
    m = draw(st.integers(0, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(n)] for _ in range(m)], n


def _M(ring, rows, n):
    return Matrix.from_rows(ring, rows, n) if rows else Matrix.zero(ring, 0, n)


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_snf_matches_determinantal_divisors(data):
    rows, n = data
    M = _M(ZZ, rows, n)
    S, U, V = smith_normal_form(M)
    assert U @ M @ V == S
    diag = [S[i, i] for i in range(min(S.rows, S.cols))]
    assert all(S[i, j] == 0 for i in range(S.rows) for j in range(S.cols) if i != j)
    nonzero = [d for d in diag if d]
    assert nonzero == invariant_factors(rows)
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_kernel_and_rank_over_q(data):
    rows, n = data
    M = _M(QQ, rows, n)
    K = kernel(M)
    assert K.rank == n - rank_q(rows)
    for g in K.gens:
        assert not any(M.apply(g))
    assert image(M).rank == rank_q(rows)


@settings(max_examples=100, deadline=None)
@given(int_matrices(), st.sampled_from([2, 3, 5]))
def test_rank_over_prime_fields(data, p):
    rows, n = data
    assert image(_M(GF(p), rows, n)).rank == rank_mod(rows, p)


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=4, max_cols=3))
def test_cokernel_presentation_over_z(data):
    rows, n = data
    # Z^n / (row span)
    S = Submodule.span(ZZ, n, rows)
    Q = Quotient(Submodule.full(ZZ, n), S)
    facs = invariant_factors(rows)
    assert Q.presentation.free_rank == n - len(facs)
    assert Q.presentation.torsion == tuple(d for d in facs if d > 1)
    for v in Q.basis_lifts():
        assert len(Q.coords(v)) == Q.ngens


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=4, max_cols=4), int_matrices(max_rows=4, max_cols=4))
def test_sum_and_intersection_dimensions(a, b):
    (ra, na), (rb, nb) = a, b
    n = min(na, nb)
    ra = [r[:n] for r in ra]
    rb = [r[:n] for r in rb]
    A, B = Submodule.span(QQ, n, ra), Submodule.span(QQ, n, rb)
    assert (A + B).rank + (A & B).rank == A.rank + B.rank
    assert (A & B) <= A and (A & B) <= B and A <= A + B


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=3, max_cols=3))
def test_preimage_laws(data):
    rows, n = data
    for ring in (ZZ, QQ):
        M = _M(ring, rows, n)
        assert preimage(M, Submodule.zero(ring, M.rows)) == kernel(M)
        assert preimage(M, image(M)).is_full()


def test_echelon_is_canonical_under_row_operations():
    rows = [[2, 4, 6], [1, 1, 1]]
    mixed = [[5, 9, 13], [3, 5, 7]]  # row operations of determinant 1 applied to rows
    assert Submodule.span(ZZ, 3, rows) == Submodule.span(ZZ, 3, mixed)
    assert Submodule.span(QQ, 3, rows) == Submodule.span(QQ, 3, [[1, 0, -1], [0, 1, 2]])


@pytest.mark.parametrize("rows", [[[1]], [[2, 1], [7, 4]], [[0, 1, 2], [3, 4, 5], [6, 7, 9]], [[3, 0, 1, 2], [1, 1, 0, 0], [0, 5, 2, 1], [2, 2, 2, 3]]])
def test_determinant_matches_expansion(rows):
    n = len(rows)
    assert determinant(Matrix.from_rows(ZZ, rows, n)) == det_leibniz(rows)
    assert determinant(Matrix.from_rows(QQ, rows, n)) == det_leibniz(rows)


def test_large_integers_stay_exact():
    big = 2**80 + 7
    M = Matrix.from_rows(ZZ, [[big, 0], [0, big * 3]], 2)
    S, _, _ = smith_normal_form(M)
    assert (S[0, 0], S[1, 1]) == (big, 3 * big)
    q = Quotient(Submodule.full(ZZ, 2), image(M))
    assert q.presentation.torsion == (big, 3 * big)


def test_rational_entries():
    M = Matrix.from_rows(QQ, [[Fraction(1, 3), Fraction(2, 3)]], 2)
    assert kernel(M).gens == ((QQ(1), QQ(Fraction(-1, 2))),)


def test_induced_matrix_and_isomorphism():
    # Z/2 + Z inside Z^2 by generators (2, 0), and multiplication by -1
    num = Submodule.full(ZZ, 2)
    den = Submodule.span(ZZ, 2, [[2, 0]])
    Q = Quotient(num, den)
    F = Matrix.from_rows(ZZ, [[-1, 0], [0, -1]], 2)
    assert is_isomorphism(F, Q, Q)
    T = induced_matrix(F, Q, Q)
    assert T.shape == (2, 2)
    doubling = Matrix.from_rows(ZZ, [[2, 0], [0, 2]], 2)
    assert not is_isomorphism(doubling, Q, Q)


def test_direct_sum_recomputes_invariant_factors():
    assert direct_sum([ModulePresentation(0, (2,)), ModulePresentation(1, (3,))]) == ModulePresentation(1, (6,))


def test_ring_parsing_and_validation():
    assert Ring.parse("Z") == ZZ and Ring.parse("QQ") == QQ and Ring.parse("Z/7") == GF(7)
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        Ring.parse("R")
    with pytest.raises(ZeroDivisionError):
        ZZ.inv(2)
    assert GF(5)(Fraction(1, 2)) == 3


def test_shape_errors():
    A = Matrix.from_rows(ZZ, [[1, 2]], 2)
    with pytest.raises(ValueError):
        A @ A
    with pytest.raises(ValueError):
        Submodule.span(ZZ, 3, [[1, 2]])


def test_preimage_of_even_line_under_identity():
    # the membership predicate {x : Mx in S}, checked on small vectors
    S = Submodule.span(ZZ, 2, [[2, 0]])
    P = preimage(Matrix.identity(ZZ, 2), S)
    assert P == S
    for x in range(-4, 5):
        for y in range(-4, 5):
            assert P.contains([x, y]) == (x % 2 == 0 and y == 0)
