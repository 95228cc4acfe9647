from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import nonsingular_matrices, symmetric_matrices
from linkcanon import exact
from linkcanon.errors import NotOddPrime, NotSaturated, NotSymmetric, SingularMatrix
from oracles import inertia_float, smith_factors_by_minors


def test_det_small():
    assert exact.det([[2, 1], [1, 2]]) == 3
    assert exact.det([[0, 3], [3, 0]]) == -9
    assert exact.det([]) == 1


@given(symmetric_matrices(max_n=4))
def test_det_matches_cofactor_expansion(A):
    def cof(M):
        if not M:
            return 1
        return sum((-1) ** j * M[0][j] * cof([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(len(M)))

    assert exact.det(A) == cof([list(r) for r in A])


def test_smith_diag():
    snf = exact.smith_normal_form([[4, 0], [0, 3]])
    assert snf.factors == (1, 12)


@given(symmetric_matrices(max_n=4, lo=-9, hi=9))
def test_smith_transforms(A):
    snf = exact.smith_normal_form(A)
    assert exact.matmul(exact.matmul(snf.U, A), snf.V) == snf.D
    assert abs(exact.det(snf.U)) == 1 and abs(exact.det(snf.V)) == 1
    assert exact.matmul(snf.U, snf.U_inv) == exact.identity(len(A))
    f = snf.factors
    nz = [x for x in f if x]
    assert all(x > 0 for x in nz)
    assert f[: len(nz)] == tuple(nz)  # zeros last
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(nonsingular_matrices(max_n=4))
def test_smith_factors_match_minors(A):
    assert list(exact.smith_normal_form(A).factors) == smith_factors_by_minors(A)


@given(nonsingular_matrices(max_n=4))
def test_rational_inverse(A):
    inv = exact.rational_inverse(A)
    assert exact.matmul(A, inv) == exact.identity(len(A))


def test_rational_inverse_singular():
    with pytest.raises(SingularMatrix):
        exact.rational_inverse([[1, 2], [2, 4]])


@given(symmetric_matrices(max_n=5))
def test_signature_matches_eigenvalues(A):
    s = exact.signature(A)
    assert (s.b_plus, s.b_minus, s.b_zero) == inertia_float(A)


def test_signature_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        exact.signature([[1, 2], [3, 4]])


@given(symmetric_matrices(max_n=4, lo=-3, hi=3))
def test_kernel_basis_is_saturated_kernel(A):
    K = exact.kernel_basis(A)
    n = len(A)
    r = len(K[0]) if K else 0
    assert r == inertia_float(A)[2]
    if r:
        assert all(x == 0 for row in exact.matmul(A, K) for x in row)
        P = exact.complete_to_unimodular(K)
        assert abs(exact.det(P)) == 1
        assert tuple(tuple(row[:r]) for row in P) == K
    else:
        assert len(K) == n


def test_kernel_of_one_by_one():
    assert exact.kernel_basis([[0]]) == ((1,),)
    assert exact.kernel_basis([[1]]) == ((),)


def test_completion_rejects_non_saturated():
    with pytest.raises(NotSaturated):
        exact.complete_to_unimodular([[2], [0]])


@given(st.lists(st.integers(2, 9), min_size=1, max_size=30), st.data())
def test_trailing_minors_of_chains(diag, data):
    r = len(diag)
    off = data.draw(st.lists(st.integers(-3, 3), min_size=r - 1, max_size=r - 1))
    C = [[0] * r for _ in range(r)]
    for i in range(r):
        C[i][i] = diag[i]
        if i + 1 < r:
            C[i][i + 1] = C[i + 1][i] = off[i]
    minors = exact.trailing_minors(C)
    assert minors[0] == exact.det(C)
    if minors[0]:
        expected = exact.rational_inverse(C)[0][0]
        assert Fraction(minors[1], minors[0]) == expected


def test_trailing_minors_rejects_dense():
    with pytest.raises(ValueError):
        exact.trailing_minors([[1, 1, 1], [1, 1, 1], [1, 1, 1]])


@given(st.integers(2, 5000))
def test_is_prime(n):
    assert exact.is_prime(n) == all(n % d for d in range(2, int(n**0.5) + 1))


@given(st.integers(1, 10**6))
def test_prime_factors_multiply_back(n):
    ps = exact.prime_factors(n)
    assert ps == sorted(set(ps))
    m = n
    for p in ps:
        m //= p ** exact.valuation(m, p)
    assert m == 1


@given(st.integers(-50, 50), st.sampled_from([3, 5, 7, 11, 13, 101]))
def test_legendre_by_squares(a, p):
    squares = {x * x % p for x in range(1, p)}
    expected = 0 if a % p == 0 else 1 if a % p in squares else -1
    assert exact.legendre(a, p) == expected


def test_legendre_needs_odd_prime():
    with pytest.raises(NotOddPrime):
        exact.legendre(1, 2)
    with pytest.raises(NotOddPrime):
        exact.legendre(1, 9)
