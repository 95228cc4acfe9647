"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples.  Every routine is a pure function that
accepts any sequence of sequences of integers and returns fresh tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    BitSizeExceeded,
    NotOddPrime,
    NotSaturated,
    NotSymmetric,
    SingularMatrix,
)

Mat = tuple  # tuple[tuple[int, ...], ...]

DEFAULT_BIT_CAP = 10**6


@dataclass(frozen=True)
class SmithData:
    """U * A * V = D with U, V unimodular and D diagonal."""

    U: Mat
    D: Mat
    V: Mat
    U_inv: Mat | None = field(default=None, compare=False, repr=False)

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), _ncols(self.D))))


@dataclass(frozen=True)
class Signature:
    b_plus: int
    b_minus: int
    b_zero: int


# ---------------------------------------------------------------- helpers

def as_matrix(rows: Sequence[Sequence[int]]) -> Mat:
    out = tuple(tuple(int(x) for x in r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def _ncols(A: Mat) -> int:
    return len(A[0]) if A else 0


def shape(A: Mat) -> tuple[int, int]:
    return len(A), _ncols(A)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Mat:
    m = n if m is None else m
    return tuple(tuple(0 for _ in range(m)) for _ in range(n))


def transpose(A: Mat, ncols: int | None = None) -> Mat:
    m = _ncols(A) if ncols is None else ncols
    return tuple(tuple(A[i][j] for i in range(len(A))) for j in range(m))


def matmul(A, B):
    """Product of two matrices (ints or Fractions)."""
    n, k = len(A), _ncols(A)
    m = _ncols(B)
    if k != len(B) and not (k == 0 and not B):
        raise ValueError(f"shape mismatch {n}x{k} @ {len(B)}x{m}")
    if k == 0:
        # an n x 0 times 0 x m product; B carries no column count when empty
        return tuple(tuple(0 for _ in range(m)) for _ in range(n))
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def congruence(A: Mat, P: Mat) -> Mat:
    """P^T A P."""
    n = len(P)
    if n == 0:
        return ()
    return matmul(matmul(transpose(P), A), P)


def is_symmetric(A: Mat) -> bool:
    n = len(A)
    return all(len(r) == n for r in A) and all(
        A[i][j] == A[j][i] for i in range(n) for j in range(i + 1, n)
    )


def asymmetric_pair(A: Mat):
    """First (i, j) with i < j and A[i][j] != A[j][i], or None."""
    n = len(A)
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                return i, j
    return None


def direct_sum(*blocks: Mat) -> Mat:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return as_matrix(out)


def _check_bits(values, bit_cap: int) -> None:
    for x in values:
        if x.bit_length() > bit_cap:
            raise BitSizeExceeded(f"entry exceeds {bit_cap} bits")


# ---------------------------------------------------------------- determinant

def det(A: Sequence[Sequence[int]], bit_cap: int = DEFAULT_BIT_CAP) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    M = [list(r) for r in A]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("det of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            _check_bits(row_i[k + 1:], bit_cap)
        prev = pivot
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------- Smith form

def smith_normal_form(A: Sequence[Sequence[int]], bit_cap: int = DEFAULT_BIT_CAP) -> SmithData:
    """Smith normal form with transforms: U*A*V = D.

    Nonzero invariant factors come first, each dividing the next; zeros last.
    """
    D = [list(r) for r in A]
    n = len(D)
    m = len(D[0]) if D else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(n)] for i in range(n)]  # kept equal to U^-1

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= c * row[dst]
        _check_bits(D[dst], bit_cap)

    def add_col(dst, src, c):  # col_dst += c * col_src
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]
        _check_bits((row[dst] for row in D), bit_cap)

    for t in range(min(n, m)):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            for i in range(t + 1, n):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, m):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            rest = [(abs(D[i][t]), i, None) for i in range(t + 1, n) if D[i][t]]
            rest += [(abs(D[t][j]), None, j) for j in range(t + 1, m) if D[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: r[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, m) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
    return SmithData(
        as_matrix(U) if n else (), as_matrix(D) if n else (), as_matrix(V) if m else (), as_matrix(Ui) if n else ()
    )


# ---------------------------------------------------------------- rational inverse

def rational_inverse(A: Sequence[Sequence[int]]) -> tuple:
    """Exact inverse over Q as a tuple of Fraction rows."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("inverse of a non-square matrix")
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    inverse = tuple(tuple(row[n:]) for row in M)
    if matmul(A, inverse) != identity(n):
        raise SingularMatrix("inverse check failed")
    return inverse


def unimodular_inverse(P: Sequence[Sequence[int]]) -> Mat:
    inv = rational_inverse(P)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def trailing_minors(A: Sequence[Sequence[int]]) -> list[int]:
    """det(A[i:, i:]) for i = 0..n of a tridiagonal matrix (the last one is 1).

    Uses the three-term recurrence, so long plumbing chains stay cheap.
    """
    n = len(A)
    for i, row in enumerate(A):
        if len(row) != n or any(row[: max(i - 1, 0)]) or any(row[i + 2:]):
            raise ValueError("matrix is not square tridiagonal")
    out = [0] * (n + 1)
    out[n] = 1
    for i in range(n - 1, -1, -1):
        out[i] = A[i][i] * out[i + 1]
        if i + 2 <= n:
            out[i] -= A[i][i + 1] * A[i + 1][i] * out[i + 2]
    return out


# ---------------------------------------------------------------- signature

def signature(A: Sequence[Sequence[int]]) -> Signature:
    """Inertia of a symmetric matrix by exact congruence diagonalization."""
    A = as_matrix(A)
    if not is_symmetric(A):
        i, j = asymmetric_pair(A) or (0, 0)
        raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    plus = minus = 0
    while M:
        k = len(M)
        i = next((i for i in range(k) if M[i][i] != 0), None)
        if i is not None:
            d = M[i][i]
            if d > 0:
                plus += 1
            else:
                minus += 1
            keep = [r for r in range(k) if r != i]
            M = [[M[r][s] - M[r][i] * M[i][s] / d for s in keep] for r in keep]
            continue
        pair = next(((i, j) for i in range(k) for j in range(i + 1, k) if M[i][j] != 0), None)
        if pair is None:
            break
        # zero diagonal with b = M[i][j] != 0: the block [[0,b],[b,0]] has inertia (1,1)
        i, j = pair
        b = M[i][j]
        plus += 1
        minus += 1
        keep = [r for r in range(k) if r not in pair]
        M = [[M[r][s] - (M[r][i] * M[j][s] + M[r][j] * M[i][s]) / b for s in keep] for r in keep]
    return Signature(plus, minus, n - plus - minus)


# ---------------------------------------------------------------- kernels and completion

def kernel_basis(A: Sequence[Sequence[int]]) -> Mat:
    """Saturated Z-basis of ker(A), as the columns of an n x r matrix."""
    A = as_matrix(A)
    m = _ncols(A) if A else 0
    snf = smith_normal_form(A)
    f = snf.factors
    zero_idx = [j for j in range(m) if j >= len(f) or f[j] == 0]
    return tuple(tuple(snf.V[i][j] for j in zero_idx) for i in range(m))


def complete_to_unimodular(K: Sequence[Sequence[int]]) -> Mat:
    """Unimodular n x n matrix whose leading columns are the columns of K."""
    K = as_matrix(K)
    n = len(K)
    r = _ncols(K) if K else 0
    if r == 0:
        return identity(n)
    snf = smith_normal_form(K)
    f = snf.factors
    if len(f) < r or any(x != 1 for x in f[:r]):
        raise NotSaturated("columns do not extend to a basis of Z^n")
    # K = U^-1 [I_r; 0] V^-1, so P = U^-1 diag(V^-1, I) has K as its first r columns
    Uinv = snf.U_inv
    Vinv = unimodular_inverse(snf.V)
    P = matmul(Uinv, direct_sum(Vinv, identity(n - r)))
    if tuple(tuple(row[:r]) for row in P) != K:
        raise NotSaturated("completion check failed")
    return P


# ---------------------------------------------------------------- number theory

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:  # deterministic far beyond 64 bits
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of |n| in ascending order."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    if p <= 2 or not is_prime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r
