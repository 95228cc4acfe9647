"""Free rank and torsion linking pairing of a symmetric integer matrix."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact
from .errors import InvariantViolation, NotSymmetric, SingularMatrix


@dataclass(frozen=True)
class DiscriminantPresentation:
    """Linking pairing on coker(A_red) in a Smith basis.

    ``gram[i][j]`` is the pairing of the i-th and j-th generators of order
    ``invariant_factors[i]``, reduced into [0, 1).
    """

    b1: int
    A_red: exact.Mat
    smith: exact.SmithData
    invariant_factors: tuple[int, ...]
    gram: tuple  # tuple[tuple[Fraction, ...], ...]

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out


def mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def require_symmetric(A: exact.Mat) -> None:
    if any(len(r) != len(A) for r in A):
        raise NotSymmetric("matrix is not square")
    pair = exact.asymmetric_pair(A)
    if pair is not None:
        i, j = pair
        raise NotSymmetric(f"entries ({i},{j})={A[i][j]} and ({j},{i})={A[j][i]} differ")


def split_free_part(A: Sequence[Sequence[int]]):
    """Return (b1, A_red, P) with P^T A P = 0_{b1} + A_red and det(A_red) != 0."""
    A = exact.as_matrix(A)
    require_symmetric(A)
    n = len(A)
    if n and exact.det(A) != 0:
        return 0, A, exact.identity(n)
    K = exact.kernel_basis(A)
    b1 = len(K[0]) if K else 0
    P = exact.complete_to_unimodular(K) if n else ()
    M = exact.congruence(A, P)
    for i in range(n):
        for j in range(n):
            if (i < b1 or j < b1) and M[i][j] != 0:
                raise InvariantViolation("kernel block did not split off")
    A_red = tuple(tuple(row[b1:]) for row in M[b1:])
    if exact.det(A_red) == 0:
        raise InvariantViolation("reduced matrix is singular")
    return b1, A_red, P


def linking_value(A_red: Sequence[Sequence[int]], x: Sequence[int], y: Sequence[int]) -> Fraction:
    """x^T A_red^{-1} y reduced mod 1."""
    inv = exact.rational_inverse(A_red)
    if len(x) != len(inv) or len(y) != len(inv):
        raise ValueError("vector length does not match the matrix")
    total = sum(
        (Fraction(x[i]) * inv[i][j] * y[j] for i in range(len(x)) for j in range(len(y))),
        Fraction(0),
    )
    return mod1(total)


def discriminant(A: Sequence[Sequence[int]], bit_cap: int = exact.DEFAULT_BIT_CAP) -> DiscriminantPresentation:
    b1, A_red, _ = split_free_part(A)
    snf = exact.smith_normal_form(A_red, bit_cap=bit_cap)
    d = snf.factors
    if any(x == 0 for x in d):
        raise SingularMatrix("reduced matrix has a zero invariant factor")
    keep = [i for i, x in enumerate(d) if x > 1]
    if not keep:
        return DiscriminantPresentation(b1, A_red, snf, (), ())
    # A^-1 = V D^-1 U, so the pairing in the basis of columns of U^-1 is
    # U^-T A^-1 U^-1 = (U^-T V) D^-1, which only needs integer arithmetic
    Ui, V = snf.U_inv, snf.V
    rows = range(len(V))
    gram = tuple(
        tuple(mod1(Fraction(sum(Ui[r][i] * V[r][j] for r in rows), d[j])) for j in keep) for i in keep
    )
    factors = tuple(d[i] for i in keep)
    for i, di in enumerate(factors):
        for j in range(len(keep)):
            if (gram[i][j] * di).denominator != 1:
                raise InvariantViolation("pairing value violates the order constraint")
            if gram[i][j] != gram[j][i]:
                raise InvariantViolation("transported pairing is not symmetric")
    return DiscriminantPresentation(b1, A_red, snf, factors, gram)
