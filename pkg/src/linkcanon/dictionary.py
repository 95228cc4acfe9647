"""Realization of token packages as block-diagonal integer matrices.

``assemble`` builds the canonical matrix B(T) from generator blocks and
always re-derives the package of the result before returning it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import dyadic, exact
from .canon import DEFAULT_GAUSS_CAP, LayerRecord, TokenPackage, canon
from .errors import BadFraction, RealizationMismatch, UnrealizableU

FREE_FACTOR = "Z(S²×S¹)"


# ---------------------------------------------------------------- continued fractions

@dataclass(frozen=True)
class HJExpansion:
    m: int
    q: int
    coeffs: tuple[int, ...]


def hj_expansion(m: int, q: int) -> HJExpansion:
    """Negative continued fraction m/q = a1 - 1/(a2 - 1/(...)) with all a_i >= 2."""
    if not (0 < q < m) or math.gcd(m, q) != 1:
        raise BadFraction(f"need coprime 0 < q < m, got m={m}, q={q}")
    coeffs = []
    a, b = m, q
    while b:
        c = -(-a // b)  # ceiling
        coeffs.append(c)
        a, b = b, c * b - a
    return HJExpansion(m, q, tuple(coeffs))


def plumbing_matrix(e: HJExpansion) -> exact.Mat:
    """Tridiagonal matrix with diagonal a_i and off-diagonal 1."""
    r = len(e.coeffs)
    rows = []
    for i, a in enumerate(e.coeffs):
        row = [0] * r
        row[i] = a
        if i:
            row[i - 1] = 1
        if i + 1 < r:
            row[i + 1] = 1
        rows.append(tuple(row))
    C = tuple(rows)
    minors = exact.trailing_minors(C)
    if minors[0] != e.m:
        raise AssertionError(f"plumbing determinant is not {e.m}")
    # (C^-1)_11 is the complementary minor over the determinant
    if Fraction(minors[1], minors[0]) != Fraction(e.q, e.m):
        raise AssertionError(f"plumbing corner entry is not {e.q}/{e.m}")
    return C


def least_nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if exact.legendre(a, p) == -1)


# ---------------------------------------------------------------- generator blocks

@dataclass(frozen=True)
class GeneratorBlock:
    label: str
    matrix: exact.Mat


_LABEL = re.compile(r"^(?:A\((\d+),([+\-]|\d+)\)|(E|F|Fw)\((\d+)\)|ZERO)$")


def _prime_power(q: int) -> tuple[int, int]:
    ps = exact.prime_factors(q)
    if len(ps) != 1:
        raise ValueError(f"{q} is not a prime power")
    return ps[0], exact.valuation(q, ps[0])


def cyclic_label(q: int, numerator) -> str:
    return f"A({q},{numerator})"


def block_for(label: str) -> GeneratorBlock:
    """Matrix for a generator label.

    Labels: ``A(p^k,+)`` and ``A(p^k,-)`` for odd p, ``A(2^k,q)`` for odd q,
    ``E(2^k)``, ``F(2^k)``, ``Fw(2^k)`` and ``ZERO``; prime powers are written
    out as integers, e.g. ``A(9,-)`` or ``E(4)``.
    """
    mt = _LABEL.match(label)
    if not mt:
        raise ValueError(f"unknown generator label {label!r}")
    if label == "ZERO":
        return GeneratorBlock(label, ((0,),))
    if mt.group(1):
        q = int(mt.group(1))
        p, _ = _prime_power(q)
        tag = mt.group(2)
        if p == 2:
            num = int(tag) % q if tag not in "+-" else None
            if num is None or num % 2 == 0:
                raise ValueError(f"2-primary cyclic label needs an odd numerator: {label}")
            return GeneratorBlock(label, _cyclic(q, num))
        if tag == "+":
            return GeneratorBlock(label, ((q,),))
        if tag == "-":
            return GeneratorBlock(label, _cyclic(q, least_nonresidue(p)))
        raise ValueError(f"odd-primary label needs + or -: {label}")
    kind, q = mt.group(3), int(mt.group(4))
    p, k = _prime_power(q)
    if p != 2:
        raise ValueError(f"{kind} blocks exist only for powers of two")
    if kind == "E":
        return GeneratorBlock(label, ((0, q), (q, 0)))
    if kind == "F":
        return GeneratorBlock(label, ((0, q), (q, 2 * q)))
    return GeneratorBlock(label, anisotropic_block(k))


def _cyclic(m: int, q: int) -> exact.Mat:
    return plumbing_matrix(hj_expansion(m, q))


def anisotropic_block(k: int) -> exact.Mat:
    """3x3 matrix presenting the pairing (1/2^k) [[2,1],[1,2]] on (Z/2^k)^2.

    This is the inverse of R = [[2/2^k, 1/2^k, 1], [1/2^k, 2/2^k, 0], [1, 0, c]]
    with 3c = 2^(k+1) +- 1, which makes det R = +-1/4^k and R^-1 integral.
    """
    q = 2**k
    c = next(c for c in ((2 * q - 1) // 3, (2 * q + 1) // 3) if abs(3 * c - 2 * q) == 1)
    R = [[Fraction(2, q), Fraction(1, q), Fraction(1)], [Fraction(1, q), Fraction(2, q), Fraction(0)], [Fraction(1), Fraction(0), Fraction(c)]]
    inv = _rational_matrix_inverse(R)
    M = exact.as_matrix([[int(x) for x in row] for row in inv])
    if any(x.denominator != 1 for row in inv for x in row):
        raise AssertionError("anisotropic block is not integral")
    return M


def _rational_matrix_inverse(R):
    n = len(R)
    M = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(R)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


# ---------------------------------------------------------------- assembly

def _recipe_labels(T: TokenPackage) -> list[str]:
    labels = ["ZERO"] * T.b1
    for r in T.layers:
        q = r.p**r.k
        if r.kind == "odd":
            labels += [cyclic_label(q, "+")] * (r.n - 1)
            labels.append(cyclic_label(q, "+" if r.x == 1 else "-"))
        elif r.kind == "A":
            labels += [cyclic_label(q, 1)] * (r.n - 1)
            labels.append(cyclic_label(q, r.delta or 1))
        else:
            t = r.u // 4
            labels += [f"E({q})"] * (r.n // 2 - t) + [f"F({q})"] * t
    return labels


def _matches(T: TokenPackage, got: TokenPackage) -> bool:
    """Strict equality, plus extended_gauss whenever T carries it."""
    if T.extended_gauss is None:
        return T.strict() == got.strict()
    return T == got


def _check_realizable(T: TokenPackage) -> None:
    for r in T.layers:
        if r.kind == "E" and r.u not in (0, 4):
            raise UnrealizableU(f"type E layer k={r.k} has u={r.u}, outside {{0, 4}}", T)


def assemble_blocks(T: TokenPackage, cap_gauss: int = DEFAULT_GAUSS_CAP) -> list[GeneratorBlock]:
    """Generator blocks of B(T), verified against T."""
    _check_realizable(T)
    blocks = [block_for(lb) for lb in _recipe_labels(T)]
    got = canon(exact.direct_sum(*(b.matrix for b in blocks)), cap_gauss=cap_gauss)
    if _matches(T, got):
        return blocks
    labels = _search_two_primary(T)
    if labels is not None:
        blocks = [block_for(lb) for lb in labels]
        again = canon(exact.direct_sum(*(b.matrix for b in blocks)), cap_gauss=cap_gauss)
        if _matches(T, again):
            return blocks
        got = again
    raise RealizationMismatch(
        f"assembled matrix has package {got.serialize()} instead of {T.serialize()}", expected=T, actual=got
    )


def assemble(T: TokenPackage, cap_gauss: int = DEFAULT_GAUSS_CAP) -> exact.Mat:
    return exact.direct_sum(*(b.matrix for b in assemble_blocks(T, cap_gauss)))


def _search_two_primary(T: TokenPackage):
    """Labels for B(T) with the 2-primary part chosen by a normal-form search."""
    two = [r for r in T.layers if r.p == 2]
    if not two:
        return None
    E = max(r.k for r in two)
    shape = {r.k: (r.n, r.kind) for r in two}
    per_layer = []
    for r in two:
        opts = dyadic.layer_options(r.k, r.n, r.kind)
        if r.kind == "A":
            opts = [o for o in opts if o.delta == r.delta]
        per_layer.append(opts)
    index = {jt: i for i, jt in enumerate(dyadic.profile_index(E))}
    seen = set()
    for combo in product(*per_layer):
        W = dyadic.choice_profile(combo, E)
        if W in seen:
            continue
        seen.add(W)
        choice = dyadic.canonical_choice(shape, W, E)
        if any(c.delta != r.delta for c, r in zip(choice, two) if r.kind == "A"):
            continue
        us = {}
        for k in range(1, E + 1):
            if k not in shape or shape[k][1] == "E":
                w = W[index[(E, k - 1)]]
                if w is None:
                    break
                us[k] = w[1]
        else:
            if any(us[r.k] != r.u for r in two if r.kind == "E"):
                continue
            if T.extended_gauss is not None and tuple(sorted(us.items())) != T.extended_gauss:
                continue
            return _labels_with_choice(T, choice)
    return None


def _labels_with_choice(T: TokenPackage, choice) -> list[str]:
    by_k = {c.k: c for c in choice}
    labels = ["ZERO"] * T.b1
    for r in T.layers:
        if r.p != 2:
            labels += [lb for lb in _recipe_labels(TokenPackage(0, (r,))) if lb != "ZERO"]
            continue
        c = by_k[r.k]
        q = 2**r.k
        if c.kind == "A":
            labels += [cyclic_label(q, a % q) for a in c.numerators]
        else:
            labels += [f"E({q})"] * (c.n // 2 - c.f) + [f"Fw({q})"] * c.f
    return labels


# ---------------------------------------------------------------- shifts and descriptors

def shift(B: Sequence[Sequence[int]]) -> int:
    s = exact.signature(B)
    return 3 * s.b_plus - 2 * s.b_minus


@dataclass(frozen=True)
class RealizationDescriptor:
    """Symbolic object L_B[shift] with its factorization into local blocks."""

    B: exact.Mat
    shift: int
    factors: tuple[tuple[str, int], ...]

    def render(self) -> str:
        inner = " ⊗ ".join(f"{lb}[{s}]" for lb, s in self.factors) or "1"
        return f"L_B[{self.shift}] = {inner}"


def realize(T: TokenPackage, cap_gauss: int = DEFAULT_GAUSS_CAP) -> RealizationDescriptor:
    blocks = assemble_blocks(T, cap_gauss)
    B = exact.direct_sum(*(b.matrix for b in blocks))
    factors = tuple(
        (FREE_FACTOR, 0) if b.label == "ZERO" else (b.label, shift(b.matrix)) for b in blocks
    )
    total = shift(B)
    if sum(s for _, s in factors) != total:
        raise AssertionError("factor shifts do not add up to the global shift")
    return RealizationDescriptor(B, total, factors)


@dataclass(frozen=True)
class StabilizationReport:
    shift: int
    shift_plus: int
    shift_minus: int

    @property
    def ok(self) -> bool:
        return self.shift_plus == self.shift + 3 and self.shift_minus == self.shift - 2


def stabilize_shift_check(B: Sequence[Sequence[int]]) -> StabilizationReport:
    B = exact.as_matrix(B)
    rep = StabilizationReport(
        shift(B), shift(exact.direct_sum(B, ((1,),))), shift(exact.direct_sum(B, ((-1,),)))
    )
    if not rep.ok:
        raise AssertionError(f"stabilization shifts are off: {rep}")
    return rep


# ---------------------------------------------------------------- rank-one duality

@dataclass(frozen=True)
class Term:
    """Symbolic L(index), optionally dualized, shifted by ``shift``."""

    index: int
    dual: bool = False
    shift: int = 0

    def __str__(self) -> str:
        core = f"L({self.index})" + ("^∨" if self.dual else "")
        return core + (f"[{self.shift}]" if self.shift else "")


@dataclass(frozen=True)
class DualityRecord:
    n: int
    lhs: Term
    rhs: Term
    sign_ambiguity: tuple[int, int] = (1, -1)
    notes: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.lhs} ≃ {self.rhs}  (up to ±1)"


def normalize_term(t: Term) -> Term:
    """Rewrite L(n)^∨[s] as L(-n)[s - 1], the form used by the duality."""
    if t.dual:
        return Term(-t.index, False, t.shift - 1)
    return t


def dual_rank_one(n: int) -> DualityRecord:
    notes = ()
    if n == 2:
        notes = ("L(2)^∨ ≃ L(2)[4]",)
    return DualityRecord(n, Term(-n), Term(n, True, 1), notes=notes)
