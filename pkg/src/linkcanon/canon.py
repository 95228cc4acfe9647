"""Canonical token package of a symmetric integer matrix.

The package records the free rank, and for every prime p dividing the torsion
order and every exponent k with a nontrivial homogeneous layer:

* odd p: the layer rank n and the Legendre symbol x of the layer determinant;
* p = 2, odd layer (type A): n and the determinant class delta;
* p = 2, even layer (type E): n and the Gauss invariant u in Z/8.

``extended_gauss`` additionally lists u for every k up to the largest
2-exponent at which the quadratic refinement is defined, whether or not the
layer is nontrivial.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from . import dyadic, exact
from .cyclotomic import CycInt, match_eighth_root
from .errors import (
    CapExceeded,
    DegenerateLayer,
    EvenDeterminant,
    InvariantViolation,
    NonIntegral,
    ParseError,
    WrongType,
)
from .linkform import DiscriminantPresentation, discriminant

DEFAULT_GAUSS_CAP = 2**20


# ---------------------------------------------------------------- data

@dataclass(frozen=True)
class LayerRecord:
    """One homogeneous layer.  ``kind`` is "odd", "A" or "E"."""

    p: int
    k: int
    n: int
    kind: str
    x: int | None = None
    delta: int | None = None  # None stands for the absent value at k = 1
    u: int | None = None

    def __post_init__(self):
        if self.n < 0 or self.k < 1:
            raise ValueError("layer needs k >= 1 and n >= 0")
        if self.kind == "odd":
            if self.p == 2 or self.x not in (1, -1):
                raise ValueError("odd layer needs an odd prime and x = +-1")
        elif self.kind == "A":
            allowed = {None} if self.k == 1 else {1, 3} if self.k == 2 else {1, 3, 5, 7}
            if self.p != 2 or self.delta not in allowed:
                raise ValueError(f"delta {self.delta} not allowed at k={self.k}")
        elif self.kind == "E":
            if self.p != 2 or self.u is None or not 0 <= self.u < 8 or self.n % 2:
                raise ValueError("even layer needs p = 2, even n and u in 0..7")
        else:
            raise ValueError(f"unknown layer kind {self.kind!r}")


@dataclass(frozen=True)
class TokenPackage:
    b1: int
    layers: tuple[LayerRecord, ...] = ()
    extended_gauss: tuple[tuple[int, int], ...] | None = None
    torsion_order: int = field(default=1, compare=False)
    invariant_factors: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        keys = [(r.p, r.k) for r in self.layers]
        if keys != sorted(set(keys)):
            raise ValueError("layers must be sorted by (p, k) without duplicates")
        if not self.extended_gauss:
            # an empty list carries no information beyond the layers
            object.__setattr__(self, "extended_gauss", None)
        else:
            object.__setattr__(self, "extended_gauss", tuple(tuple(e) for e in self.extended_gauss))
        object.__setattr__(self, "torsion_order", math.prod(r.p ** (r.k * r.n) for r in self.layers))
        object.__setattr__(self, "invariant_factors", _factors_from_layers(self.layers))

    def strict(self) -> TokenPackage:
        """The package without ``extended_gauss``."""
        return replace(self, extended_gauss=None)

    def same_as(self, other: TokenPackage, strict: bool = False) -> bool:
        if strict:
            return self.strict() == other.strict()
        return self == other

    def serialize(self, strict: bool = False) -> str:
        return serialize(self, strict=strict)


def _factors_from_layers(layers) -> tuple[int, ...]:
    """Invariant factors > 1 of the group sum over layers of (Z/p^k)^n."""
    per_prime: dict[int, list[int]] = {}
    for r in layers:
        per_prime.setdefault(r.p, []).extend([r.p**r.k] * r.n)
    length = max((len(v) for v in per_prime.values()), default=0)
    out = [1] * length
    for powers in per_prime.values():
        powers = sorted(powers)
        for i, q in enumerate(powers):
            out[length - len(powers) + i] *= q
    return tuple(out)


@dataclass(frozen=True)
class LayerMatrix:
    """Layer form over F_p; for p = 2 also the integral matrix C mod 2^k."""

    p: int
    k: int
    entries: tuple
    C: tuple | None = None


# ---------------------------------------------------------------- layers

def primary_generators(d: Sequence[int], p: int) -> list[tuple[int, int, int]]:
    """(index, v_p(d_i), d_i / p^v) for every d_i divisible by p."""
    out = []
    for i, di in enumerate(d):
        if di % p == 0:
            e = exact.valuation(di, p)
            out.append((i, e, di // p**e))
    return out


def primary_gram(gram, d: Sequence[int], p: int):
    """Pairing on the p-primary generators s_i g_i, as exponents and Fractions."""
    gens = primary_generators(d, p)
    exps = [e for _, e, _ in gens]
    P = [[(gram[i][j] * si * sj) % 1 for j, _, sj in gens] for i, _, si in gens]
    return exps, P


def layer_matrix(gram, d: Sequence[int], p: int, k: int) -> LayerMatrix:
    gens = [(i, s) for i, e, s in primary_generators(d, p) if e == k]
    q = p**k
    C = []
    for i, si in gens:
        row = []
        for j, sj in gens:
            v = gram[i][j] * si * sj * q
            if v.denominator != 1:
                raise NonIntegral(f"p^k * pairing not integral at ({i},{j})")
            row.append(int(v) % q)
        C.append(tuple(row))
    entries = tuple(tuple(x % p for x in row) for row in C)
    return LayerMatrix(p, k, entries, tuple(C) if p == 2 else None)


def _det_mod(M, mod: int) -> int:
    return exact.det(M) % mod


def odd_layer_invariant(B: LayerMatrix) -> int:
    if not B.entries:
        raise DegenerateLayer("empty layer")
    dm = _det_mod(B.entries, B.p)
    if dm == 0:
        raise DegenerateLayer(f"layer form at p={B.p}, k={B.k} is singular")
    return exact.legendre(dm, B.p)


def two_layer_type(C) -> str:
    return "A" if any(C[i][i] % 2 for i in range(len(C))) else "E"


def two_typeA_delta(C, k: int):
    """Determinant class of a type A layer read in the given basis."""
    if two_layer_type(C) != "A":
        raise WrongType("layer is of type E")
    dm = exact.det(C)
    if dm % 2 == 0:
        raise EvenDeterminant("type A layer with even determinant")
    if k == 1:
        return None
    return dm % (4 if k == 2 else 8)


# ---------------------------------------------------------------- Gauss sums

def enumerate_quotient_H(exps: Sequence[int], k: int, cap: int = DEFAULT_GAUSS_CAP) -> Iterator[tuple[int, ...]]:
    """Coset representatives of G/G[2^k] as coefficient vectors."""
    radii = [2 ** (e - k) if e > k else 1 for e in exps]
    if math.prod(radii) > cap:
        raise CapExceeded(f"|H_{k}| = {math.prod(radii)} exceeds the cap {cap}")
    return product(*(range(r) for r in radii))


def gauss_sum(exps: Sequence[int], P, k: int, cap: int = DEFAULT_GAUSS_CAP) -> tuple[CycInt, int]:
    """(S, |H_k|) with S = sum over H_k of exp(2 pi i 2^(k-1) lambda(x, x)), exactly."""
    E = max(exps, default=0)
    m = max(3, E + 1)
    mod = 1 << m
    idx = [a for a, e in enumerate(exps) if e > k]
    radii = [2 ** (exps[a] - k) for a in idx]
    size = math.prod(radii)
    if size > cap:
        raise CapExceeded(f"|H_{k}| = {size} exceeds the cap {cap}")
    scale = Fraction(2 ** (k - 1) * mod)
    diag, off = [], []
    for pos, a in enumerate(idx):
        v = P[a][a] * scale
        if v.denominator != 1:
            raise NonIntegral("Gauss exponent is not integral")
        diag.append(int(v) % mod)
        row = []
        for b in idx[pos + 1:]:
            w = 2 * P[a][b] * scale
            if w.denominator != 1:
                raise NonIntegral("Gauss exponent is not integral")
            row.append(int(w) % mod)
        off.append(row)
    counts = [0] * mod
    r = len(idx)
    if r == 0:
        counts[0] = 1
        return CycInt.from_exponent_counts(m, counts), 1

    def walk(pos: int, value: int, lin: list[int]) -> None:
        qd, radius, l0 = diag[pos], radii[pos], lin[pos]
        if pos == r - 1:
            for c in range(radius):
                counts[(value + c * (c * qd + l0)) % mod] += 1
            return
        row = off[pos]
        for c in range(radius):
            nxt = lin if c == 0 else [x if t <= pos else x + c * row[t - pos - 1] for t, x in enumerate(lin)]
            walk(pos + 1, (value + c * (c * qd + l0)) % mod, nxt)

    walk(0, 0, [0] * r)
    return CycInt.from_exponent_counts(m, counts), size


def gauss_u(exps: Sequence[int], P, k: int, cap: int = DEFAULT_GAUSS_CAP) -> int:
    S, size = gauss_sum(exps, P, k, cap)
    return match_eighth_root(S, size)


# ---------------------------------------------------------------- canon

def _two_primary_records(disc: DiscriminantPresentation, cap: int):
    d = disc.invariant_factors
    exps, P = primary_gram(disc.gram, d, 2)
    if not exps:
        return [], ()
    ks = sorted(set(exps))
    shape = {}
    for k in ks:
        C = layer_matrix(disc.gram, d, 2, k).C
        if exact.det(C) % 2 == 0:
            raise DegenerateLayer(f"layer form at p=2, k={k} is singular")
        shape[k] = (len(C), two_layer_type(C))
    blocks = dyadic.jordan_blocks(disc.A_red)
    if dyadic.layer_shape(blocks) != shape:
        raise InvariantViolation("2-adic splitting disagrees with the Smith layers")
    E = max(ks)
    choice = dyadic.canonical_choice(shape, dyadic.gauss_profile(blocks, E), E)
    us = {}
    for k in range(1, E + 1):
        if k not in shape or shape[k][1] == "E":
            us[k] = gauss_u(exps, P, k, cap)
    records = []
    for c in choice:
        if c.kind == "A":
            records.append(LayerRecord(2, c.k, c.n, "A", delta=c.delta))
        else:
            records.append(LayerRecord(2, c.k, c.n, "E", u=us[c.k]))
    return records, tuple(sorted(us.items()))


def canon(A: Sequence[Sequence[int]], cap_gauss: int = DEFAULT_GAUSS_CAP, bit_cap: int = exact.DEFAULT_BIT_CAP) -> TokenPackage:
    disc = discriminant(A, bit_cap=bit_cap)
    return canon_from_discriminant(disc, cap_gauss)


def canon_from_discriminant(disc: DiscriminantPresentation, cap_gauss: int = DEFAULT_GAUSS_CAP) -> TokenPackage:
    d = disc.invariant_factors
    primes = sorted({p for x in d for p in exact.prime_factors(x)})
    _check_orthogonality(disc, primes)
    layers: list[LayerRecord] = []
    xg2: tuple = ()
    for p in primes:
        if p == 2:
            recs, xg2 = _two_primary_records(disc, cap_gauss)
            layers.extend(recs)
            continue
        for k in sorted({e for _, e, _ in primary_generators(d, p)}):
            B = layer_matrix(disc.gram, d, p, k)
            layers.append(LayerRecord(p, k, len(B.entries), "odd", x=odd_layer_invariant(B)))
    T = TokenPackage(disc.b1, tuple(layers), xg2)
    if T.torsion_order != disc.torsion_order or T.invariant_factors != d:
        raise InvariantViolation("layer ranks do not reproduce the invariant factors")
    return T


def _check_orthogonality(disc: DiscriminantPresentation, primes) -> None:
    d = disc.invariant_factors
    gens = {p: primary_generators(d, p) for p in primes}
    for a, p in enumerate(primes):
        for q in primes[a + 1:]:
            for i, _, si in gens[p]:
                for j, _, sj in gens[q]:
                    if (disc.gram[i][j] * si * sj) % 1:
                        raise InvariantViolation(f"{p}- and {q}-primary parts are not orthogonal")


# ---------------------------------------------------------------- text form

def _layer_text(r: LayerRecord) -> str:
    head = f"k={r.k},n={r.n},"
    if r.kind == "odd":
        return head + f"x={r.x}"
    if r.kind == "A":
        return head + ("A" if r.delta is None else f"A,d={r.delta}")
    return head + f"E,u={r.u}"


def serialize(T: TokenPackage, strict: bool = False) -> str:
    parts = [f"b1={T.b1}"]
    for p in sorted({r.p for r in T.layers}):
        body = ",".join(_layer_text(r) for r in T.layers if r.p == p)
        parts.append(f"{p}:{{{body}}}")
    if not strict and T.extended_gauss:
        parts.append("xg2=[" + ",".join(f"({k},{u})" for k, u in T.extended_gauss) + "]")
    return ";".join(parts)


_INT = re.compile(r"-?\d+")


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, msg: str):
        raise ParseError(msg, self.pos)

    def expect(self, lit: str) -> None:
        if not self.text.startswith(lit, self.pos):
            self.fail(f"expected {lit!r}")
        self.pos += len(lit)

    def accept(self, lit: str) -> bool:
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def integer(self, signed: bool = False) -> int:
        mt = _INT.match(self.text, self.pos)
        if not mt or (not signed and mt.group().startswith("-")):
            self.fail("expected an integer")
        s = mt.group().lstrip("-")
        if len(s) > 1 and s.startswith("0"):
            self.fail("leading zeros are not canonical")
        self.pos = mt.end()
        return int(mt.group())

    def at_end(self) -> bool:
        return self.pos == len(self.text)


def parse(text: str) -> TokenPackage:
    """Inverse of :func:`serialize`; raises ParseError with a position."""
    rd = _Reader(text)
    rd.expect("b1=")
    b1 = rd.integer()
    layers: list[LayerRecord] = []
    xg2 = None
    last_p = 1
    while not rd.at_end():
        rd.expect(";")
        if rd.accept("xg2=["):
            xg2 = []
            while not rd.accept("]"):
                if xg2:
                    rd.expect(",")
                rd.expect("(")
                k = rd.integer()
                rd.expect(",")
                start = rd.pos
                u = rd.integer()
                if not 0 <= u < 8:
                    raise ParseError("u must lie in 0..7", start)
                rd.expect(")")
                xg2.append((k, u))
            if [k for k, _ in xg2] != sorted({k for k, _ in xg2}):
                rd.fail("xg2 entries must be sorted by k")
            if not rd.at_end():
                rd.fail("trailing text after xg2")
            break
        start = rd.pos
        p = rd.integer()
        if not exact.is_prime(p) or p <= last_p:
            raise ParseError("primes must be ascending and prime", start)
        last_p = p
        rd.expect(":{")
        first = True
        while not rd.accept("}"):
            if not first:
                rd.expect(",")
            first = False
            start = rd.pos
            rd.expect("k=")
            k = rd.integer()
            rd.expect(",n=")
            n = rd.integer()
            rd.expect(",")
            try:
                if p != 2:
                    rd.expect("x=")
                    x = rd.integer(signed=True)
                    rec = LayerRecord(p, k, n, "odd", x=x)
                elif rd.accept("A"):
                    delta = None
                    if rd.accept(",d="):
                        delta = rd.integer()
                    rec = LayerRecord(p, k, n, "A", delta=delta)
                else:
                    rd.expect("E,u=")
                    rec = LayerRecord(p, k, n, "E", u=rd.integer())
            except ValueError as exc:
                raise ParseError(str(exc), start) from None
            if layers and (layers[-1].p, layers[-1].k) >= (p, k):
                raise ParseError("layers must be sorted by k", start)
            layers.append(rec)
        if first:
            rd.fail("empty prime block")
    try:
        return TokenPackage(b1, tuple(layers), None if xg2 is None else tuple(xg2))
    except ValueError as exc:
        raise ParseError(str(exc), len(text)) from None
