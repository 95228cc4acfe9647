"""2-adic normalization of linking pairings.

The determinant refinement of an odd 2-primary layer depends on the chosen
basis as soon as several layers are present: for instance <1/2> + <1/8> and
<1/2> + <5/8> are isometric.  This module picks a canonical representative
instead.  It computes a family of Gauss sums

    W[j, t] = sum over x in G[2^j] of exp(2 pi i 2^t lambda(x, x))

which are isometry invariants, and then selects the lexicographically least
normal form (a diagonal tuple of numerators per odd layer, a count of
anisotropic blocks per even layer) that reproduces all of them.

Gauss sums are stored in the compact form sqrt(2)^h * zeta_8^s, or None for
zero; every sum that occurs here has that shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .errors import InvariantViolation

Compact = tuple  # (h, s) meaning sqrt(2)^h * zeta_8^s, or None for zero


def cmul(a, b):
    if a is None or b is None:
        return None
    return (a[0] + b[0], (a[1] + b[1]) % 8)


# ---------------------------------------------------------------- Jordan splitting

@dataclass(frozen=True)
class Block:
    """One orthogonal summand of a 2-primary linking pairing.

    kind "odd": the cyclic pairing <a / 2^scale> (a is kept mod 8).
    kind "E": (1/2^scale) [[0,1],[1,0]].  kind "F": (1/2^scale) [[2,1],[1,2]].
    """

    kind: str
    scale: int
    a: int = 1


def _v2(x: Fraction) -> int:
    n, d = x.numerator, x.denominator
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    while d % 2 == 0:
        d //= 2
        v -= 1
    return v


def _odd_part_mod8(x: Fraction) -> int:
    n, d = x.numerator, x.denominator
    while n % 2 == 0:
        n //= 2
    while d % 2 == 0:
        d //= 2
    return (n * d) % 8  # d^-1 = d mod 8 for odd d


def jordan_blocks(A: Sequence[Sequence[int]]) -> list[Block]:
    """Orthogonal splitting of the 2-primary part of the pairing x^T A^-1 y.

    Works on A itself over the 2-adic integers: a constituent 2^s <u> gives
    the cyclic pairing <u^-1 / 2^s>, and a binary even constituent with
    determinant 7 (resp. 3) mod 8 gives an E (resp. F) block.
    """
    M = [[Fraction(x) for x in row] for row in A]
    blocks = []
    while M:
        k = len(M)
        entries = [(i, j) for i in range(k) for j in range(i, k) if M[i][j] != 0]
        if not entries:
            raise InvariantViolation("singular matrix in 2-adic splitting")
        vmin = min(_v2(M[i][j]) for i, j in entries)
        diag = next((i for i in range(k) if M[i][i] != 0 and _v2(M[i][i]) == vmin), None)
        if diag is not None:
            d = M[diag][diag]
            if vmin > 0:
                blocks.append(Block("odd", vmin, _odd_part_mod8(d)))
            keep = [r for r in range(k) if r != diag]
            M = [[M[r][s] - M[r][diag] * M[diag][s] / d for s in keep] for r in keep]
            continue
        i, j = next((i, j) for i, j in entries if _v2(M[i][j]) == vmin)
        a, b, c = M[i][i], M[i][j], M[j][j]
        D = a * c - b * b
        if vmin > 0:
            cls = _odd_part_mod8(D)
            if cls not in (3, 7):
                raise InvariantViolation("binary even constituent with odd-type determinant")
            blocks.append(Block("E" if cls == 7 else "F", vmin))
        keep = [r for r in range(k) if r not in (i, j)]
        # M_rest - X B^-1 X^T with B^-1 = (1/D) [[c, -b], [-b, a]]
        M = [
            [
                M[r][s] - (M[r][i] * (c * M[i][s] - b * M[j][s]) + M[r][j] * (a * M[j][s] - b * M[i][s])) / D
                for s in keep
            ]
            for r in keep
        ]
    return blocks


def layer_shape(blocks: Sequence[Block]) -> dict[int, tuple[int, str]]:
    """Map scale k -> (rank, "A" or "E")."""
    out: dict[int, list] = {}
    for b in blocks:
        n, odd = out.get(b.scale, (0, False))
        out[b.scale] = (n + (1 if b.kind == "odd" else 2), odd or b.kind == "odd")
    return {k: (n, "A" if odd else "E") for k, (n, odd) in sorted(out.items())}


# ---------------------------------------------------------------- Gauss sums

def gauss_odd(a: int, M: int):
    """sum over y mod 2^M of exp(2 pi i a y^2 / 2^M), for odd a and M >= 1."""
    if M == 1:
        return None
    s = (1 if a % 4 == 1 else 7) + (4 if M % 2 and a % 8 in (3, 5) else 0)
    return (M + 1, s % 8)


def block_gauss(block: Block, j: int, t: int):
    """Sum over x in block[2^j] of exp(2 pi i 2^t lambda(x, x))."""
    s = block.scale
    m = min(j, s)
    if block.kind == "odd":
        e = s - 2 * m + t
        if e >= 0:
            return (2 * m, 0)
        M = -e
        g = gauss_odd(block.a, M)
        return None if g is None else (g[0] + 2 * (m - M), g[1])
    e = s - 2 * m + 1 + t
    if e >= 0:
        return (4 * m, 0)
    M = -e
    phase = 0 if block.kind == "E" else (4 * M) % 8
    return (2 * (2 * m - M), phase)


def profile_index(E: int) -> list[tuple[int, int]]:
    return [(j, t) for j in range(1, E + 1) for t in range(j)]


def gauss_profile(blocks: Sequence[Block], E: int) -> tuple:
    idx = profile_index(E)
    out = [(0, 0)] * len(idx)
    for b in blocks:
        out = [cmul(w, block_gauss(b, j, t)) for w, (j, t) in zip(out, idx)]
    return tuple(out)


def _vmul(x: tuple, y: tuple) -> tuple:
    return tuple(cmul(a, b) for a, b in zip(x, y))


# ---------------------------------------------------------------- normal forms

@dataclass(frozen=True)
class LayerChoice:
    """Normal form of one 2-primary layer: numerators for odd layers, F count for even."""

    k: int
    n: int
    kind: str  # "A" or "E"
    numerators: tuple[int, ...] = ()
    f: int = 0

    @property
    def delta(self):
        if self.kind != "A" or self.k == 1:
            return None
        prod = 1
        for a in self.numerators:
            prod *= a
        return prod % (4 if self.k == 2 else 8)

    def blocks(self) -> list[Block]:
        if self.kind == "A":
            return [Block("odd", self.k, a % 8) for a in self.numerators]
        pairs = self.n // 2
        return [Block("E", self.k)] * (pairs - self.f) + [Block("F", self.k)] * self.f


def unit_classes(k: int) -> tuple[int, ...]:
    return (1,) if k == 1 else (1, 3) if k == 2 else (1, 3, 5, 7)


def layer_options(k: int, n: int, kind: str) -> list[LayerChoice]:
    """Candidate normal forms of a layer, sorted by (delta, numerators)."""
    if kind == "E":
        if n % 2:
            raise InvariantViolation("even layer of odd rank")
        fs = (0,) if k == 1 or n == 0 else (0, 1)
        return [LayerChoice(k, n, "E", (), f) for f in fs]
    others = unit_classes(k)[1:]
    opts = []
    for r in range(min(n, 3) + 1):
        for tail in combinations_with_replacement(others, r):
            opts.append(LayerChoice(k, n, "A", (1,) * (n - r) + tail))
    return sorted(opts, key=lambda c: (c.delta or 0, c.numerators))


def choice_profile(choices: Sequence[LayerChoice], E: int) -> tuple:
    return gauss_profile([b for c in choices for b in c.blocks()], E)


def canonical_choice(shape: dict[int, tuple[int, str]], target: tuple, E: int) -> list[LayerChoice]:
    """Least normal form (layer by layer) whose Gauss profile equals ``target``."""
    layers = []
    for k, (n, kind) in sorted(shape.items()):
        grouped: dict[tuple, LayerChoice] = {}
        for opt in layer_options(k, n, kind):
            grouped.setdefault(gauss_profile(opt.blocks(), E), opt)
        layers.append(grouped)
    unit = tuple((0, 0) for _ in profile_index(E))
    # suffix[i] = every profile reachable by layers i, i+1, ...
    suffix = [set() for _ in range(len(layers) + 1)]
    suffix[-1] = {unit}
    for i in range(len(layers) - 1, -1, -1):
        suffix[i] = {_vmul(p, s) for p in layers[i] for s in suffix[i + 1]}
    if target not in suffix[0]:
        raise InvariantViolation("Gauss profile is not reached by any normal form")
    goals = {target}
    chosen = []
    for i, grouped in enumerate(layers):
        order = sorted(grouped.items(), key=lambda kv: (kv[1].delta or 0, kv[1].numerators, kv[1].f))
        for prof, opt in order:
            nxt = {s for s in suffix[i + 1] for g in goals if _vmul(prof, s) == g}
            if nxt:
                chosen.append(opt)
                goals = nxt
                break
    return chosen
