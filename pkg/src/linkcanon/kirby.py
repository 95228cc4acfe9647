"""Kirby moves on surgery matrices and a randomized invariance harness.

A handle slide acts on the matrix by unimodular congruence A -> P^T A P, and a
blow-up or blow-down adds or removes a split (+1) or (-1) diagonal block.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence, Union

from . import exact
from .canon import DEFAULT_GAUSS_CAP, TokenPackage, canon_from_discriminant
from .errors import BadDestabilize, LinkcanonError
from .linkform import DiscriminantPresentation, discriminant

DEFAULT_MAX_SIZE = 12


@dataclass(frozen=True)
class Congruence:
    P: exact.Mat


@dataclass(frozen=True)
class Stabilize:
    sign: int


@dataclass(frozen=True)
class Destabilize:
    index: int


KirbyMove = Union[Congruence, Stabilize, Destabilize]


def walk_seed(base: int, index: int) -> int:
    """Independent 64-bit seed for walk ``index`` of a run seeded with ``base``."""
    digest = hashlib.sha256(f"{base}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _elementary(n: int, rng: random.Random) -> list[list[int]]:
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    kind = rng.choice(("slide", "slide", "slide", "swap", "sign")) if n > 1 else "sign"
    if kind == "slide":
        i, j = rng.sample(range(n), 2)
        P[i][j] = rng.choice((-3, -2, -1, 1, 2, 3))
    elif kind == "swap":
        i, j = rng.sample(range(n), 2)
        P[i], P[j] = P[j], P[i]
    else:
        i = rng.randrange(n)
        P[i][i] = -1
    return P


def random_unimodular(n: int, seed: int, steps: int = 4) -> exact.Mat:
    """Product of ``steps`` random transvections, transpositions and sign flips."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = random.Random(seed)
    P = exact.identity(n)
    for _ in range(steps):
        P = exact.matmul(P, _elementary(n, rng))
    if abs(exact.det(P)) != 1:
        raise AssertionError("random matrix is not unimodular")
    return P


def legal_destabilizations(A: exact.Mat) -> list[int]:
    n = len(A)
    return [
        i
        for i in range(n)
        if A[i][i] in (1, -1) and all(A[i][j] == 0 and A[j][i] == 0 for j in range(n) if j != i)
    ]


def apply(A: Sequence[Sequence[int]], move: KirbyMove) -> exact.Mat:
    A = exact.as_matrix(A)
    if isinstance(move, Congruence):
        if len(move.P) != len(A) or abs(exact.det(move.P)) != 1:
            raise ValueError("congruence needs a unimodular matrix of matching size")
        return exact.congruence(A, move.P)
    if isinstance(move, Stabilize):
        if move.sign not in (1, -1):
            raise ValueError("stabilization sign must be +1 or -1")
        return exact.direct_sum(A, ((move.sign,),))
    if isinstance(move, Destabilize):
        i = move.index
        if i not in legal_destabilizations(A):
            raise BadDestabilize(f"entry {i} is not a split +-1 block")
        keep = [r for r in range(len(A)) if r != i]
        return tuple(tuple(A[r][s] for s in keep) for r in keep)
    raise TypeError(f"unknown move {move!r}")


def random_move(A: exact.Mat, rng: random.Random, max_size: int = DEFAULT_MAX_SIZE) -> KirbyMove:
    n = len(A)
    options = ["congruence"] * 3 if n else []
    if n < max_size:
        options.append("stabilize")
    legal = legal_destabilizations(A)
    if legal:
        options.append("destabilize")
    kind = rng.choice(options)
    if kind == "congruence":
        return Congruence(random_unimodular(n, rng.getrandbits(64), steps=rng.randint(1, 2)))
    if kind == "stabilize":
        return Stabilize(rng.choice((1, -1)))
    return Destabilize(rng.choice(legal))


# ---------------------------------------------------------------- harness

@dataclass(frozen=True)
class OrbitReport:
    seed: int
    steps: int
    initial: exact.Mat
    final: exact.Mat
    packages: tuple  # ((step, TokenPackage or None), ...)
    passed: bool
    first_divergence: int | None
    error: str | None = None


def corrupt_gram(disc: DiscriminantPresentation) -> DiscriminantPresentation:
    """Test-only fault: zero the pairings of the first generator (or fake a free rank)."""
    if not disc.gram:
        return replace(disc, b1=disc.b1 + 1)
    g = [list(row) for row in disc.gram]
    for j in range(len(g)):
        g[0][j] = g[j][0] = Fraction(0)
    return replace(disc, gram=tuple(tuple(r) for r in g))


Fault = Callable[[DiscriminantPresentation], DiscriminantPresentation]


def _package(A: exact.Mat, cap_gauss: int, fault: Fault | None) -> TokenPackage:
    disc = discriminant(A)
    if fault is not None:
        disc = fault(disc)
    return canon_from_discriminant(disc, cap_gauss)


def random_walk(
    A: Sequence[Sequence[int]],
    seed: int,
    steps: int,
    checkpoint_every: int = 1,
    max_size: int = DEFAULT_MAX_SIZE,
    cap_gauss: int = DEFAULT_GAUSS_CAP,
    fault: Fault | None = None,
):
    """Apply ``steps`` random moves, comparing packages at every checkpoint.

    The fault hook, if given, is applied at every checkpoint after the start.
    Returns (final matrix, OrbitReport).
    """
    A = exact.as_matrix(A)
    if len(A) > max_size:
        raise ValueError(f"matrix larger than the size cap {max_size}")
    rng = random.Random(seed)
    ref = _package(A, cap_gauss, None)
    packages = [(0, ref)]
    first, error = None, None
    cur = A
    for step in range(1, steps + 1):
        cur = apply(cur, random_move(cur, rng, max_size))
        if step % checkpoint_every and step != steps:
            continue
        try:
            T = _package(cur, cap_gauss, fault)
        except LinkcanonError as exc:
            T = None
            error = error or f"step {step}: {type(exc).__name__}: {exc}"
        packages.append((step, T))
        if T != ref and first is None:
            first = step
    report = OrbitReport(seed, steps, A, cur, tuple(packages), first is None, first, error)
    return cur, report


def run_walks(
    A: Sequence[Sequence[int]],
    walks: int,
    steps: int,
    seed: int = 0,
    checkpoint_every: int = 1,
    **kwargs,
) -> list[OrbitReport]:
    return [
        random_walk(A, walk_seed(seed, w), steps, checkpoint_every=checkpoint_every, **kwargs)[1]
        for w in range(walks)
    ]
