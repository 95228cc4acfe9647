"""Brute-force reference implementations used only by the tests.

Everything here is deliberately naive: direct enumeration of finite groups,
floating point Gauss sums and exhaustive isometry search.  They share no
code with the package beyond plain data.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction


def elements(factors):
    return itertools.product(*(range(d) for d in factors))


def pairing(gram, x, y):
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    total += xi * yj * gram[i][j]
    return total % 1


def element_order(factors, x):
    o = 1
    for d, c in zip(factors, x):
        o = math.lcm(o, d // math.gcd(d, c))
    return o


def gauss_sum_float(factors, gram, scale=1, subgroup_exp=None):
    """sum exp(2 pi i * scale * lambda(x,x)) over x (optionally with 2^j x = 0)."""
    total = 0j
    for x in elements(factors):
        if subgroup_exp is not None and element_order(factors, x) > 2**subgroup_exp:
            continue
        total += cmath.exp(2j * math.pi * float(scale * pairing(gram, x, x)))
    return total


def is_isometric(f1, g1, f2, g2):
    """Exhaustive search for an isometry between two linking pairings."""
    if math.prod(f1) != math.prod(f2):
        return False
    if sorted(f1) != sorted(f2):
        # compare abstract groups through orders of elements
        c1 = sorted(element_order(f1, x) for x in elements(f1))
        c2 = sorted(element_order(f2, x) for x in elements(f2))
        if c1 != c2:
            return False
    pool = list(elements(f2))
    by_order = {}
    for y in pool:
        by_order.setdefault(element_order(f2, y), []).append(y)
    n = len(f1)
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]

    def candidates(i):
        return [y for o, ys in by_order.items() if f1[i] % o == 0 for y in ys]

    images = []

    def extend(i):
        if i == n:
            return True
        for y in candidates(i):
            if pairing(g2, y, y) != g1[i][i] % 1:
                continue
            if any(pairing(g2, y, images[j]) != g1[i][j] % 1 for j in range(i)):
                continue
            images.append(y)
            if extend(i + 1):
                return True
            images.pop()
        return False

    return extend(0)


def smith_factors_by_minors(A):
    """Invariant factors from gcds of k x k minors (nonsingular square A)."""
    n = len(A)

    def det(M):
        if not M:
            return 1
        return sum(
            (-1) ** j * M[0][j] * det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(len(M))
        )

    g = [1]
    for k in range(1, n + 1):
        acc = 0
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                acc = math.gcd(acc, det([[A[r][c] for c in cols] for r in rows]))
        g.append(acc)
    return [g[k] // g[k - 1] if g[k - 1] else 0 for k in range(1, n + 1)]


def inertia_float(A):
    import numpy as np

    w = np.linalg.eigvalsh(np.array(A, dtype=float))
    return int((w > 1e-9).sum()), int((w < -1e-9).sum()), int((abs(w) <= 1e-9).sum())


def quotient_gauss_float(factors, gram, k):
    """Sum over G/G[2^k] of exp(2 pi i 2^(k-1) lambda(x,x)), via the full group.

    The summand is constant on cosets of G[2^k], so the sum over G is |G[2^k]|
    times the quotient sum.
    """
    total = gauss_sum_float(factors, gram, scale=2 ** (k - 1))
    kernel = sum(1 for x in elements(factors) if element_order(factors, x) <= 2**k)
    return total / kernel


def eighth_root_phase(z, modulus_sq):
    """u with z = sqrt(modulus_sq) * zeta_8^u, or None if z has another modulus."""
    if abs(abs(z) ** 2 - modulus_sq) > 1e-6:
        return None
    return round(cmath.phase(z) / (math.pi / 4)) % 8
