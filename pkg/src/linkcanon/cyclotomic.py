"""Exact arithmetic in Z[zeta] for zeta a primitive 2^m-th root of unity.

Elements are stored in the power basis 1, zeta, ..., zeta^(L-1) with
L = 2^(m-1), using zeta^L = -1.  That relation is the full cyclotomic
polynomial for 2-power orders, so the representation is unique.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoMatch


@dataclass(frozen=True)
class CycInt:
    m: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("conductor exponent must be >= 1")
        if len(self.coeffs) != 1 << (self.m - 1):
            raise ValueError("coefficient vector has the wrong length")

    @classmethod
    def zero(cls, m: int) -> CycInt:
        return cls(m, (0,) * (1 << (m - 1)))

    @classmethod
    def integer(cls, n: int, m: int = 3) -> CycInt:
        return cls(m, (n,) + (0,) * ((1 << (m - 1)) - 1))

    @classmethod
    def from_exponent_counts(cls, m: int, counts) -> CycInt:
        """Sum of counts[j] * zeta^j for j in [0, 2^m)."""
        half = 1 << (m - 1)
        c = [0] * half
        for j, n in enumerate(counts):
            if n:
                j %= 1 << m
                if j >= half:
                    c[j - half] -= n
                else:
                    c[j] += n
        return cls(m, tuple(c))

    def embed(self, m: int) -> CycInt:
        """Image in the ring of conductor 2^m via zeta_{2^a} = zeta_{2^m}^(2^(m-a))."""
        if m < self.m:
            raise ValueError("can only embed into a larger ring")
        if m == self.m:
            return self
        step = 1 << (m - self.m)
        c = [0] * (1 << (m - 1))
        for j, x in enumerate(self.coeffs):
            c[j * step] = x
        return CycInt(m, tuple(c))

    def _unify(self, other: CycInt):
        m = max(self.m, other.m)
        return self.embed(m), other.embed(m)

    def __add__(self, other: CycInt) -> CycInt:
        a, b = self._unify(other)
        return CycInt(a.m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __neg__(self) -> CycInt:
        return CycInt(self.m, tuple(-x for x in self.coeffs))

    def __sub__(self, other: CycInt) -> CycInt:
        return self + (-other)

    def __mul__(self, other: CycInt) -> CycInt:
        a, b = self._unify(other)
        half = len(a.coeffs)
        out = [0] * half
        bn = [(j, y) for j, y in enumerate(b.coeffs) if y]
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in bn:
                k = i + j
                if k >= half:
                    out[k - half] -= x * y
                else:
                    out[k] += x * y
        return CycInt(a.m, tuple(out))

    def conj(self) -> CycInt:
        """Complex conjugation zeta -> zeta^-1."""
        half = len(self.coeffs)
        out = [0] * half
        out[0] = self.coeffs[0]
        for j in range(1, half):
            # zeta^-j = zeta^(2L - j) = -zeta^(L - j)
            out[half - j] -= self.coeffs[j]
        return CycInt(self.m, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycInt):
            return NotImplemented
        a, b = self._unify(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        # hash on the minimal conductor so that equal elements hash alike
        c, m = self.coeffs, self.m
        while m > 1 and all(x == 0 for x in c[1::2]):
            c, m = c[::2], m - 1
        return hash((m, c))

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / (1 << self.m))
        return sum(x * z**j for j, x in enumerate(self.coeffs))


def root(m: int, j: int) -> CycInt:
    """zeta_{2^m}^j in canonical form."""
    counts = [0] * (1 << m)
    counts[j % (1 << m)] = 1
    return CycInt.from_exponent_counts(m, counts)


def sqrt2() -> CycInt:
    """zeta_8 + zeta_8^-1."""
    return root(3, 1) + root(3, 7)


def sqrt_power_of_two(N: int) -> CycInt:
    """The exact element sqrt(N) for N a power of two."""
    if N < 1 or N & (N - 1):
        raise ValueError(f"{N} is not a power of two")
    e = N.bit_length() - 1
    base = CycInt.integer(1 << (e // 2))
    return base * sqrt2() if e % 2 else base


def match_eighth_root(S: CycInt, N: int) -> int:
    """The unique u in Z/8 with S = sqrt(N) * zeta_8^u."""
    r = sqrt_power_of_two(N)
    for u in range(8):
        if r * root(3, u) == S:
            return u
    raise NoMatch(f"Gauss sum is not sqrt({N}) times an eighth root of unity")
