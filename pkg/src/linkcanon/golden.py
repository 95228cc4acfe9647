"""Worked examples with hand-checked tokens and pairing values, plus the selftest."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction as Q

from . import dictionary
from .canon import canon, parse, serialize
from .linkform import linking_value

# (name, matrix, expected token without extended_gauss)
GOLDEN = (
    ("(1)", ((1,),), "b1=0"),
    ("(3)", ((3,),), "b1=0;3:{k=1,n=1,x=1}"),
    ("[[0,3],[3,0]]", ((0, 3), (3, 0)), "b1=0;3:{k=1,n=2,x=-1}"),
    ("zero 2x2", ((0, 0), (0, 0)), "b1=2"),
    ("diag(2,2)", ((2, 0), (0, 2)), "b1=0;2:{k=1,n=2,A}"),
    ("[4]", ((4,),), "b1=0;2:{k=2,n=1,A,d=1}"),
    ("[-4]", ((-4,),), "b1=0;2:{k=2,n=1,A,d=3}"),
    ("[8]", ((8,),), "b1=0;2:{k=3,n=1,A,d=1}"),
    ("[[0,2],[2,0]]", ((0, 2), (2, 0)), "b1=0;2:{k=1,n=2,E,u=0}"),
    ("diag(4,3)", ((4, 0), (0, 3)), "b1=0;2:{k=2,n=1,A,d=1};3:{k=1,n=1,x=1}"),
)

# lambda(e_i, e_j) for the standard generators, computed by hand
PAIRINGS = {
    "(3)": ((Q(1, 3),),),
    "[[0,3],[3,0]]": ((Q(0), Q(1, 3)), (Q(1, 3), Q(0))),
    "[4]": ((Q(1, 4),),),
    "[-4]": ((Q(3, 4),),),
    "[8]": ((Q(1, 8),),),
    "[[0,2],[2,0]]": ((Q(0), Q(1, 2)), (Q(1, 2), Q(0))),
    "diag(4,3)": ((Q(1, 4), Q(0)), (Q(0), Q(1, 3))),
    "diag(2,2)": ((Q(1, 2), Q(0)), (Q(0), Q(1, 2))),
}

# generator label -> full token of the block on its own
BLOCKS = (
    ("ZERO", "b1=1"),
    ("A(3,+)", "b1=0;3:{k=1,n=1,x=1}"),
    ("A(3,-)", "b1=0;3:{k=1,n=1,x=-1}"),
    ("A(5,-)", "b1=0;5:{k=1,n=1,x=-1}"),
    ("A(9,-)", "b1=0;3:{k=2,n=1,x=-1}"),
    ("A(25,+)", "b1=0;5:{k=2,n=1,x=1}"),
    ("A(2,1)", "b1=0;2:{k=1,n=1,A}"),
    ("A(4,3)", "b1=0;2:{k=2,n=1,A,d=3};xg2=[(1,7)]"),
    ("A(8,5)", "b1=0;2:{k=3,n=1,A,d=5};xg2=[(1,5),(2,1)]"),
    ("A(16,7)", "b1=0;2:{k=4,n=1,A,d=7};xg2=[(1,7),(2,7),(3,7)]"),
    ("E(2)", "b1=0;2:{k=1,n=2,E,u=0};xg2=[(1,0)]"),
    ("E(4)", "b1=0;2:{k=2,n=2,E,u=0};xg2=[(1,0),(2,0)]"),
    ("Fw(4)", "b1=0;2:{k=2,n=2,E,u=0};xg2=[(1,4),(2,0)]"),
    ("Fw(8)", "b1=0;2:{k=3,n=2,E,u=0};xg2=[(1,0),(2,4),(3,0)]"),
)


def matrix_pairing(A) -> tuple:
    n = len(A)
    unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return tuple(tuple(linking_value(A, unit[i], unit[j]) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Row:
    name: str
    passed: bool
    detail: str
    seconds: float


def _row(name, check) -> Row:
    t0 = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as exc:  # a crashing check is a failing row, not a crashed selftest
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Row(name, bool(ok), detail, time.perf_counter() - t0)


def _golden_check(A, expected):
    def check():
        got = canon(A).serialize(strict=True)
        return got == expected, got
    return check


def _pairing_check(A, expected):
    def check():
        got = matrix_pairing(A)
        return got == expected, " ".join(str(x) for row in got for x in row)
    return check


def _hj_sweep(limit: int = 200):
    count = 0
    for m in range(2, limit + 1):
        for q in range(1, m):
            if math.gcd(m, q) == 1:
                dictionary.plumbing_matrix(dictionary.hj_expansion(m, q))
                count += 1
    return True, f"{count} pairs"


def _token_roundtrip():
    bad = []
    for _, A, _ in GOLDEN:
        T = canon(A)
        for strict in (False, True):
            text = serialize(T, strict=strict)
            if serialize(parse(text), strict=strict) != text:
                bad.append(text)
    return not bad, ", ".join(bad) or f"{2 * len(GOLDEN)} tokens"


def _realization_roundtrip():
    bad = []
    for name, A, _ in GOLDEN:
        T = canon(A)
        if canon(dictionary.assemble(T.strict())).strict() != T.strict():
            bad.append(name)
    return not bad, ", ".join(bad) or "all golden matrices"


def _block_check(label, expected):
    def check():
        got = canon(dictionary.block_for(label).matrix).serialize()
        return got == expected, got
    return check


def _plain_f_check():
    # the plain F(2^k) block is congruent to E(2^k); Fw carries the anisotropic form
    same = all(
        canon(dictionary.block_for(f"F({q})").matrix) == canon(dictionary.block_for(f"E({q})").matrix)
        for q in (2, 4, 8, 16)
    )
    return same, "F(q) and E(q) give equal packages" if same else "F(q) differs from E(q)"


def _shift_check():
    for _, A, _ in GOLDEN:
        dictionary.stabilize_shift_check(A)
    return True, "sh(B+(1)) = sh(B)+3 and sh(B+(-1)) = sh(B)-2"


def _duality_check():
    for n in range(-3, 4):
        rec = dictionary.dual_rank_one(n)
        if dictionary.normalize_term(rec.rhs) != rec.lhs:
            return False, f"n={n}: {rec}"
    return True, "n = -3..3"


def selftest() -> list[Row]:
    rows = [_row(f"canon {name}", _golden_check(A, tok)) for name, A, tok in GOLDEN]
    by_name = {name: A for name, A, _ in GOLDEN}
    rows += [_row(f"pairing {name}", _pairing_check(by_name[name], v)) for name, v in PAIRINGS.items()]
    rows.append(_row("HJ sweep m <= 200", _hj_sweep))
    rows.append(_row("token round trip", _token_roundtrip))
    rows.append(_row("realization round trip", _realization_roundtrip))
    rows += [_row(f"block {label}", _block_check(label, tok)) for label, tok in BLOCKS]
    rows.append(_row("plain F block", _plain_f_check))
    rows.append(_row("stabilization shifts", _shift_check))
    rows.append(_row("rank-one duality", _duality_check))
    return rows
