import sys
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def symmetric_matrices(draw, max_n=4, lo=-6, hi=6, min_n=1):
    n = draw(st.integers(min_n, max_n))
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = draw(st.integers(lo, hi))
    return tuple(tuple(r) for r in M)


@st.composite
def nonsingular_matrices(draw, max_n=4, lo=-6, hi=6):
    from linkcanon import exact

    A = draw(symmetric_matrices(max_n, lo, hi))
    if exact.det(A) == 0:
        # nudge the diagonal until invertible; keeps the draw cheap
        n = len(A)
        for shift in range(1, 8):
            B = tuple(tuple(A[i][j] + (shift if i == j else 0) for j in range(n)) for i in range(n))
            if exact.det(B) != 0:
                return B
    return A if exact.det(A) != 0 else tuple(tuple(int(i == j) for j in range(len(A))) for i in range(len(A)))


@st.composite
def two_primary_block_labels(draw, max_blocks=3, max_k=3):
    """Labels of generator blocks whose sum is a 2-primary linking pairing."""
    labels = []
    for _ in range(draw(st.integers(1, max_blocks))):
        k = draw(st.integers(1, max_k))
        q = 2**k
        kind = draw(st.sampled_from(["A", "A", "E", "Fw"]))
        if kind == "A":
            labels.append(f"A({q},{draw(st.sampled_from([1, 3, 5, 7])) % q or 1})")
        elif kind == "Fw" and k >= 2:
            labels.append(f"Fw({q})")
        else:
            labels.append(f"E({q})")
    return labels


def unimodular_strategy(n):
    from linkcanon.kirby import random_unimodular

    return st.integers(0, 2**32).map(lambda s: random_unimodular(n, s, steps=4))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
