import cmath

import pytest
from hypothesis import given, strategies as st

from linkcanon.cyclotomic import CycInt, match_eighth_root, root, sqrt2, sqrt_power_of_two
from linkcanon.errors import NoMatch


@st.composite
def cyc(draw, m=None):
    m = m or draw(st.integers(1, 5))
    coeffs = draw(st.lists(st.integers(-5, 5), min_size=1 << (m - 1), max_size=1 << (m - 1)))
    return CycInt(m, tuple(coeffs))


def close(a, b):
    return abs(a - b) < 1e-9


@given(cyc(), cyc())
def test_ring_operations_match_complex(a, b):
    assert close((a + b).to_complex(), a.to_complex() + b.to_complex())
    assert close((a * b).to_complex(), a.to_complex() * b.to_complex())
    assert close((a - b).to_complex(), a.to_complex() - b.to_complex())
    assert close(a.conj().to_complex(), a.to_complex().conjugate())


@given(cyc(), st.integers(0, 3))
def test_embedding_preserves_value_and_equality(a, extra):
    b = a.embed(a.m + extra)
    assert b == a and hash(b) == hash(a)
    assert close(b.to_complex(), a.to_complex())


def test_sqrt2():
    assert sqrt2() * sqrt2() == CycInt.integer(2)
    assert sqrt_power_of_two(8) * sqrt_power_of_two(8) == CycInt.integer(8)
    assert root(3, 8) == CycInt.integer(1)


@given(st.integers(0, 12), st.integers(0, 7))
def test_match_eighth_root(e, u):
    N = 1 << e
    S = sqrt_power_of_two(N) * root(3, u)
    assert match_eighth_root(S.embed(5), N) == u
    assert close(S.to_complex(), N**0.5 * cmath.exp(2j * cmath.pi * u / 8))


def test_match_rejects_zero_and_wrong_modulus():
    with pytest.raises(NoMatch):
        match_eighth_root(CycInt.zero(3), 1)
    with pytest.raises(NoMatch):
        match_eighth_root(CycInt.integer(2), 2)
