from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import symmetric_matrices, unimodular_strategy
from linkcanon import exact
from linkcanon.canon import (
    LayerRecord,
    TokenPackage,
    canon,
    enumerate_quotient_H,
    gauss_u,
    layer_matrix,
    odd_layer_invariant,
    parse,
    serialize,
    two_layer_type,
    two_typeA_delta,
)
from linkcanon.errors import CapExceeded, DegenerateLayer, EvenDeterminant, ParseError, WrongType
from linkcanon.golden import GOLDEN


@pytest.mark.parametrize("name,A,token", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_golden(name, A, token):
    assert canon(A).serialize(strict=True) == token


def test_golden_extended_gauss():
    assert canon([[4]]).extended_gauss == ((1, 1),)
    assert canon([[-4]]).extended_gauss == ((1, 7),)
    assert canon([[0, 2], [2, 0]]).extended_gauss == ((1, 0),)
    assert canon([[3]]).extended_gauss is None


def test_derived_fields():
    T = canon([[4, 0], [0, 3]])
    assert T.torsion_order == 12 and T.invariant_factors == (12,)
    T = canon([[2, 0, 0], [0, 4, 0], [0, 0, 9]])
    assert T.invariant_factors == (2, 36)


@given(symmetric_matrices(max_n=4, lo=-6, hi=6), st.data())
def test_invariant_under_congruence_and_stabilization(A, data):
    T = canon(A)
    P = data.draw(unimodular_strategy(len(A)))
    B = exact.congruence(A, P)
    for sign in (1, -1):
        assert canon(exact.direct_sum(B, ((sign,),))) == T


@given(symmetric_matrices(max_n=4))
def test_torsion_order_is_det_of_reduced(A):
    T = canon(A)
    from linkcanon.linkform import split_free_part

    b1, A_red, _ = split_free_part(A)
    assert T.b1 == b1
    assert T.torsion_order == abs(exact.det(A_red))


def test_layer_functions():
    C = ((1, 0), (0, 3))
    assert two_layer_type(C) == "A"
    assert two_typeA_delta(C, 2) == 3
    assert two_typeA_delta(C, 1) is None
    assert two_layer_type(((0, 1), (1, 0))) == "E"
    assert two_layer_type(()) == "E"
    with pytest.raises(WrongType):
        two_typeA_delta(((0, 1), (1, 0)), 1)
    with pytest.raises(EvenDeterminant):
        two_typeA_delta(((1, 1), (1, 1)), 2)


def test_odd_layer_invariant():
    gram = ((Fraction(1, 3), Fraction(0)), (Fraction(0), Fraction(1, 3)))
    assert odd_layer_invariant(layer_matrix(gram, (3, 3), 3, 1)) == 1
    gram = ((Fraction(0), Fraction(1, 3)), (Fraction(1, 3), Fraction(0)))
    assert odd_layer_invariant(layer_matrix(gram, (3, 3), 3, 1)) == -1
    bad = ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))
    with pytest.raises(DegenerateLayer):
        odd_layer_invariant(layer_matrix(bad, (3, 3), 3, 1))


def test_gauss_hyperbolic_and_cap():
    # arguments are 2-exponents of the generator orders
    P4 = [[Fraction(0), Fraction(1, 4)], [Fraction(1, 4), Fraction(0)]]
    assert gauss_u([2, 2], P4, 1) == 0
    F4 = [[Fraction(2, 4), Fraction(1, 4)], [Fraction(1, 4), Fraction(2, 4)]]
    assert gauss_u([2, 2], F4, 1) == 4
    P8 = [[Fraction(0), Fraction(1, 8)], [Fraction(1, 8), Fraction(0)]]
    with pytest.raises(CapExceeded):
        gauss_u([3, 3], P8, 1, cap=15)
    with pytest.raises(CapExceeded):
        canon([[2**12, 0], [0, 2**12]], cap_gauss=100)
    assert len(list(enumerate_quotient_H([3, 1], 1))) == 4


# ---------------------------------------------------------------- text form

def test_serialize_examples():
    T = TokenPackage(0, (LayerRecord(2, 2, 1, "A", delta=1), LayerRecord(3, 1, 1, "odd", x=1)), ((1, 1),))
    assert serialize(T) == "b1=0;2:{k=2,n=1,A,d=1};3:{k=1,n=1,x=1};xg2=[(1,1)]"
    assert serialize(T, strict=True) == "b1=0;2:{k=2,n=1,A,d=1};3:{k=1,n=1,x=1}"


@given(symmetric_matrices(max_n=4))
def test_round_trip(A):
    T = canon(A)
    assert parse(serialize(T)) == T
    assert parse(serialize(T, strict=True)) == T.strict()


@pytest.mark.parametrize(
    "text,pos",
    [
        ("", 0),
        ("b1=x", 3),
        ("b1=0;4:{k=1,n=1,x=1}", 5),
        ("b1=0;3:{k=1,n=1,x=2}", 8),  # start of the offending layer
        ("b1=0;3:{k=2,n=1,x=1,k=1,n=1,x=1}", 20),
        ("b1=0;2:{k=1,n=2,E,u=9}", 8),
        ("b1=01", 3),
        ("b1=0;xg2=[(2,1),(1,1)]", None),
        ("b1=0;3:{}", None),
    ],
)
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    if pos is not None:
        assert info.value.position == pos
