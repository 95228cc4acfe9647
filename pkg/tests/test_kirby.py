import random

import pytest
from hypothesis import given, strategies as st

from conftest import symmetric_matrices
from linkcanon import exact, kirby
from linkcanon.canon import canon
from linkcanon.errors import BadDestabilize
from linkcanon.golden import GOLDEN


@given(st.integers(1, 6), st.integers(0, 2**40), st.integers(0, 8))
def test_random_unimodular(n, seed, steps):
    P = kirby.random_unimodular(n, seed, steps)
    assert abs(exact.det(P)) == 1
    assert P == kirby.random_unimodular(n, seed, steps)


def test_random_unimodular_one_by_one():
    assert {kirby.random_unimodular(1, s)[0][0] for s in range(20)} <= {1, -1}
    with pytest.raises(ValueError):
        kirby.random_unimodular(0, 1)


def test_apply_examples():
    assert kirby.apply([[3]], kirby.Stabilize(1)) == ((3, 0), (0, 1))
    assert kirby.apply([[3, 0], [0, 1]], kirby.Destabilize(1)) == ((3,),)
    assert kirby.apply([[3]], kirby.Congruence(((-1,),))) == ((3,),)
    with pytest.raises(BadDestabilize):
        kirby.apply([[3, 1], [1, 1]], kirby.Destabilize(1))
    with pytest.raises(BadDestabilize):
        kirby.apply([[3]], kirby.Destabilize(0))


@given(symmetric_matrices(max_n=4), st.sampled_from([1, -1]))
def test_destabilize_undoes_stabilize(A, sign):
    B = kirby.apply(A, kirby.Stabilize(sign))
    assert kirby.apply(B, kirby.Destabilize(len(A))) == exact.as_matrix(A)


@given(symmetric_matrices(max_n=4), st.integers(0, 2**30), st.integers(0, 2**30))
def test_congruence_composes(A, s1, s2):
    n = len(A)
    P, Q = kirby.random_unimodular(n, s1), kirby.random_unimodular(n, s2)
    once = kirby.apply(A, kirby.Congruence(exact.matmul(P, Q)))
    twice = kirby.apply(kirby.apply(A, kirby.Congruence(P)), kirby.Congruence(Q))
    assert once == twice


def test_random_moves_are_legal():
    rng = random.Random(5)
    A = exact.as_matrix([[2, 1], [1, 3]])
    for _ in range(200):
        move = kirby.random_move(A, rng, max_size=6)
        A = kirby.apply(A, move)
        assert 1 <= len(A) <= 6 or len(A) == 0


def test_walk_seeds_are_independent_and_stable():
    seeds = [kirby.walk_seed(7, w) for w in range(50)]
    assert len(set(seeds)) == 50
    assert seeds == [kirby.walk_seed(7, w) for w in range(50)]


def test_walk_on_unit_matrix():
    _, rep = kirby.random_walk([[1]], seed=3, steps=100)
    assert rep.passed and rep.first_divergence is None
    assert all(T == canon([[1]]) for _, T in rep.packages)


@pytest.mark.parametrize("seed", range(4))
def test_walk_hopf_like(seed):
    _, rep = kirby.random_walk([[0, 3], [3, 0]], seed=seed, steps=50)
    assert rep.passed
    assert rep.packages[-1][1].serialize() == "b1=0;3:{k=1,n=2,x=-1}"


@pytest.mark.parametrize("name,A,token", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_walks_on_golden(name, A, token):
    reports = kirby.run_walks(A, walks=5, steps=30, seed=11)
    assert all(r.passed for r in reports)


@pytest.mark.parametrize("name,A,token", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_fault_is_detected_at_first_checkpoint(name, A, token):
    _, rep = kirby.random_walk(A, seed=1, steps=10, fault=kirby.corrupt_gram)
    assert not rep.passed
    assert rep.first_divergence == 1


def test_sparse_checkpoints_include_last_step():
    _, rep = kirby.random_walk([[4]], seed=2, steps=23, checkpoint_every=5)
    assert [s for s, _ in rep.packages] == [0, 5, 10, 15, 20, 23]
