import random

import pytest
from hypothesis import given, settings, strategies as st

from hyperkoszul.errors import HeaderMismatchError, NonAdmissibleError
from hyperkoszul.exterior import LOWER, UPPER, ExtOperator, induced_ext_map, parse_operator
from hyperkoszul.fields import GF, QQ
from hyperkoszul.hypergraph import (Hypergraph, VertexTable, apply_vertex_map, bar_delta_closure, delta_closure,
                                    lower_delta, permutation_map)
from hyperkoszul.mayer_vietoris import (DIRECT_SUM, INTERSECTION, UNION, build_les, composite_law, mv_hypergraph,
                                        mv_independence, mv_morphism, mv_simplicial, verify_les)

from helpers import random_hypergraph, random_operator


def total(T, variance=LOWER):
    g = "p" if variance == LOWER else "d"
    return parse_operator("+".join(f"{g}({n})" for n in T.names), T, QQ)


def bettis(d, role, index):
    return d.nodes[d.position(role, index)].betti


def test_three_vertex_simplicial_sequence(three_vertex):
    d = mv_simplicial(three_vertex["K1"], three_vertex["K2"], total(three_vertex["K1"].ambient), 0)
    assert verify_les(d).exact
    assert [bettis(d, UNION, 1), bettis(d, INTERSECTION, 0), bettis(d, DIRECT_SUM, 0), bettis(d, UNION, 0)] == [1, 2, 2, 1]
    conn = dict(d.connecting_maps())
    assert conn[1].rank() == 1


def test_equal_pair_has_zero_connecting_maps(three_vertex):
    d = mv_simplicial(three_vertex["K1"], three_vertex["K1"], total(three_vertex["K1"].ambient), 0)
    assert verify_les(d).exact
    assert all(M.is_zero() for _, M in d.connecting_maps())


def test_empty_second_member(three_vertex):
    K = three_vertex["K1"]
    d = mv_simplicial(K, Hypergraph.empty(K.ambient), total(K.ambient), 0)
    assert verify_les(d).exact
    for n in (0, 1):
        assert bettis(d, INTERSECTION, n) == 0
        assert bettis(d, DIRECT_SUM, n) == bettis(d, UNION, n)


def test_independence_sequence(three_vertex):
    d = mv_independence(three_vertex["L1"], three_vertex["L2"], ExtOperator.generator(QQ, UPPER, 2), 0)
    assert verify_les(d).exact
    assert bettis(d, INTERSECTION, 0) == 0 and bettis(d, INTERSECTION, 1) == 1
    assert d.alternating_rank_sum() == 0


def test_classification_enforced(three_vertex):
    with pytest.raises(NonAdmissibleError):
        mv_simplicial(three_vertex["H1"], three_vertex["K1"], total(three_vertex["K1"].ambient), 0)
    with pytest.raises(NonAdmissibleError):
        mv_independence(three_vertex["K1"], three_vertex["L1"], ExtOperator.generator(QQ, UPPER, 0), 0)


def test_ladder_top_row_uses_inner_closures(three_vertex):
    lad = mv_hypergraph(three_vertex["H1"], three_vertex["H2"], ExtOperator.generator(QQ, LOWER, 2), 0)
    assert lad.closures["top"] == (lower_delta(three_vertex["H1"]), lower_delta(three_vertex["H2"]))
    assert lad.exact and lad.commuting


def test_ladder_simplicial_pair_has_identity_rungs(three_vertex):
    lad = mv_hypergraph(three_vertex["K1"], three_vertex["K2"], total(three_vertex["K1"].ambient), 0)
    for M in lad.rungs:
        assert M.nrows == M.ncols and M.rank() == M.nrows


def test_upper_ladder_with_empty_inner_closure(three_vertex):
    lad = mv_hypergraph(three_vertex["H1"], three_vertex["H2"], ExtOperator.generator(QQ, UPPER, 1), 0)
    assert lad.exact and lad.commuting
    assert lad.closures["top"][0] == Hypergraph.empty(three_vertex["H1"].ambient)


def test_header_mismatch():
    a = Hypergraph.full(VertexTable.range(2))
    b = Hypergraph.full(VertexTable.range(3))
    with pytest.raises(HeaderMismatchError):
        mv_hypergraph(a, b, ExtOperator.generator(QQ, LOWER, 0), 0)


def test_corrupted_map_is_detected(three_vertex):
    d = mv_simplicial(three_vertex["K1"], three_vertex["K2"], total(three_vertex["K1"].ambient), 0)
    k = next(i for i, M in enumerate(d.maps) if M.nrows and M.ncols)
    M = d.maps[k].copy()
    M.rows[0][0] = QQ.add(M.rows[0][0], QQ.one)
    d.maps[k] = M
    verdict = verify_les(d)
    assert not verdict.exact
    assert {f[0] for f in verdict.failures} & {k, k + 1}


def test_all_zero_diagram_is_exact():
    T = VertexTable.range(2)
    E = Hypergraph.empty(T)
    assert verify_les(mv_simplicial(E, E, total(T), 0)).exact


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from(["first", "second"]))
def test_connecting_map_independent_of_lift(rng, _):
    n = rng.randint(2, 5)
    A = delta_closure(random_hypergraph(rng, n, 0.3))
    B = delta_closure(random_hypergraph(rng, n, 0.3, A.ambient))
    op = random_operator(rng, QQ, LOWER, n, 1)
    d1 = build_les(A, B, op, 0, lift="first")
    d2 = build_les(A, B, op, 0, lift="second")
    assert d1.maps == d2.maps


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_naturality_under_relabeling(rng):
    n = rng.randint(2, 5)
    A = delta_closure(random_hypergraph(rng, n, 0.3))
    B = delta_closure(random_hypergraph(rng, n, 0.3, A.ambient))
    op = random_operator(rng, QQ, LOWER, n, 1)
    perm = list(range(n))
    rng.shuffle(perm)
    names = permutation_map(A.ambient, perm)
    d1 = mv_simplicial(A, B, op, 0)
    d2 = mv_simplicial(apply_vertex_map(A, names), apply_vertex_map(B, names), induced_ext_map(dict(enumerate(perm)), op), 0)
    assert [x.betti for x in d1.nodes] == [x.betti for x in d2.nodes]
    assert verify_les(d1).exact == verify_les(d2).exact
    assert [M.rank() for M in d1.maps] == [M.rank() for M in d2.maps]


def test_identity_morphism(three_vertex):
    d = mv_simplicial(three_vertex["K1"], three_vertex["K2"], total(three_vertex["K1"].ambient), 0)
    rep = mv_morphism(d, ExtOperator.scalar(QQ, 1))
    assert rep.commuting
    for M in rep.components:
        assert M.rank() == M.nrows == M.ncols


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_even_morphism_and_composite_law(rng):
    T = VertexTable.range(5)
    A = delta_closure(random_hypergraph(rng, 5, 0.25, T))
    B = delta_closure(random_hypergraph(rng, 5, 0.25, T))
    op = random_operator(rng, GF(65521), LOWER, 5, 1)
    d = mv_simplicial(A, B, op, 2)
    b1 = random_operator(rng, GF(65521), LOWER, 5, 2, terms=2)
    b2 = random_operator(rng, GF(65521), LOWER, 5, 2, terms=2)
    assert mv_morphism(d, b1).commuting
    assert composite_law(d, b1, b2)


def test_morphism_on_a_ladder(three_vertex):
    T = VertexTable.range(4)
    H1 = Hypergraph.of(T, [(0, 1, 2, 3), (0, 1), (2,)])
    H2 = Hypergraph.of(T, [(0, 1, 2), (1, 3), (3,)])
    lad = mv_hypergraph(H1, H2, ExtOperator.generator(QQ, LOWER, 3), 2)
    rep = mv_morphism(lad, parse_operator("p(v0)^p(v1) + 2*p(v1)^p(v2)", T, QQ))
    assert rep.commuting


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from([LOWER, UPPER]))
def test_random_ladders(rng, variance):
    n = rng.randint(2, 4)
    T = VertexTable.range(n)
    H1, H2 = random_hypergraph(rng, n, table=T), random_hypergraph(rng, n, table=T)
    op = random_operator(rng, QQ, variance, n, 1)
    lad = mv_hypergraph(H1, H2, op, rng.choice([-1, 0, 1]))
    assert lad.exact and lad.commuting
