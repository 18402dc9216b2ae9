import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hyperkoszul.errors import HeaderMismatchError, ParseError
from hyperkoszul.hypergraph import (Hypergraph, VertexTable, all_edges, apply_vertex_map, bar_delta_closure,
                                    bar_lower_delta, classify, complement, delta_closure, density, lower_delta,
                                    parse_hypergraph, permutation_map, sample_random, serialize_hypergraph)

from helpers import random_hypergraph


def names(H):
    return {frozenset(lab) for lab in H.labels()}


def edges_strategy(n):
    return st.sets(st.sampled_from(all_edges(VertexTable.range(n))))


class TestParsing:
    def test_first_appearance_order(self):
        H = parse_hypergraph("v0 v1\nv2")
        assert H.ambient.names == ("v0", "v1", "v2")
        assert H.labels() == [("v2",), ("v0", "v1")]

    def test_header_order_sorts_edges(self):
        H = parse_hypergraph("vertices: b a\na b\n")
        assert H.labels() == [("b", "a")]

    def test_duplicate_vertex_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_hypergraph("v0 v0")

    def test_undeclared_vertex_has_position(self):
        with pytest.raises(ParseError) as err:
            parse_hypergraph("vertices: a b\na c\n")
        assert err.value.line == 2 and err.value.column == 2

    def test_empty_edge_line(self):
        with pytest.raises(ParseError, match="empty"):
            parse_hypergraph("vertices: a\n{}\n")

    def test_comments_and_dedup(self):
        H = parse_hypergraph("# c\nvertices: a b  # trailing\nb a\na b\n\n")
        assert len(H) == 1

    def test_isolated_header_vertex_kept(self):
        H = parse_hypergraph("vertices: a b c\na\n")
        assert len(H.ambient) == 3

    @given(edges_strategy(4))
    def test_round_trip(self, edges):
        H = Hypergraph(VertexTable.range(4), frozenset(edges))
        assert parse_hypergraph(serialize_hypergraph(H)) == H

    def test_union_needs_same_table(self):
        with pytest.raises(HeaderMismatchError):
            Hypergraph.empty(VertexTable.range(2)) | Hypergraph.empty(VertexTable.range(3))


class TestClosures:
    def test_three_vertex_pair(self, three_vertex):
        H1, H2 = three_vertex["H1"], three_vertex["H2"]
        assert names(delta_closure(H2)) == {frozenset(s) for s in all_subsets3()}
        assert names(lower_delta(H2)) == {frozenset({"v2"})}
        assert names(lower_delta(H1)) == sets("v0 v1|v0|v1")
        assert names(bar_lower_delta(H2)) == sets("v0 v1 v2|v0 v1")
        assert names(bar_lower_delta(H1)) == set()
        assert names(bar_delta_closure(H2)) == sets("v0 v1 v2|v0 v1|v0 v2|v1 v2|v2")

    def test_trivial_fixed_points(self, table3):
        full = Hypergraph.full(table3)
        assert delta_closure(Hypergraph.empty(table3)) == Hypergraph.empty(table3)
        assert bar_lower_delta(full) == full
        top = Hypergraph.of(table3, [(0, 1, 2)])
        assert bar_delta_closure(top) == top

    def test_complement_small(self):
        T = VertexTable.range(1)
        assert complement(Hypergraph.empty(T)).labels() == [("v0",)]

    @settings(max_examples=150, deadline=None)
    @given(st.integers(1, 7), st.randoms(use_true_random=False))
    def test_laws_random(self, n, rng):
        H = random_hypergraph(rng, n, rng.random())
        D, d, bD, bd = delta_closure(H), lower_delta(H), bar_delta_closure(H), bar_lower_delta(H)
        assert d <= H <= D and bd <= H <= bD
        assert delta_closure(D) == D and lower_delta(d) == d
        assert bar_delta_closure(bD) == bD and bar_lower_delta(bd) == bd
        assert classify(D) in ("simplicial", "both")
        assert classify(bD) in ("independence", "both")
        assert complement(complement(H)) == H
        assert complement(D) == bar_lower_delta(complement(H))
        assert complement(bD) == lower_delta(complement(H))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 6), st.randoms(use_true_random=False))
    def test_monotone(self, n, rng):
        big = random_hypergraph(rng, n, 0.6)
        small = Hypergraph(big.ambient, frozenset(e for e in big.edges if rng.random() < 0.7))
        for op in (delta_closure, lower_delta, bar_delta_closure, bar_lower_delta):
            assert op(small) <= op(big)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 5), st.randoms(use_true_random=False))
    def test_bijection_commutes_with_closures(self, n, rng):
        H = random_hypergraph(rng, n)
        perm = list(range(n))
        rng.shuffle(perm)
        phi = permutation_map(H.ambient, perm)
        for op in (delta_closure, lower_delta, bar_delta_closure, bar_lower_delta):
            assert apply_vertex_map(op(H), phi) == op(apply_vertex_map(H, phi))


def all_subsets3():
    return [set(c) for k in (1, 2, 3) for c in combinations(["v0", "v1", "v2"], k)]


def sets(spec):
    return {frozenset(part.split()) for part in spec.split("|")}


class TestClassifyAndDensity:
    def test_examples(self):
        T = VertexTable.range(2)
        assert classify(Hypergraph.full(T)) == "both"
        assert classify(Hypergraph.of(VertexTable.range(3), [(0, 1), (0,)])) == "general"
        # over just {v0, v1} the same edges are superset-closed
        assert classify(Hypergraph.of(T, [(0, 1), (0,)])) == "independence"
        assert classify(Hypergraph.empty(T)) == "both"

    def test_density_by_hand(self, table3):
        r = density(Hypergraph.of(table3, [(0,), (0, 1)]))
        assert r.per_dimension == {0: Fraction(1, 3), 1: Fraction(1, 3), 2: Fraction(0)}
        assert r.overall == Fraction(2, 7)

    def test_density_extremes(self, table3):
        assert density(Hypergraph.full(table3)).overall == 1
        assert set(density(Hypergraph.full(table3)).per_dimension.values()) == {1}
        assert density(Hypergraph.empty(table3)).overall == 0


class TestRandom:
    def test_extreme_probabilities(self):
        T = VertexTable.range(4)
        for model in ("bar_p", "p_complex", "q_independence"):
            assert sample_random(T, 1, model, seed=7) == Hypergraph.full(T)
            assert len(sample_random(T, 0, model, seed=7)) == 0

    def test_models_classify(self):
        T = VertexTable.range(5)
        for seed in range(100):
            assert classify(sample_random(T, 0.7, "p_complex", seed)) in ("simplicial", "both")
            assert classify(sample_random(T, 0.7, "q_independence", seed)) in ("independence", "both")

    def test_deterministic_and_seed_sensitive(self):
        T = VertexTable.range(5)
        assert sample_random(T, 0.5, "bar_p", 3) == sample_random(T, 0.5, "bar_p", 3)
        assert len({sample_random(T, 0.5, "bar_p", s).edges for s in range(10)}) > 1

    def test_edge_dependent_probability(self):
        T = VertexTable.range(4)
        H = sample_random(T, lambda lab: 1.0 if len(lab) <= 2 else 0.0, "bar_p", 1)
        assert H.max_dimension == 1 and len(H) == 10

    def test_bad_probability(self):
        with pytest.raises(ValueError):
            sample_random(VertexTable.range(2), 1.5)


class TestVertexMaps:
    def test_identity_and_collapse(self, three_vertex):
        K1 = three_vertex["K1"]
        ident = {n: n for n in K1.ambient.names}
        assert apply_vertex_map(K1, ident) == K1
        T = VertexTable(["v0", "v1"])
        U = VertexTable(["u"])
        assert apply_vertex_map(Hypergraph.of(T, [(0, 1)]), {"v0": "u", "v1": "u"}, U).labels() == [("u",)]

    def test_transposition_sends_first_to_second(self, three_vertex):
        phi = {"v0": "v1", "v1": "v0", "v2": "v2"}
        assert apply_vertex_map(three_vertex["K1"], phi) == three_vertex["K2"]

    def test_outside_target(self, three_vertex):
        with pytest.raises(ValueError):
            apply_vertex_map(three_vertex["K1"], {"v0": "zz", "v1": "v1", "v2": "v2"})
