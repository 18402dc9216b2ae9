import random
from fractions import Fraction
from itertools import combinations

from hyperkoszul.exterior import LOWER, UPPER, ExtOperator
from hyperkoszul.hypergraph import Hypergraph, VertexTable, all_edges


def random_hypergraph(rng: random.Random, nverts: int, p: float = 0.5, table=None) -> Hypergraph:
    table = table or VertexTable.range(nverts)
    return Hypergraph(table, frozenset(e for e in all_edges(table) if rng.random() < p))


def random_operator(rng: random.Random, field, variance: str, nverts: int, degree: int,
                    support=None, terms: int = 3) -> ExtOperator:
    verts = sorted(support) if support is not None else list(range(nverts))
    monos = list(combinations(verts, degree))
    if not monos:
        return ExtOperator.zero(field, variance, degree)
    chosen = rng.sample(monos, min(terms, len(monos)))
    coeffs = {mono: rng.choice([-3, -2, -1, 1, 2, 3, 5]) for mono in chosen}
    return ExtOperator.build(field, variance, coeffs, degree=degree)


def random_nonvanishing_weights(rng: random.Random, field, nverts: int) -> dict:
    return {v: field(rng.randint(1, 10 ** 6)) for v in range(nverts)}


def random_chain_terms(rng: random.Random, nverts: int, degree: int, count: int = 3):
    edges = list(combinations(range(nverts), degree + 1))
    chosen = rng.sample(edges, min(count, len(edges)))
    return {e: rng.choice([-2, -1, 1, 3]) for e in chosen}


def random_permutation(rng: random.Random, n: int) -> dict:
    perm = list(range(n))
    rng.shuffle(perm)
    return dict(enumerate(perm))


def as_fraction_terms(op: ExtOperator) -> dict:
    return {mono: Fraction(c) for mono, c in op.terms}
