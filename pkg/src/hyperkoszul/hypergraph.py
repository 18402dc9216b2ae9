"""Hypergraphs over a finite, totally ordered vertex table.

A hyperedge is a strictly increasing tuple of vertex indices; the index order
is the total order on vertices. Hypergraphs are immutable.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import HeaderMismatchError, ParseError

Edge = tuple  # tuple[int, ...], strictly increasing


def edge_key(e: Edge):
    """Canonical order: dimension first, then lexicographic."""
    return (len(e), e)


class VertexTable:
    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index = {}
        for i, n in enumerate(names):
            if n in index:
                raise ValueError(f"duplicate vertex label {n!r}")
            index[n] = i
        self.names = names
        self._index = index

    @classmethod
    def range(cls, n: int, prefix: str = "v") -> "VertexTable":
        return cls(f"{prefix}{i}" for i in range(n))

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown vertex {name!r}") from None

    def edge(self, names: Iterable[str]) -> Edge:
        idx = [self.index(n) for n in names]
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate vertex in hyperedge")
        if not idx:
            raise ValueError("empty hyperedge")
        return tuple(sorted(idx))

    def label(self, e: Edge) -> tuple[str, ...]:
        return tuple(self.names[i] for i in e)

    def __eq__(self, other):
        return isinstance(other, VertexTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VertexTable({list(self.names)})"


def all_edges(table: VertexTable) -> list[Edge]:
    """Every non-empty subset of the ambient set, canonically ordered."""
    n = len(table)
    return [e for k in range(1, n + 1) for e in combinations(range(n), k)]


@dataclass(frozen=True)
class Hypergraph:
    ambient: VertexTable
    edges: frozenset

    def __post_init__(self):
        n = len(self.ambient)
        for e in self.edges:
            if not e or any(b <= a for a, b in zip(e, e[1:])) or e[0] < 0 or e[-1] >= n:
                raise ValueError(f"invalid hyperedge {e!r} for ambient of size {n}")

    @classmethod
    def from_names(cls, table: VertexTable, edges: Iterable[Iterable[str]]) -> "Hypergraph":
        return cls(table, frozenset(table.edge(e) for e in edges))

    @classmethod
    def of(cls, table: VertexTable, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(table, frozenset(tuple(sorted(e)) for e in edges))

    @classmethod
    def full(cls, table: VertexTable) -> "Hypergraph":
        return cls(table, frozenset(all_edges(table)))

    @classmethod
    def empty(cls, table: VertexTable) -> "Hypergraph":
        return cls(table, frozenset())

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.sorted_edges())

    def __contains__(self, e):
        return e in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=edge_key)

    def of_dimension(self, n: int) -> list[Edge]:
        return sorted(e for e in self.edges if len(e) == n + 1)

    @property
    def max_dimension(self) -> int:
        return max((len(e) - 1 for e in self.edges), default=-1)

    def _check_same(self, other: "Hypergraph"):
        if self.ambient != other.ambient:
            raise HeaderMismatchError("hypergraphs live on different vertex tables")

    def __or__(self, other: "Hypergraph") -> "Hypergraph":
        self._check_same(other)
        return Hypergraph(self.ambient, self.edges | other.edges)

    def __and__(self, other: "Hypergraph") -> "Hypergraph":
        self._check_same(other)
        return Hypergraph(self.ambient, self.edges & other.edges)

    def __le__(self, other: "Hypergraph") -> bool:
        return self.edges <= other.edges

    def labels(self) -> list[tuple[str, ...]]:
        return [self.ambient.label(e) for e in self.sorted_edges()]

    def __repr__(self):
        body = ", ".join("{" + ",".join(lab) + "}" for lab in self.labels())
        return f"Hypergraph[{body}]"


# -- text format -----------------------------------------------------------

def _tokens(line: str) -> list[str]:
    return [t for t in line.replace(",", " ").replace("{", " ").replace("}", " ").split() if t]


def parse_hypergraph(text: str, table: VertexTable | None = None) -> Hypergraph:
    """Parse the ``.hg`` format.

    Optional header ``vertices: a b c``; then one hyperedge per line as
    whitespace-separated vertex names. ``#`` starts a comment. Without a
    header (and without ``table``) the vertex order is first appearance.
    """
    header: list[str] | None = None
    raw_edges: list[tuple[int, list[str], str]] = []
    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.lower().startswith("vertices:"):
            if seen_content:
                raise ParseError("vertex header must come before any hyperedge", lineno)
            header = _tokens(stripped.split(":", 1)[1])
            if len(set(header)) != len(header):
                raise ParseError("duplicate vertex in header", lineno)
            seen_content = True
            continue
        seen_content = True
        names = _tokens(line)
        if not names:
            raise ParseError("empty hyperedge", lineno)
        if len(set(names)) != len(names):
            raise ParseError("duplicate vertex in hyperedge", lineno)
        raw_edges.append((lineno, names, raw))

    if table is not None and header is not None and tuple(header) != table.names:
        raise HeaderMismatchError("file header does not match the supplied vertex table")
    if table is None:
        if header is not None:
            table = VertexTable(header)
        else:
            order: dict[str, None] = {}
            for _, names, _ in raw_edges:
                for n in names:
                    order.setdefault(n, None)
            table = VertexTable(order)
    edges = set()
    for lineno, names, raw in raw_edges:
        for n in names:
            if n not in table:
                raise ParseError(f"undeclared vertex {n!r}", lineno, raw.find(n), raw)
        edges.add(table.edge(names))
    return Hypergraph(table, frozenset(edges))


def serialize_hypergraph(H: Hypergraph) -> str:
    lines = ["vertices: " + " ".join(H.ambient.names)]
    lines += [" ".join(lab) for lab in H.labels()]
    return "\n".join(lines) + "\n"


# -- closure operators -----------------------------------------------------

def _faces(e: Edge):
    for k in range(1, len(e) + 1):
        yield from combinations(e, k)


def _cofaces(e: Edge, n: int):
    rest = [v for v in range(n) if v not in e]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            yield tuple(sorted(e + extra))


def delta_closure(H: Hypergraph) -> Hypergraph:
    """Smallest simplicial complex containing H."""
    out = set()
    for e in H.edges:
        if e not in out:
            out.update(_faces(e))
    return Hypergraph(H.ambient, frozenset(out))


def lower_delta(H: Hypergraph) -> Hypergraph:
    """Largest simplicial complex contained in H."""
    E = H.edges
    return Hypergraph(H.ambient, frozenset(e for e in E if all(f in E for f in _faces(e))))


def bar_delta_closure(H: Hypergraph) -> Hypergraph:
    """Smallest independence hypergraph (superset-closed in V) containing H."""
    n = len(H.ambient)
    out = set()
    for e in H.edges:
        if e not in out:
            out.update(_cofaces(e, n))
    return Hypergraph(H.ambient, frozenset(out))


def bar_lower_delta(H: Hypergraph) -> Hypergraph:
    """Largest independence hypergraph contained in H."""
    n = len(H.ambient)
    E = H.edges
    return Hypergraph(H.ambient, frozenset(e for e in E if all(f in E for f in _cofaces(e, n))))


def complement(H: Hypergraph) -> Hypergraph:
    return Hypergraph(H.ambient, frozenset(all_edges(H.ambient)) - H.edges)


CLOSURES: dict[str, Callable[[Hypergraph], Hypergraph]] = {
    "delta": lower_delta,
    "Delta": delta_closure,
    "bar_delta": bar_lower_delta,
    "bar_Delta": bar_delta_closure,
    "complement": complement,
}


def closure_by_name(kind: str) -> Callable[[Hypergraph], Hypergraph]:
    key = kind.replace("-", "_")
    if key not in CLOSURES:
        raise ValueError(f"unknown closure kind {kind!r}; expected one of {sorted(CLOSURES)}")
    return CLOSURES[key]


def is_simplicial(H: Hypergraph) -> bool:
    E = H.edges
    # closure under codimension-one faces suffices
    return all(e[:i] + e[i + 1:] in E for e in E if len(e) > 1 for i in range(len(e)))


def is_independence(H: Hypergraph) -> bool:
    E = H.edges
    n = len(H.ambient)
    return all(tuple(sorted(e + (v,))) in E for e in E for v in range(n) if v not in e)


def classify(H: Hypergraph) -> str:
    s, i = is_simplicial(H), is_independence(H)
    if s and i:
        return "both"
    if s:
        return "simplicial"
    if i:
        return "independence"
    return "general"


# -- density, random models, morphisms --------------------------------------

@dataclass(frozen=True)
class DensityReport:
    per_dimension: dict
    overall: Fraction

    def to_json(self):
        return {
            "per_dimension": {str(k): str(v) for k, v in self.per_dimension.items()},
            "overall": str(self.overall),
        }


def density(H: Hypergraph) -> DensityReport:
    n = len(H.ambient)
    if n == 0:
        raise ValueError("density needs a non-empty vertex table")
    counts = [0] * n
    for e in H.edges:
        counts[len(e) - 1] += 1
    per = {d: Fraction(counts[d], comb(n, d + 1)) for d in range(n)}
    return DensityReport(per, Fraction(len(H.edges), 2 ** n - 1))


MODELS = ("bar_p", "p_complex", "q_independence")

Probability = Union[float, Fraction, int, Callable[[tuple], float]]


def _coin(seed: int, e: Edge) -> float:
    """Uniform [0,1) draw keyed by (seed, edge): independent of iteration order."""
    key = f"{seed}|{','.join(map(str, e))}".encode()
    h = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(h, "big") / 2.0 ** 64


def sample_random(table: VertexTable, p: Probability, model: str = "bar_p", seed: int = 0) -> Hypergraph:
    """Random hypergraph: each edge kept independently with probability p(edge).

    ``p_complex`` returns the largest simplicial complex inside the sample,
    ``q_independence`` the largest independence hypergraph inside it.
    """
    model = model.replace("-", "_")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    prob = p if callable(p) else (lambda e, c=p: c)
    kept = set()
    for e in all_edges(table):
        pe = prob(table.label(e))
        if not 0 <= pe <= 1:
            raise ValueError(f"probability {pe} out of [0, 1] for edge {table.label(e)}")
        if _coin(seed, e) < pe:
            kept.add(e)
    H = Hypergraph(table, frozenset(kept))
    if model == "p_complex":
        return lower_delta(H)
    if model == "q_independence":
        return bar_lower_delta(H)
    return H


def apply_vertex_map(H: Hypergraph, phi: Mapping[str, str], target: VertexTable | None = None) -> Hypergraph:
    """Image hypergraph {phi(e) : e in H} over ``target`` (default: same table)."""
    target = target or H.ambient
    idx = {}
    for i, name in enumerate(H.ambient.names):
        if name not in phi:
            raise ValueError(f"vertex map is not defined on {name!r}")
        img = phi[name]
        if img not in target:
            raise ValueError(f"vertex {name!r} maps to {img!r}, outside the target table")
        idx[i] = target.index(img)
    return Hypergraph(target, frozenset(tuple(sorted({idx[v] for v in e})) for e in H.edges))


def permutation_map(table: VertexTable, perm: Sequence[int]) -> dict[str, str]:
    """Name-level bijection sending vertex i to vertex perm[i]."""
    if sorted(perm) != list(range(len(table))):
        raise ValueError("not a permutation of the vertex table")
    return {table.names[i]: table.names[perm[i]] for i in range(len(table))}
