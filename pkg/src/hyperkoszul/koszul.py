"""Graded chain complexes and the Koszul complex of a weight function."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Mapping, Sequence

from .errors import VerificationError
from .exterior import LOWER, UPPER, ExtOperator, _check_variance, admissible_lower_vertices, admissible_upper_vertices
from .fields import Field
from .hypergraph import Hypergraph
from .linalg import Matrix, Subquotient


@dataclass
class Node:
    label: int  # degree (hyperedge dimension, or exterior degree)
    basis: list  # hyperedges / monomials; the empty tuple marks the scalar line

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class GradedChainComplex:
    """Nodes in the order the differential runs; ``maps[i]`` goes ``nodes[i] -> nodes[i+1]``."""

    field: Field
    direction: str  # "descending" or "ascending"
    step: int
    nodes: list
    maps: list
    notes: list = dc_field(default_factory=list)

    def __post_init__(self):
        if len(self.maps) != max(len(self.nodes) - 1, 0):
            raise ValueError("need exactly one map between consecutive nodes")
        for i, M in enumerate(self.maps):
            if M.shape != (self.nodes[i + 1].dim, self.nodes[i].dim):
                raise ValueError(f"map {i} has shape {M.shape}, expected "
                                 f"{(self.nodes[i + 1].dim, self.nodes[i].dim)}")

    def check_composites(self) -> None:
        for i in range(len(self.maps) - 1):
            if not (self.maps[i + 1] @ self.maps[i]).is_zero():
                raise VerificationError(
                    f"composite of consecutive maps at degree {self.nodes[i + 1].label} is not zero")

    def incoming(self, i: int) -> Matrix | None:
        return self.maps[i - 1] if i > 0 else None

    def outgoing(self, i: int) -> Matrix | None:
        return self.maps[i] if i < len(self.maps) else None

    def subquotient(self, i: int) -> Subquotient:
        return Subquotient.build(self.field, self.nodes[i].dim, self.outgoing(i), self.incoming(i))

    @property
    def is_trivial(self) -> bool:
        return all(n.dim == 0 for n in self.nodes)


@dataclass
class ExactnessReport:
    labels: list
    defects: list

    @property
    def exact(self) -> bool:
        return all(d == 0 for d in self.defects)

    def failing(self) -> list[tuple[int, int]]:
        return [(lab, d) for lab, d in zip(self.labels, self.defects) if d]

    def to_json(self):
        return {
            "exact": self.exact,
            "nodes": [{"degree": lab, "defect": d, "exact": d == 0} for lab, d in zip(self.labels, self.defects)],
        }


def check_exactness(C: GradedChainComplex) -> ExactnessReport:
    """Defect nullity(out) - rank(in) at every node; ends are padded with zero maps."""
    C.check_composites()
    defects = [C.subquotient(i).defect for i in range(len(C.nodes))]
    return ExactnessReport([n.label for n in C.nodes], defects)


def koszul_differential(weights: Mapping[int, object], n: int, generators: Sequence[int], field: Field) -> Matrix:
    """Matrix of the degree-n contraction against ``weights``.

    Columns: degree-n monomials over ``generators`` (lexicographic); rows:
    degree-(n-1) monomials. A monomial g_1^...^g_n goes to
    sum_i (-1)**(i-1) w(g_i) * (g_1^..omit i..^g_n).
    """
    if n < 1:
        raise ValueError("the contraction starts in degree 1")
    gens = sorted(generators)
    src = list(combinations(gens, n))
    dst = list(combinations(gens, n - 1))
    pos = {m: i for i, m in enumerate(dst)}
    M = Matrix(field, len(dst), len(src))
    for j, mono in enumerate(src):
        for i, v in enumerate(mono):
            w = field(weights.get(v, 0))
            if not w:
                continue
            M.rows[pos[mono[:i] + mono[i + 1:]]][j] = w if i % 2 == 0 else field.neg(w)
    return M


def koszul_image(weights: Mapping[int, object], mono: tuple, field: Field) -> list[tuple[tuple, object]]:
    """Terms of the contraction of one monomial, in formula order."""
    out = []
    for i, v in enumerate(mono):
        w = field(weights.get(v, 0))
        if w:
            out.append((mono[:i] + mono[i + 1:], w if i % 2 == 0 else field.neg(w)))
    return out


def contract(weights: Mapping[int, object], op: ExtOperator) -> ExtOperator:
    """The contraction applied to an exterior element; lowers the degree by one."""
    F = op.field
    if op.degree == 0:
        raise ValueError("cannot contract a degree-0 element")
    acc: dict = {}
    for mono, c in op.terms:
        for mono2, k in koszul_image(weights, mono, F):
            acc[mono2] = F.add(acc.get(mono2, F.zero), F.mul(c, k))
    return ExtOperator.build(F, op.variance, acc, degree=op.degree - 1)


@dataclass
class KoszulComplex:
    hypergraph: Hypergraph
    variance: str
    generators: list
    weights: dict
    complex: GradedChainComplex

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def operator_of(self, node_index: int, vec: Sequence) -> ExtOperator:
        node = self.complex.nodes[node_index]
        F = self.complex.field
        return ExtOperator.build(F, self.variance, {m: c for m, c in zip(node.basis, vec) if c}, degree=node.label)


def build_koszul_complex(H: Hypergraph, weights: Mapping[int, object], variance: str, field: Field) -> KoszulComplex:
    """Exterior algebra over the admissible generators, contracted against ``weights``.

    Nodes run from the top exterior degree down to the scalar line (degree 0).
    With no admissible generator the complex is trivial (no nodes).
    """
    _check_variance(variance)
    gens = admissible_lower_vertices(H) if variance == LOWER else admissible_upper_vertices(H)
    w = {v: field(weights.get(v, 0)) for v in range(len(H.ambient))}
    if not gens:
        C = GradedChainComplex(field, "descending", 1, [], [], notes=["trivial complex"])
        return KoszulComplex(H, variance, [], w, C)
    top = len(gens)
    nodes = [Node(k, list(combinations(gens, k))) for k in range(top, -1, -1)]
    maps = [koszul_differential(w, k, gens, field) for k in range(top, 0, -1)]
    C = GradedChainComplex(field, "descending", 1, nodes, maps)
    C.check_composites()
    return KoszulComplex(H, variance, gens, w, C)


__all__ = [
    "Node", "GradedChainComplex", "ExactnessReport", "check_exactness",
    "koszul_differential", "koszul_image", "contract", "KoszulComplex", "build_koszul_complex",
    "LOWER", "UPPER",
]
