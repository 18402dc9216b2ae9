"""Constrained (co)homology of hypergraphs.

For an odd operator of degree ``step = 2t+1`` and a starting degree ``m``,
node ``n >= 0`` of the complex holds the hyperedges of dimension
``m + n*step``. Lower operators lower the node index, upper ones raise it;
the complex is cut off below node 0 and above the ambient dimension.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence, Union

from .errors import ChainMapError, NonAdmissibleError, VerificationError
from .exterior import LOWER, UPPER, ExtOperator, format_operator, operator_matrix, require_admissible
from .fields import Field
from .hypergraph import Edge, Hypergraph, is_independence, is_simplicial
from .koszul import GradedChainComplex, Node
from .linalg import Matrix, Subquotient, rref


@dataclass(frozen=True)
class ConstrainedGrading:
    t: int
    m: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("t must be non-negative")

    @property
    def step(self) -> int:
        return 2 * self.t + 1

    @property
    def lam(self) -> int:
        return self.m // self.step

    @property
    def q(self) -> int:
        return self.m % self.step

    def degree(self, n: int) -> int:
        return self.m + n * self.step


class ConstrainedComplex:
    """The complex R_*(H, op, m) (lower op) or R^*(H, op, m) (upper op)."""

    def __init__(self, source: Hypergraph, operator: ExtOperator, m: int, check: bool = True):
        if operator.degree % 2 == 0:
            raise ValueError(f"operator must have odd degree, got {operator.degree}")
        self.source = source
        self.operator = operator
        self.field = operator.field
        self.variance = operator.variance
        self.grading = ConstrainedGrading((operator.degree - 1) // 2, m)
        if check:
            require_admissible(source, operator)
        top = len(source.ambient) - 1
        self.top_index = max(0, (top - m) // self.grading.step) if top >= m else 0
        self._maps: dict[int, Matrix] = {}
        self._homology: dict[int, HomologySummary] = {}
        if check:
            self.check_composites()

    @property
    def m(self) -> int:
        return self.grading.m

    @property
    def step(self) -> int:
        return self.grading.step

    @property
    def descending(self) -> bool:
        return self.variance == LOWER

    @property
    def indices(self) -> range:
        return range(self.top_index + 1)

    def degree(self, n: int) -> int:
        return self.grading.degree(n)

    def basis(self, n: int) -> list[Edge]:
        if n < 0 or n > self.top_index:
            return []
        d = self.degree(n)
        return self.source.of_dimension(d) if d >= 0 else []

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def differential(self, n: int) -> Matrix:
        """Map out of node n: to node n-1 (descending) or n+1 (ascending).

        Node 0 has no outgoing map in the descending case, and the top node
        none in the ascending case; those come back as zero-row matrices.
        """
        if n not in self._maps:
            target = n - 1 if self.descending else n + 1
            src = self.basis(n)
            if target < 0 or target > self.top_index:
                M = Matrix(self.field, 0, len(src))
            else:
                M = operator_matrix(self.operator, src, self.basis(target), self.source.ambient)
            self._maps[n] = M
        return self._maps[n]

    def incoming(self, n: int) -> Matrix | None:
        src = n + 1 if self.descending else n - 1
        if src < 0 or src > self.top_index:
            return None
        return self.differential(src)

    def check_composites(self) -> None:
        for n in self.indices:
            nxt = n - 1 if self.descending else n + 1
            if 0 <= nxt <= self.top_index:
                if not (self.differential(nxt) @ self.differential(n)).is_zero():
                    raise VerificationError(f"operator does not square to zero at index {n}")

    def subquotient(self, n: int) -> Subquotient:
        return Subquotient.build(self.field, self.dim(n), self.differential(n), self.incoming(n))

    def homology(self, n: int) -> "HomologySummary":
        if n < 0:
            raise ValueError("index must be non-negative")
        if n not in self._homology:
            self._homology[n] = HomologySummary.from_complex(self, n)
        return self._homology[n]

    def betti(self, n: int) -> int:
        return self.homology(n).betti

    def betti_numbers(self) -> list[int]:
        return [self.betti(n) for n in self.indices]

    def as_graded(self) -> GradedChainComplex:
        order = list(reversed(self.indices)) if self.descending else list(self.indices)
        nodes = [Node(self.degree(n), self.basis(n)) for n in order]
        maps = [self.differential(n) for n in order[:-1]]
        return GradedChainComplex(self.field, "descending" if self.descending else "ascending",
                                  self.step, nodes, maps)

    def __repr__(self):
        kind = "R_*" if self.descending else "R^*"
        return f"{kind}({self.source}, {format_operator(self.operator, self.source.ambient)}, m={self.m})"


def constrained_complex(K: Hypergraph, alpha: ExtOperator, m: int) -> ConstrainedComplex:
    if alpha.variance != LOWER:
        raise ValueError("a chain complex needs a lower-variance operator")
    return ConstrainedComplex(K, alpha, m)


def constrained_cocomplex(L: Hypergraph, omega: ExtOperator, m: int) -> ConstrainedComplex:
    if omega.variance != UPPER:
        raise ValueError("a cochain complex needs an upper-variance operator")
    return ConstrainedComplex(L, omega, m)


@dataclass
class HomologySummary:
    index: int
    degree: int
    basis: list
    data: Subquotient
    table: object = None

    @classmethod
    def from_complex(cls, C: ConstrainedComplex, n: int) -> "HomologySummary":
        return cls(n, C.degree(n), C.basis(n), C.subquotient(n), C.source.ambient)

    @property
    def betti(self) -> int:
        return self.data.betti

    @property
    def kernel(self) -> list:
        return self.data.kernel

    @property
    def image(self) -> list:
        return self.data.image

    @property
    def representatives(self) -> list:
        return self.data.representatives

    def representative_chains(self) -> list[list[tuple[object, Edge]]]:
        return [[(c, e) for c, e in zip(vec, self.basis) if c] for vec in self.representatives]

    def to_json(self):
        F = self.data.field
        label = (lambda e: list(self.table.label(e))) if self.table is not None else list
        return {
            "index": self.index,
            "degree": self.degree,
            "betti": self.betti,
            "representatives": [[[F.to_json(c), label(e)] for c, e in rep] for rep in self.representative_chains()],
        }


# -- usual, weighted and localized variants ----------------------------------

def total_operator(H: Hypergraph, field: Field, variance: str = LOWER,
                   weights: Mapping[int, object] | None = None, support: Sequence[int] | None = None) -> ExtOperator:
    """sum over v in support of w(v) times the generator at v."""
    support = range(len(H.ambient)) if support is None else support
    w = {v: (weights.get(v, 0) if weights is not None else 1) for v in support}
    return ExtOperator.vertex_sum(field, variance, w)


def usual_homology(K: Hypergraph, n: int, field: Field) -> HomologySummary:
    if not is_simplicial(K):
        raise NonAdmissibleError("usual homology needs a simplicial complex")
    return ConstrainedComplex(K, total_operator(K, field), 0).homology(n)


def usual_cohomology(L: Hypergraph, n: int, field: Field) -> HomologySummary:
    if not is_independence(L):
        raise NonAdmissibleError("usual cohomology needs an independence hypergraph")
    return ConstrainedComplex(L, total_operator(L, field, UPPER), 0).homology(n)


def weighted_boundary_matrix(K: Hypergraph, weights: Mapping[int, object], n: int,
                             support: Sequence[int] | None, field: Field) -> Matrix:
    op = total_operator(K, field, LOWER, weights, support)
    src = K.of_dimension(n)
    dst = K.of_dimension(n - 1) if n >= 1 else []
    return operator_matrix(op, src, dst, K.ambient)


def weighted_coboundary_matrix(L: Hypergraph, weights: Mapping[int, object], n: int,
                               support: Sequence[int] | None, field: Field) -> Matrix:
    op = total_operator(L, field, UPPER, weights, support)
    return operator_matrix(op, L.of_dimension(n), L.of_dimension(n + 1), L.ambient)


def localized_homology(H: Hypergraph, weights: Mapping[int, object], part: Sequence[int], n: int,
                       field: Field, variance: str = LOWER) -> HomologySummary:
    """Homology of the weighted differential restricted to the block ``part``.

    Computed twice, from the weighted (co)boundary matrices and from the
    constrained complex of the same operator; the two must agree.
    """
    if variance == LOWER:
        out = weighted_boundary_matrix(H, weights, n, part, field)
        inc = weighted_boundary_matrix(H, weights, n + 1, part, field)
    else:
        out = weighted_coboundary_matrix(H, weights, n, part, field)
        inc = weighted_coboundary_matrix(H, weights, n - 1, part, field) if n >= 1 else None
    direct = Subquotient.build(field, len(H.of_dimension(n)), out, inc)
    C = ConstrainedComplex(H, total_operator(H, field, variance, weights, part), 0)
    summary = C.homology(n)
    if summary.betti != direct.betti or summary.representatives != direct.representatives:
        raise VerificationError("localized homology disagrees between the two computations")
    return summary


def localized_homology_by_block(H: Hypergraph, weights: Mapping[int, object], partition: Sequence[Sequence[int]],
                                n: int, field: Field, variance: str = LOWER) -> list[HomologySummary]:
    return [localized_homology(H, weights, block, n, field, variance) for block in partition]


# -- chain maps and induced maps ------------------------------------------------

@dataclass
class ChainMap:
    source: ConstrainedComplex
    target: ConstrainedComplex
    components: dict  # index -> Matrix from source node n to target node n

    def component(self, n: int) -> Matrix:
        if n in self.components:
            return self.components[n]
        return Matrix(self.source.field, self.target.dim(n), self.source.dim(n))

    def verify(self) -> None:
        S, T = self.source, self.target
        if S.descending != T.descending:
            raise ChainMapError("source and target run in opposite directions")
        indices = range(max(S.top_index, T.top_index) + 1)
        for n in indices:
            nxt = n - 1 if S.descending else n + 1
            if nxt < 0 or nxt > max(S.top_index, T.top_index):
                continue
            left = _outgoing(T, n, nxt) @ self.component(n)
            right = self.component(nxt) @ _outgoing(S, n, nxt)
            if left != right:
                raise ChainMapError(f"map does not commute with the differentials at index {n}")


def _outgoing(C: ConstrainedComplex, n: int, nxt: int) -> Matrix:
    """Differential from node n to node nxt, zero-shaped where the complex is cut off."""
    if n > C.top_index or nxt > C.top_index:
        return Matrix(C.field, C.dim(nxt), C.dim(n))
    return C.differential(n)


def _edge_matrix(field: Field, src: Sequence[Edge], dst: Sequence[Edge], image) -> Matrix:
    pos = {e: i for i, e in enumerate(dst)}
    M = Matrix(field, len(dst), len(src))
    for j, e in enumerate(src):
        r = image(e)
        if r is None:
            continue
        s, f = r
        if f not in pos:
            raise ChainMapError(f"hyperedge {f} is missing from the target")
        M.rows[pos[f]][j] = field.one if s > 0 else field.neg(field.one)
    return M


def inclusion_chain_map(source: ConstrainedComplex, target: ConstrainedComplex) -> ChainMap:
    if source.m != target.m or source.step != target.step:
        raise ChainMapError("inclusion needs matching gradings")
    if not source.source.edges <= target.source.edges:
        raise ChainMapError("source hypergraph is not contained in the target")
    F = source.field
    comps = {n: _edge_matrix(F, source.basis(n), target.basis(n), lambda e: (1, e)) for n in source.indices}
    return ChainMap(source, target, comps)


def operator_chain_map(source: ConstrainedComplex, target: ConstrainedComplex, beta: ExtOperator) -> ChainMap:
    """beta (even degree 2s) from R(H, op, m) to R(H, op, m -/+ 2s)."""
    if beta.degree % 2:
        raise ChainMapError("only even-degree operators induce maps between constrained complexes")
    shift = -beta.degree if source.descending else beta.degree
    if beta.degree and beta.variance != source.variance:
        raise ChainMapError("operator variance does not match the complex")
    if target.m != source.m + shift:
        raise ChainMapError(f"target must start at degree {source.m + shift}, got {target.m}")
    comps = {}
    for n in range(max(source.top_index, target.top_index) + 1):
        src, dst = source.basis(n), target.basis(n)
        if not src:
            continue
        try:
            comps[n] = operator_matrix(beta, src, dst, source.source.ambient)
        except NonAdmissibleError as exc:
            raise ChainMapError(str(exc)) from None
    return ChainMap(source, target, comps)


def relabel_edge(phi: Mapping[int, int], e: Edge):
    """(sign of the sorting permutation, sorted image) of an edge under phi."""
    img = [phi[v] for v in e]
    inv = sum(1 for i in range(len(img)) for j in range(i + 1, len(img)) if img[i] > img[j])
    return (-1) ** inv, tuple(sorted(img))


def bijection_chain_map(source: ConstrainedComplex, target: ConstrainedComplex, phi: Mapping[int, int]) -> ChainMap:
    if len(set(phi.values())) != len(phi) or len(phi) != len(source.source.ambient):
        raise ChainMapError("vertex map is not a bijection")
    F = source.field
    comps = {n: _edge_matrix(F, source.basis(n), target.basis(n), lambda e: relabel_edge(phi, e))
             for n in source.indices}
    return ChainMap(source, target, comps)


MapSpec = Union[ExtOperator, str, Mapping[int, int], ChainMap]


def as_chain_map(source: ConstrainedComplex, target: ConstrainedComplex, spec: MapSpec) -> ChainMap:
    if isinstance(spec, ChainMap):
        return spec
    if isinstance(spec, ExtOperator):
        return operator_chain_map(source, target, spec)
    if spec == "inclusion":
        return inclusion_chain_map(source, target)
    if isinstance(spec, Mapping):
        return bijection_chain_map(source, target, spec)
    raise ValueError(f"unsupported chain map specification {spec!r}")


def induced_matrix(f: ChainMap, n: int) -> Matrix:
    """Matrix of the map on homology at index n, in the representative bases."""
    src = f.source.homology(n)
    dst = f.target.homology(n)
    F = f.source.field
    comp = f.component(n)
    cols = []
    for rep in src.representatives:
        img = comp.apply(rep)
        if dst.data.dim and not dst.data.contains_cycle(img):
            raise ChainMapError(f"a cycle is not sent to a cycle at index {n}")
        cols.append(dst.data.class_of(img) if dst.data.dim else [])
    return Matrix.from_columns(F, dst.betti, cols)


def induced_map_on_homology(source: ConstrainedComplex, target: ConstrainedComplex, spec: MapSpec) -> dict[int, Matrix]:
    f = as_chain_map(source, target, spec)
    f.verify()
    return {n: induced_matrix(f, n) for n in range(max(source.top_index, target.top_index) + 1)}


def euler_characteristic(C: ConstrainedComplex) -> tuple[int, int]:
    """(alternating sum of betti numbers, alternating sum of node dimensions)."""
    return (sum((-1) ** n * C.betti(n) for n in C.indices),
            sum((-1) ** n * C.dim(n) for n in C.indices))


def span_rank(vectors: Sequence[Sequence], field: Field, dim: int) -> int:
    return len(rref(vectors, field, dim)[1])
