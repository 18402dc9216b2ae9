"""Mayer-Vietoris long exact sequences and ladders for constrained (co)homology.

The short exact sequence of complexes is
``0 -> C(A & B) -> C(A) + C(B) -> C(A | B) -> 0`` with ``x -> (x, x)`` and
``(a, b) -> a - b``; connecting maps are found by lifting, applying the
differential and pulling back along the inclusion.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import HeaderMismatchError, NonAdmissibleError, VerificationError
from .exterior import LOWER, UPPER, ExtOperator
from .fields import Field
from .homology import (ChainMap, ConstrainedComplex, HomologySummary, inclusion_chain_map,
                       induced_matrix, operator_chain_map)
from .hypergraph import (Hypergraph, bar_delta_closure, bar_lower_delta, delta_closure, is_independence,
                         is_simplicial, lower_delta)
from .linalg import Matrix, block_diag, nullspace, rank_of

INTERSECTION = "intersection"
DIRECT_SUM = "direct-sum"
UNION = "union"


def natural_top(ambient_size: int, m: int, step: int) -> int:
    top = ambient_size - 1
    return max(0, (top - m) // step) if top >= m else 0


@dataclass
class LESNode:
    role: str
    index: int
    degree: int
    betti: int

    def to_json(self):
        return {"role": self.role, "index": self.index, "degree": self.degree, "betti": self.betti}


@dataclass
class ExactnessVerdict:
    exact: bool
    failures: list  # (position, role, index, defect, composite_ok)

    def to_json(self):
        return {
            "exact": self.exact,
            "failures": [{"position": p, "role": r, "index": i, "defect": d, "composite_zero": c}
                         for p, r, i, d, c in self.failures],
        }


@dataclass
class LESDiagram:
    field: Field
    variance: str
    nodes: list
    maps: list  # maps[k]: nodes[k] -> nodes[k+1]
    first: Hypergraph | None = None
    second: Hypergraph | None = None
    operator: ExtOperator | None = None
    m: int = 0
    top: int = 0
    complexes: dict = dc_field(default_factory=dict)

    def position(self, role: str, index: int) -> int:
        for k, node in enumerate(self.nodes):
            if node.role == role and node.index == index:
                return k
        raise KeyError((role, index))

    def connecting_maps(self) -> list[tuple[int, Matrix]]:
        return [(self.nodes[k].index, M) for k, M in enumerate(self.maps) if self.nodes[k].role == UNION]

    def alternating_rank_sum(self) -> int:
        return sum((-1) ** k * node.betti for k, node in enumerate(self.nodes))

    def to_json(self):
        verdict = verify_les(self)
        return {
            "variance": self.variance,
            "m": self.m,
            "hypergraphs": [_edge_names(H) for H in (self.first, self.second)],
            "nodes": [n.to_json() for n in self.nodes],
            "maps": [{"from": k, "to": k + 1, "rank": M.rank()} for k, M in enumerate(self.maps)],
            "exact": verdict.exact,
        }


def _edge_names(H: Hypergraph | None):
    return None if H is None else [list(H.ambient.label(e)) for e in H.sorted_edges()]


def verify_les(d: LESDiagram) -> ExactnessVerdict:
    """Check im(incoming) == ker(outgoing) at every node, with zero maps at both ends."""
    F = d.field
    failures = []
    for k, node in enumerate(d.nodes):
        dim = node.betti
        inc = d.maps[k - 1] if k > 0 else None
        out = d.maps[k] if k < len(d.maps) else None
        rank_in = inc.rank() if inc is not None and inc.ncols else 0
        nullity_out = len(nullspace(out)) if out is not None and out.nrows else dim
        composite_ok = True
        if inc is not None and out is not None:
            composite_ok = (out @ inc).is_zero()
        defect = nullity_out - rank_in
        if defect or not composite_ok:
            failures.append((k, node.role, node.index, defect, composite_ok))
    return ExactnessVerdict(not failures, failures)


# -- building one long exact sequence ----------------------------------------

def _transfer(field: Field, vec: Sequence, src_basis: Sequence, dst_basis: Sequence) -> list:
    pos = {e: i for i, e in enumerate(dst_basis)}
    out = [field.zero] * len(dst_basis)
    for c, e in zip(vec, src_basis):
        if c:
            if e not in pos:
                raise VerificationError("connecting map: boundary leaves the intersection")
            out[pos[e]] = c
    return out


def _class_columns(field: Field, target: HomologySummary, vectors: Sequence[Sequence]) -> list:
    return [target.data.class_of(v) if target.data.dim else [] for v in vectors]


def build_les(A: Hypergraph, B: Hypergraph, op: ExtOperator, m: int, top: int | None = None,
              lift: str = "first") -> LESDiagram:
    """Long exact sequence of the pair (A, B) for the constrained complexes of ``op``."""
    if A.ambient != B.ambient:
        raise HeaderMismatchError("the two hypergraphs use different vertex tables")
    F = op.field
    I, U = A & B, A | B
    CI, CA, CB, CU = (ConstrainedComplex(H, op, m) for H in (I, A, B, U))
    N = natural_top(len(A.ambient), m, CI.step) if top is None else top
    iA, iB = inclusion_chain_map(CI, CA), inclusion_chain_map(CI, CB)
    jA, jB = inclusion_chain_map(CA, CU), inclusion_chain_map(CB, CU)
    descending = op.variance == LOWER

    def hom(C: ConstrainedComplex, n: int) -> HomologySummary:
        return C.homology(n)

    def i_map(n: int) -> Matrix:
        hI, hA, hB = hom(CI, n), hom(CA, n), hom(CB, n)
        cols = []
        for x in hI.representatives:
            a = hA.data.class_of(iA.component(n).apply(x)) if hA.data.dim else []
            b = hB.data.class_of(iB.component(n).apply(x)) if hB.data.dim else []
            cols.append(a + b)
        return Matrix.from_columns(F, hA.betti + hB.betti, cols)

    def j_map(n: int) -> Matrix:
        hA, hB, hU = hom(CA, n), hom(CB, n), hom(CU, n)
        imgs = [jA.component(n).apply(a) for a in hA.representatives]
        imgs += [[F.neg(c) for c in jB.component(n).apply(b)] for b in hB.representatives]
        return Matrix.from_columns(F, hU.betti, _class_columns(F, hU, imgs))

    def connecting(n: int, nxt: int) -> Matrix:
        hU, hI = hom(CU, n), hom(CI, nxt)
        ubasis = CU.basis(n)
        in_a = set(CA.basis(n))
        in_b = set(CB.basis(n))
        cols = []
        for z in hU.representatives:
            # split z = a - b with a on A-edges and b on B-edges
            if lift == "first":
                a = [c if e in in_a else F.zero for c, e in zip(z, ubasis)]
            else:
                a = [F.zero if e in in_b else c for c, e in zip(z, ubasis)]
            b = [F.sub(ca, cz) for ca, cz in zip(a, z)]
            a_vec = _transfer(F, a, ubasis, CA.basis(n))
            b_vec = _transfer(F, b, ubasis, CB.basis(n))
            da = CA.differential(n).apply(a_vec) if CA.dim(n) else [F.zero] * CA.dim(nxt)
            db = CB.differential(n).apply(b_vec) if CB.dim(n) else [F.zero] * CB.dim(nxt)
            x = _transfer(F, da, CA.basis(nxt), CI.basis(nxt))
            if _transfer(F, x, CI.basis(nxt), CB.basis(nxt)) != list(db):
                raise VerificationError("connecting map: the two boundaries disagree")
            cols.append(x)
        return Matrix.from_columns(F, hI.betti, _class_columns(F, hI, cols))

    nodes: list[LESNode] = []
    maps: list[Matrix] = []
    order = range(N, -1, -1) if descending else range(0, N + 1)
    for n in order:
        deg = CI.degree(n)
        nodes.append(LESNode(INTERSECTION, n, deg, hom(CI, n).betti))
        maps.append(i_map(n))
        nodes.append(LESNode(DIRECT_SUM, n, deg, hom(CA, n).betti + hom(CB, n).betti))
        maps.append(j_map(n))
        nodes.append(LESNode(UNION, n, deg, hom(CU, n).betti))
        nxt = n - 1 if descending else n + 1
        if 0 <= nxt <= N:
            maps.append(connecting(n, nxt))
    return LESDiagram(F, op.variance, nodes, maps, A, B, op, m, N,
                      {INTERSECTION: CI, "first": CA, "second": CB, UNION: CU})


def mv_simplicial(K1: Hypergraph, K2: Hypergraph, alpha: ExtOperator, m: int, top: int | None = None) -> LESDiagram:
    if alpha.variance != LOWER:
        raise ValueError("homology sequence needs a lower-variance operator")
    for K in (K1, K2):
        if not is_simplicial(K):
            raise NonAdmissibleError("both hypergraphs must be simplicial complexes")
    return build_les(K1, K2, alpha, m, top)


def mv_independence(L1: Hypergraph, L2: Hypergraph, omega: ExtOperator, m: int, top: int | None = None) -> LESDiagram:
    if omega.variance != UPPER:
        raise ValueError("cohomology sequence needs an upper-variance operator")
    for L in (L1, L2):
        if not is_independence(L):
            raise NonAdmissibleError("both hypergraphs must be independence hypergraphs")
    return build_les(L1, L2, omega, m, top)


# -- maps between sequences -------------------------------------------------

def _node_maps(src: LESDiagram, dst: LESDiagram, maker) -> list[Matrix]:
    """Vertical matrices between two sequences with identical layouts.

    ``maker(role_key, n)`` returns the chain map from src's complex to dst's.
    """
    if [(n.role, n.index) for n in src.nodes] != [(n.role, n.index) for n in dst.nodes]:
        raise VerificationError("sequences have different layouts")
    F = src.field
    out = []
    for node in src.nodes:
        n = node.index
        if node.role == DIRECT_SUM:
            out.append(block_diag(F, induced_matrix(maker("first"), n), induced_matrix(maker("second"), n)))
        else:
            out.append(induced_matrix(maker(node.role), n))
    return out


def _failing_squares(src: LESDiagram, dst: LESDiagram, vertical: list[Matrix]) -> list[int]:
    bad = []
    for k in range(len(src.maps)):
        if dst.maps[k] @ vertical[k] != vertical[k + 1] @ src.maps[k]:
            bad.append(k)
    return bad


@dataclass
class MVLadder:
    top: LESDiagram
    bottom: LESDiagram
    rungs: list
    failing_squares: list
    closures: dict = dc_field(default_factory=dict)

    @property
    def commuting(self) -> bool:
        return not self.failing_squares

    @property
    def exact(self) -> bool:
        return verify_les(self.top).exact and verify_les(self.bottom).exact

    def to_json(self):
        return {
            "top": self.top.to_json(),
            "bottom": self.bottom.to_json(),
            "rungs": [{"position": k, "rank": M.rank()} for k, M in enumerate(self.rungs)],
            "exact": self.exact,
            "commuting": self.commuting,
        }


def ladder_between(top_les: LESDiagram, bottom_les: LESDiagram) -> MVLadder:
    """Ladder whose rungs are induced by inclusions of the top pair into the bottom pair."""
    src, dst = top_les.complexes, bottom_les.complexes

    def maker(role: str) -> ChainMap:
        return inclusion_chain_map(src[role], dst[role])

    rungs = _node_maps(top_les, bottom_les, maker)
    return MVLadder(top_les, bottom_les, rungs, _failing_squares(top_les, bottom_les, rungs))


def mv_hypergraph(H1: Hypergraph, H2: Hypergraph, op: ExtOperator, m: int, variance: str | None = None,
                  top: int | None = None) -> MVLadder:
    """Ladder from the inner closures of (H1, H2) to the outer closures."""
    variance = variance or op.variance
    if variance != op.variance:
        raise ValueError("operator variance does not match the requested variance")
    if H1.ambient != H2.ambient:
        raise HeaderMismatchError("the two hypergraphs use different vertex tables")
    if variance == LOWER:
        inner, outer = lower_delta, delta_closure
    else:
        inner, outer = bar_lower_delta, bar_delta_closure
    pairs = {"top": (inner(H1), inner(H2)), "bottom": (outer(H1), outer(H2))}
    N = natural_top(len(H1.ambient), m, op.degree) if top is None else top
    top_les = build_les(*pairs["top"], op, m, N)
    bottom_les = build_les(*pairs["bottom"], op, m, N)
    ladder = ladder_between(top_les, bottom_les)
    ladder.closures = pairs
    return ladder


@dataclass
class MorphismReport:
    operator: ExtOperator
    source: LESDiagram
    target: LESDiagram
    components: list
    failing_squares: list
    ladder_failures: list = dc_field(default_factory=list)

    @property
    def commuting(self) -> bool:
        return not self.failing_squares and not self.ladder_failures

    def to_json(self):
        return {
            "components": [{"position": k, "rank": M.rank()} for k, M in enumerate(self.components)],
            "commuting": self.commuting,
        }


def _shifted_m(les: LESDiagram, beta: ExtOperator) -> int:
    return les.m - beta.degree if les.variance == LOWER else les.m + beta.degree


def _common_top(les: LESDiagram, *ms: int) -> int:
    size = len(les.first.ambient)
    step = les.operator.degree
    return max([les.top] + [natural_top(size, mm, step) for mm in ms])


def _rebuild(les: LESDiagram, m: int, top: int) -> LESDiagram:
    return build_les(les.first, les.second, les.operator, m, top)


def _les_morphism(src: LESDiagram, dst: LESDiagram, beta: ExtOperator) -> list[Matrix]:
    def maker(role: str) -> ChainMap:
        f = operator_chain_map(src.complexes[role], dst.complexes[role], beta)
        f.verify()
        return f
    return _node_maps(src, dst, maker)


def mv_morphism(source, beta: ExtOperator) -> MorphismReport:
    """Matrices of the map induced by an even operator on a sequence or ladder."""
    if beta.degree % 2:
        raise ValueError("morphisms of sequences need an even-degree operator")
    if isinstance(source, MVLadder):
        m2 = _shifted_m(source.top, beta)
        N = _common_top(source.top, source.top.m, m2)
        top_src, bot_src = _rebuild(source.top, source.top.m, N), _rebuild(source.bottom, source.bottom.m, N)
        top_dst, bot_dst = _rebuild(source.top, m2, N), _rebuild(source.bottom, m2, N)
        top_beta = _les_morphism(top_src, top_dst, beta)
        bot_beta = _les_morphism(bot_src, bot_dst, beta)
        rung_src = ladder_between(top_src, bot_src)
        rung_dst = ladder_between(top_dst, bot_dst)
        failing = _failing_squares(top_src, top_dst, top_beta) + _failing_squares(bot_src, bot_dst, bot_beta)
        ladder_bad = [k for k in range(len(top_src.nodes))
                      if bot_beta[k] @ rung_src.rungs[k] != rung_dst.rungs[k] @ top_beta[k]]
        ladder_bad += rung_src.failing_squares + rung_dst.failing_squares
        return MorphismReport(beta, top_src, top_dst, top_beta + bot_beta, failing, ladder_bad)
    m2 = _shifted_m(source, beta)
    N = _common_top(source, source.m, m2)
    src = _rebuild(source, source.m, N) if N != source.top else source
    dst = _rebuild(source, m2, N)
    comps = _les_morphism(src, dst, beta)
    return MorphismReport(beta, src, dst, comps, _failing_squares(src, dst, comps))


def composite_law(les: LESDiagram, beta1: ExtOperator, beta2: ExtOperator) -> bool:
    """(beta1 ^ beta2)_* equals (beta1)_*(beta2)_* and (beta2)_*(beta1)_* at every node."""
    sign = -1 if les.variance == LOWER else 1
    d1, d2 = beta1.degree, beta2.degree
    m0 = les.m
    ms = [m0, m0 + sign * d1, m0 + sign * d2, m0 + sign * (d1 + d2)]
    N = _common_top(les, *ms)
    base, after1, after2, after12 = (_rebuild(les, mm, N) for mm in ms)
    both = _les_morphism(base, after12, beta1.wedge(beta2))
    route_21 = _les_morphism(base, after2, beta2)
    route_21b = _les_morphism(after2, after12, beta1)
    route_12 = _les_morphism(base, after1, beta1)
    route_12b = _les_morphism(after1, after12, beta2)
    for k in range(len(base.nodes)):
        if both[k] != route_21b[k] @ route_21[k] or both[k] != route_12b[k] @ route_12[k]:
            return False
    return True


def les_rank_profile(d: LESDiagram) -> list[int]:
    return [M.rank() for M in d.maps]


def chain_rank(vectors, field: Field, dim: int) -> int:
    return rank_of(vectors, field, dim)
