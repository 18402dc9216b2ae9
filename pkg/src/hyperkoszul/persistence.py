"""Filtrations of hypergraphs and persistent constrained (co)homology."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import FiltrationError, HeaderMismatchError, ParseError
from .exterior import LOWER, ExtOperator, operator_matrix, require_admissible
from .hypergraph import Edge, Hypergraph, VertexTable, closure_by_name, edge_key
from .homology import ConstrainedComplex
from .linalg import rank_of
from .mayer_vietoris import (ladder_between, mv_hypergraph, mv_morphism, natural_top, verify_les)


def _render(x: Fraction | None):
    if x is None:
        return None
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Filtration:
    ambient: VertexTable
    births: Mapping  # Edge -> Fraction

    @property
    def critical_values(self) -> list[Fraction]:
        return sorted(set(self.births.values()))

    def level(self, x) -> Hypergraph:
        x = Fraction(x)
        return Hypergraph(self.ambient, frozenset(e for e, b in self.births.items() if b <= x))

    def final(self) -> Hypergraph:
        return Hypergraph(self.ambient, frozenset(self.births))

    def birth(self, e: Edge) -> Fraction | None:
        return self.births.get(e)

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.ambient.names)]
        for e in sorted(self.births, key=lambda e: (self.births[e], edge_key(e))):
            lines.append(f"{_render(self.births[e])} " + " ".join(self.ambient.label(e)))
        return "\n".join(lines) + "\n"

    @classmethod
    def constant(cls, H: Hypergraph, at=0) -> "Filtration":
        return cls(H.ambient, {e: Fraction(at) for e in H.edges})


def load_filtration(text: str, table: VertexTable | None = None) -> Filtration:
    """Parse ``birth v_i v_j ...`` lines; a duplicate edge keeps its smallest birth."""
    header = None
    rows: list[tuple[int, Fraction, list[str], str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vertices:"):
            header = line.split(":", 1)[1].split()
            continue
        parts = line.split()
        try:
            birth = Fraction(parts[0])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed birth value {parts[0]!r}", lineno, raw.find(parts[0]), raw) from None
        names = parts[1:]
        if not names:
            raise ParseError("hyperedge has no vertices", lineno)
        if len(set(names)) != len(names):
            raise ParseError("duplicate vertex in hyperedge", lineno)
        rows.append((lineno, birth, names, raw))
    if table is None:
        if header is not None:
            table = VertexTable(header)
        else:
            seen: dict[str, None] = {}
            for _, _, names, _ in rows:
                for n in names:
                    seen.setdefault(n, None)
            table = VertexTable(seen)
    births: dict[Edge, Fraction] = {}
    for lineno, b, names, raw in rows:
        for n in names:
            if n not in table:
                raise ParseError(f"undeclared vertex {n!r}", lineno, raw.find(n), raw)
        e = table.edge(names)
        births[e] = min(b, births.get(e, b))
    return Filtration(table, births)


def derived_filtration(F: Filtration, kind: str) -> Filtration:
    """Apply a closure level-wise; an edge is born at the first level containing it."""
    closure = closure_by_name(kind)
    births: dict[Edge, Fraction] = {}
    for x in F.critical_values:
        for e in closure(F.level(x)).edges:
            births.setdefault(e, x)
    return Filtration(F.ambient, births)


# -- barcodes ----------------------------------------------------------------

@dataclass
class Bar:
    index: int
    birth: Fraction
    death: Fraction | None
    representative: list | None = None  # [(coeff, edge), ...]

    def contains(self, x, y) -> bool:
        return self.birth <= x and (self.death is None or self.death > y)


@dataclass
class Barcode:
    bars: list
    field: object = None
    table: VertexTable | None = None

    def at(self, index: int) -> list[Bar]:
        return [b for b in self.bars if b.index == index]

    def count(self, index: int, x, y) -> int:
        x, y = Fraction(x), Fraction(y)
        return sum(1 for b in self.bars if b.index == index and b.contains(x, y))

    def multiset(self) -> list[tuple]:
        return sorted((b.index, b.birth, b.death is None, b.death or 0) for b in self.bars)

    def to_json(self, representatives: bool = False):
        out = []
        for b in self.bars:
            item = {"index": b.index, "birth": _render(b.birth), "death": _render(b.death)}
            if representatives and b.representative is not None:
                item["representative"] = [[self.field.to_json(c), list(self.table.label(e))]
                                          for c, e in b.representative]
            out.append(item)
        return out

    def to_tsv(self) -> str:
        lines = ["index\tbirth\tdeath"]
        for b in self.bars:
            death = "inf" if b.death is None else str(_render(b.death))
            lines.append(f"{b.index}\t{_render(b.birth)}\t{death}")
        return "\n".join(lines) + "\n"


@dataclass
class _Cell:
    node: int
    edge: Edge
    birth: Fraction


def _cells(F: Filtration, op: ExtOperator, m: int, tie_break: str) -> tuple[list[_Cell], ConstrainedComplex]:
    full = F.final()
    C = ConstrainedComplex(full, op, m, check=False)
    cells = [_Cell(n, e, F.births[e]) for n in C.indices for e in C.basis(n)]
    node_order = 1 if C.descending else -1
    flip = -1 if tie_break == "reverse" else 1
    if tie_break not in ("canonical", "reverse"):
        raise ValueError("tie_break must be 'canonical' or 'reverse'")
    # equal births: the differential's target node first, then edge order
    cells.sort(key=lambda c: (c.birth, node_order * c.node, _ordinal(c.edge, flip)))
    return cells, C


def _ordinal(e: Edge, flip: int):
    key = edge_key(e)
    return key if flip > 0 else (-key[0], tuple(-v for v in key[1]))


def check_compatibility(F: Filtration, op: ExtOperator, m: int) -> None:
    """Every term of a differential must already be present when its source is born."""
    full = F.final()
    C = ConstrainedComplex(full, op, m, check=False)
    table = F.ambient
    for n in C.indices:
        nxt = n - 1 if C.descending else n + 1
        src = C.basis(n)
        if not src or not 0 <= nxt <= C.top_index:
            continue
        # probe against every edge of that dimension so missing targets are visible
        deg = C.degree(nxt)
        universe = list(combinations(range(len(table)), deg + 1)) if deg >= 0 else []
        M = operator_matrix(op, src, universe, table)
        for j, sigma in enumerate(src):
            for i, tau in enumerate(universe):
                if M.rows[i][j]:
                    bt = F.births.get(tau)
                    if bt is None or bt > F.births[sigma]:
                        when = "never" if bt is None else f"at {_render(bt)}"
                        raise FiltrationError(
                            f"differential sends {{{' '.join(table.label(sigma))}}} (born at "
                            f"{_render(F.births[sigma])}) onto {{{' '.join(table.label(tau))}}} (born {when})")


def check_levels_admissible(F: Filtration, op: ExtOperator) -> None:
    for x in F.critical_values:
        require_admissible(F.level(x), op)


def persistent_homology(F: Filtration, op: ExtOperator, m: int, indices: Sequence[int] | None = None,
                        representatives: bool = True, tie_break: str = "canonical") -> Barcode:
    """Barcode of the constrained complex of ``op`` along ``F`` by column reduction."""
    if op.degree % 2 == 0:
        raise ValueError("operator must have odd degree")
    check_compatibility(F, op, m)
    check_levels_admissible(F, op)
    Fd = op.field
    cells, C = _cells(F, op, m, tie_break)
    pos = {(c.node, c.edge): k for k, c in enumerate(cells)}
    step = -1 if C.descending else 1

    columns: list[dict] = []
    for c in cells:
        col: dict = {}
        tgt = c.node + step
        if 0 <= tgt <= C.top_index:
            M = operator_matrix(op, [c.edge], C.basis(tgt), F.ambient)
            for i, tau in enumerate(C.basis(tgt)):
                if M.rows[i][0]:
                    col[pos[(tgt, tau)]] = M.rows[i][0]
        columns.append(col)

    track = [{k: Fd.one} for k in range(len(cells))] if representatives else None
    low_owner: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    for j, col in enumerate(columns):
        while col:
            low = max(col)
            k = low_owner.get(low)
            if k is None:
                break
            factor = Fd.div(col[low], columns[k][low])
            for r, v in columns[k].items():
                nv = Fd.sub(col.get(r, Fd.zero), Fd.mul(factor, v))
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
            if track is not None:
                for r, v in track[k].items():
                    nv = Fd.sub(track[j].get(r, Fd.zero), Fd.mul(factor, v))
                    if nv:
                        track[j][r] = nv
                    else:
                        track[j].pop(r, None)
        if col:
            low = max(col)
            low_owner[low] = j
            pairs.append((low, j))

    def chain(vec: dict) -> list:
        return sorted(((v, cells[r].edge) for r, v in vec.items()), key=lambda t: edge_key(t[1]))

    bars: list[Bar] = []
    paired = set()
    for creator, killer in pairs:
        paired.update((creator, killer))
        b, d = cells[creator].birth, cells[killer].birth
        if b < d:
            rep = chain(columns[killer]) if representatives else None
            bars.append(Bar(cells[creator].node, b, d, rep))
    for j, c in enumerate(cells):
        if j not in paired:
            rep = chain(track[j]) if representatives else None
            bars.append(Bar(c.node, c.birth, None, rep))
    if indices is not None:
        wanted = set(indices)
        bars = [b for b in bars if b.index in wanted]
    bars.sort(key=lambda b: (b.index, b.birth, b.death is None, b.death or 0))
    return Barcode(bars, Fd, F.ambient)


def persistence_rank(F: Filtration, op: ExtOperator, m: int, n: int, x, y) -> int:
    """Rank of H_n(level x) -> H_n(level y), straight from chain-level inclusion."""
    x, y = Fraction(x), Fraction(y)
    if x > y:
        raise ValueError("need x <= y")
    Cx = ConstrainedComplex(F.level(x), op, m)
    Cy = ConstrainedComplex(F.level(y), op, m)
    zx = Cx.subquotient(n).kernel
    by = Cy.subquotient(n).image
    basis_y = Cy.basis(n)
    pos = {e: i for i, e in enumerate(basis_y)}
    Fd = op.field
    embedded = []
    for z in zx:
        v = [Fd.zero] * len(basis_y)
        for c, e in zip(z, Cx.basis(n)):
            if c:
                v[pos[e]] = c
        embedded.append(v)
    dim = len(basis_y)
    return rank_of(embedded + by, Fd, dim) - rank_of(by, Fd, dim)


def verify_barcode(F: Filtration, op: ExtOperator, m: int, barcode: Barcode) -> list[tuple]:
    """Mismatches (index, x, y, bars, rank) between bar counts and the rank oracle."""
    crit = F.critical_values
    top = natural_top(len(F.ambient), m, op.degree)
    bad = []
    for n in range(top + 1):
        for i, x in enumerate(crit):
            for y in crit[i:]:
                r = persistence_rank(F, op, m, n, x, y)
                c = barcode.count(n, x, y)
                if r != c:
                    bad.append((n, x, y, c, r))
    return bad


# -- persistent Mayer-Vietoris -------------------------------------------------

@dataclass
class PersistentMVReport:
    values: list
    ladders: list
    transition_failures: list = dc_field(default_factory=list)
    morphism_failures: list = dc_field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(lad.exact for lad in self.ladders)

    @property
    def commuting(self) -> bool:
        return (all(lad.commuting for lad in self.ladders)
                and not self.transition_failures and not self.morphism_failures)

    def to_json(self):
        return {
            "levels": [{"value": _render(x), "ladder": lad.to_json()} for x, lad in zip(self.values, self.ladders)],
            "verdicts": {"exact": self.exact, "commuting": self.commuting},
        }


def persistent_mv(F1: Filtration, F2: Filtration, op: ExtOperator, m: int, beta: ExtOperator | None = None) -> PersistentMVReport:
    if F1.ambient != F2.ambient:
        raise HeaderMismatchError("filtrations use different vertex tables")
    values = sorted(set(F1.critical_values) | set(F2.critical_values))
    N = natural_top(len(F1.ambient), m, op.degree)
    ladders = [mv_hypergraph(F1.level(x), F2.level(x), op, m, top=N) for x in values]
    failures = []
    for k in range(len(ladders) - 1):
        a, b = ladders[k], ladders[k + 1]
        top_step = ladder_between(a.top, b.top)
        bot_step = ladder_between(a.bottom, b.bottom)
        if not top_step.commuting or not bot_step.commuting:
            failures.append((k, "row"))
        # cube face: rung after the step equals the step after the rung
        for p in range(len(a.top.nodes)):
            if bot_step.rungs[p] @ a.rungs[p] != b.rungs[p] @ top_step.rungs[p]:
                failures.append((k, p))
    morph_bad = []
    if beta is not None:
        for k, lad in enumerate(ladders):
            if not mv_morphism(lad, beta).commuting:
                morph_bad.append(k)
    return PersistentMVReport(values, ladders, failures, morph_bad)


def connecting_ranks(report: PersistentMVReport) -> list[list[int]]:
    return [[M.rank() for _, M in lad.bottom.connecting_maps()] + [M.rank() for _, M in lad.top.connecting_maps()]
            for lad in report.ladders]


__all__ = [
    "Filtration", "load_filtration", "derived_filtration", "Bar", "Barcode", "persistent_homology",
    "persistence_rank", "verify_barcode", "check_compatibility", "PersistentMVReport", "persistent_mv",
    "connecting_ranks", "verify_les",
]
