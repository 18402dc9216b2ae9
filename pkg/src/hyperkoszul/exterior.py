"""Discrete differentials on hyperedges and the exterior algebra they generate.

Two generator families act on ordered hyperedges:

* ``p(v)`` deletes ``v`` with sign ``(-1)**position`` (lower variance),
* ``d(v)`` inserts ``v`` with sign ``(-1)**#{u in e : u < v}`` (upper variance).

An :class:`ExtOperator` is a homogeneous linear combination of wedge
monomials of generators of one variance; a monomial ``g1 ^ g2 ^ ... ^ gk``
acts as the composite ``g1(g2(...gk(e)))``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NonAdmissibleError, ParseError
from .fields import Field
from .hypergraph import Edge, Hypergraph, VertexTable, edge_key
from .linalg import Matrix

LOWER = "lower"
UPPER = "upper"
SCALAR_LINE: Edge = ()  # the empty hyperedge, degree -1


def _check_variance(variance: str) -> str:
    if variance not in (LOWER, UPPER):
        raise ValueError(f"variance must be 'lower' or 'upper', got {variance!r}")
    return variance


# -- generator actions on a single hyperedge --------------------------------

def delete_vertex(v: int, e: Edge, augmented: bool = False):
    """(sign, face) for ``p(v) e``, or None when the result is zero."""
    try:
        i = e.index(v)
    except ValueError:
        return None
    if len(e) == 1 and not augmented:
        return None
    return (-1) ** i, e[:i] + e[i + 1:]


def insert_vertex(v: int, e: Edge):
    """(sign, coface) for ``d(v) e``, or None when ``v`` already lies in ``e``."""
    if v in e:
        return None
    below = sum(1 for u in e if u < v)
    return (-1) ** below, e[:below] + (v,) + e[below:]


# -- chains -----------------------------------------------------------------

class Chain:
    """Sparse field-valued combination of hyperedges of one dimension."""

    __slots__ = ("field", "degree", "terms")

    def __init__(self, field: Field, degree: int, terms: Mapping[Edge, object] | None = None):
        self.field = field
        self.degree = degree
        clean = {}
        for e, c in (terms or {}).items():
            c = field(c)
            if len(e) != degree + 1:
                raise ValueError(f"edge {e} does not have dimension {degree}")
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def of(cls, field: Field, edge: Sequence[int], coeff=1) -> "Chain":
        e = tuple(sorted(edge))
        return cls(field, len(e) - 1, {e: field(coeff)})

    def __add__(self, other: "Chain") -> "Chain":
        if self.degree != other.degree:
            raise ValueError("cannot add chains of different degree")
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, F.zero), c)
        return Chain(F, self.degree, out)

    def __neg__(self) -> "Chain":
        return self.scaled(self.field.neg(self.field.one))

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scaled(self, c) -> "Chain":
        F = self.field
        return Chain(F, self.degree, {e: F.mul(c, a) for e, a in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def to_vector(self, basis: Sequence[Edge]) -> list:
        pos = {e: i for i, e in enumerate(basis)}
        v = [self.field.zero] * len(basis)
        for e, c in self.terms.items():
            if e not in pos:
                raise NonAdmissibleError(f"hyperedge {e} is not in the basis")
            v[pos[e]] = c
        return v

    @classmethod
    def from_vector(cls, field: Field, degree: int, basis: Sequence[Edge], vec: Sequence) -> "Chain":
        return cls(field, degree, {e: c for e, c in zip(basis, vec) if c})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: edge_key(kv[0]))

    def __repr__(self):
        body = " + ".join(f"{c}*{list(e)}" for e, c in self.items()) or "0"
        return f"Chain[{self.degree}]({body})"


def partial_derivative(v: int, c: Chain, augmented: bool = False) -> Chain:
    F = c.field
    out: dict = {}
    for e, a in c.terms.items():
        r = delete_vertex(v, e, augmented)
        if r is not None:
            s, f = r
            out[f] = F.add(out.get(f, F.zero), a if s > 0 else F.neg(a))
    return Chain(F, c.degree - 1, out)


def insertion_derivative(v: int, c: Chain) -> Chain:
    F = c.field
    out: dict = {}
    for e, a in c.terms.items():
        r = insert_vertex(v, e)
        if r is not None:
            s, f = r
            out[f] = F.add(out.get(f, F.zero), a if s > 0 else F.neg(a))
    return Chain(F, c.degree + 1, out)


# -- exterior operators -----------------------------------------------------

def _sort_with_sign(word: Sequence[int]):
    """(sign, sorted tuple) for a word of distinct generators; None if repeated."""
    if len(set(word)) != len(word):
        return None
    inversions = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
    return (-1) ** inversions, tuple(sorted(word))


@dataclass(frozen=True)
class ExtOperator:
    field: Field
    variance: str
    degree: int
    terms: tuple  # sorted tuple of (monomial, coefficient), non-zero coefficients

    @classmethod
    def build(cls, field: Field, variance: str, terms: Mapping[tuple, object], degree: int | None = None) -> "ExtOperator":
        _check_variance(variance)
        clean: dict = {}
        for mono, c in terms.items():
            r = _sort_with_sign(tuple(mono))
            if r is None:
                continue
            s, key = r
            c = field(c)
            if s < 0:
                c = field.neg(c)
            clean[key] = field.add(clean.get(key, field.zero), c)
        clean = {k: c for k, c in clean.items() if c}
        degrees = {len(k) for k in clean}
        if len(degrees) > 1:
            raise ValueError("operator is not homogeneous")
        if degrees:
            deg = degrees.pop()
            if degree is not None and degree != deg:
                raise ValueError(f"expected degree {degree}, got {deg}")
        else:
            deg = degree if degree is not None else 0
        return cls(field, variance, deg, tuple(sorted(clean.items())))

    @classmethod
    def generator(cls, field: Field, variance: str, v: int) -> "ExtOperator":
        return cls.build(field, variance, {(v,): 1})

    @classmethod
    def scalar(cls, field: Field, c=1, variance: str = LOWER) -> "ExtOperator":
        return cls.build(field, variance, {(): c}, degree=0)

    @classmethod
    def zero(cls, field: Field, variance: str, degree: int) -> "ExtOperator":
        return cls.build(field, variance, {}, degree=degree)

    @classmethod
    def vertex_sum(cls, field: Field, variance: str, weights: Mapping[int, object]) -> "ExtOperator":
        """Sum of w(v) times the generator at v."""
        return cls.build(field, variance, {(v,): c for v, c in weights.items()}, degree=1)

    @property
    def coefficients(self) -> dict:
        return dict(self.terms)

    @property
    def support(self) -> set:
        return {v for mono, _ in self.terms for v in mono}

    def is_zero(self) -> bool:
        return not self.terms

    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    def _compatible(self, other: "ExtOperator") -> str:
        if self.field != other.field:
            raise ValueError("operators live over different fields")
        if self.variance == other.variance:
            return self.variance
        # scalars are variance-neutral
        if self.degree == 0:
            return other.variance
        if other.degree == 0:
            return self.variance
        raise ValueError("cannot combine lower and upper operators")

    def __add__(self, other: "ExtOperator") -> "ExtOperator":
        var = self._compatible(other)
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("sum of operators of different degree is not homogeneous")
        F = self.field
        acc = dict(self.terms)
        for k, c in other.terms:
            acc[k] = F.add(acc.get(k, F.zero), c)
        deg = self.degree if not self.is_zero() else other.degree
        return ExtOperator.build(F, var, acc, degree=deg)

    def __neg__(self) -> "ExtOperator":
        return self.scaled(self.field.neg(self.field.one))

    def __sub__(self, other: "ExtOperator") -> "ExtOperator":
        return self + (-other)

    def scaled(self, c) -> "ExtOperator":
        F = self.field
        c = F(c)
        return ExtOperator.build(F, self.variance, {k: F.mul(c, a) for k, a in self.terms}, degree=self.degree)

    def wedge(self, other: "ExtOperator") -> "ExtOperator":
        var = self._compatible(other)
        F = self.field
        acc: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                r = _sort_with_sign(m1 + m2)
                if r is None:
                    continue
                s, key = r
                c = F.mul(c1, c2)
                acc[key] = F.add(acc.get(key, F.zero), c if s > 0 else F.neg(c))
        return ExtOperator.build(F, var, acc, degree=self.degree + other.degree)

    __xor__ = wedge

    def __eq__(self, other):
        if not isinstance(other, ExtOperator):
            return NotImplemented
        if self.field != other.field or self.terms != other.terms:
            return False
        if self.is_zero():
            return True
        return self.degree == 0 or self.variance == other.variance

    def __hash__(self):
        return hash((self.variance, self.terms))

    def format(self, table: VertexTable | None = None) -> str:
        return format_operator(self, table)

    def __repr__(self):
        return f"ExtOperator({self.format()})"


def wedge(a: ExtOperator, b: ExtOperator) -> ExtOperator:
    return a.wedge(b)


def _act_on_edge(mono: tuple, variance: str, e: Edge, augmented: bool):
    sign = 1
    for v in reversed(mono):
        r = delete_vertex(v, e, augmented) if variance == LOWER else insert_vertex(v, e)
        if r is None:
            return None
        s, e = r
        sign *= s
    return sign, e


def apply_operator(op: ExtOperator, c: Chain, codomain: Iterable[Edge] | None = None,
                   augmented: bool = False) -> Chain:
    """Action of ``op`` on ``c``; with ``codomain`` given, results outside it raise.

    ``augmented`` lets ``p(v)`` send a vertex to the scalar line instead of zero.
    """
    F = c.field
    shift = -op.degree if op.variance == LOWER else op.degree
    out: dict = {}
    for e, a in c.terms.items():
        for mono, k in op.terms:
            r = _act_on_edge(mono, op.variance, e, augmented)
            if r is None:
                continue
            s, f = r
            coeff = F.mul(a, k)
            out[f] = F.add(out.get(f, F.zero), coeff if s > 0 else F.neg(coeff))
    result = Chain(F, c.degree + shift, out)
    if codomain is not None:
        allowed = set(codomain)
        for f in result.terms:
            if f not in allowed:
                raise NonAdmissibleError(f"operator sends a chain outside the codomain: hits {list(f)}")
    return result


def operator_matrix(op: ExtOperator, domain: Sequence[Edge], codomain: Sequence[Edge],
                    table: VertexTable | None = None) -> Matrix:
    """Matrix of ``op`` from span(domain) to span(codomain), column per domain edge."""
    F = op.field
    pos = {e: i for i, e in enumerate(codomain)}
    M = Matrix(F, len(codomain), len(domain))
    for j, e in enumerate(domain):
        for mono, k in op.terms:
            r = _act_on_edge(mono, op.variance, e, False)
            if r is None:
                continue
            s, f = r
            if f not in pos:
                src = table.label(e) if table else e
                dst = table.label(f) if table else f
                raise NonAdmissibleError(
                    f"operator maps {{{', '.join(map(str, src))}}} to {{{', '.join(map(str, dst))}}}, "
                    "which is not in the hypergraph")
            i = pos[f]
            M.rows[i][j] = F.add(M.rows[i][j], k if s > 0 else F.neg(k))
    return M


# -- admissibility ----------------------------------------------------------

def admissible_lower_vertices(H: Hypergraph) -> list[int]:
    """Vertices v with p(v) mapping chains on H into chains on H."""
    E = H.edges
    return [v for v in range(len(H.ambient))
            if all(e[:e.index(v)] + e[e.index(v) + 1:] in E for e in E if v in e and len(e) >= 2)]


def admissible_upper_vertices(H: Hypergraph) -> list[int]:
    """Vertices v with d(v) mapping chains on H into chains on H."""
    E = H.edges
    return [v for v in range(len(H.ambient))
            if all(insert_vertex(v, e)[1] in E for e in E if v not in e)]


def admissibility_witness(H: Hypergraph, v: int, variance: str):
    """An edge of H that the generator at v sends outside H, or None."""
    E = H.edges
    for e in H.sorted_edges():
        if variance == LOWER:
            r = delete_vertex(v, e)
        else:
            r = insert_vertex(v, e)
        if r is not None and r[1] not in E:
            return e, r[1]
    return None


def require_admissible(H: Hypergraph, op: ExtOperator) -> None:
    allowed = set(admissible_lower_vertices(H) if op.variance == LOWER else admissible_upper_vertices(H))
    for v in sorted(op.support):
        if v not in allowed:
            e, f = admissibility_witness(H, v, op.variance)
            gen = "p" if op.variance == LOWER else "d"
            names = H.ambient
            raise NonAdmissibleError(
                f"{gen}({names.names[v]}) is not admissible: it sends "
                f"{{{' '.join(names.label(e))}}} to {{{' '.join(names.label(f))}}}, which is missing")


# -- transport along vertex bijections ---------------------------------------

def induced_ext_map(phi: Mapping[int, int], op: ExtOperator) -> ExtOperator:
    """Relabel generators along the bijection ``phi`` (index to index)."""
    values = list(phi.values())
    if len(set(values)) != len(values):
        raise ValueError("vertex map is not injective")
    for v in op.support:
        if v not in phi:
            raise ValueError(f"vertex map is undefined on generator {v}")
    acc = {tuple(phi[v] for v in mono): c for mono, c in op.terms}
    return ExtOperator.build(op.field, op.variance, acc, degree=op.degree)


def index_map(source: VertexTable, target: VertexTable, names: Mapping[str, str]) -> dict[int, int]:
    return {source.index(a): target.index(b) for a, b in names.items()}


# -- expression grammar -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<gen>[pd])\s*\(\s*(?P<arg>[^()\s]+)\s*\)|(?P<sym>[-+*^/()]))")


class _Parser:
    def __init__(self, text: str, table: VertexTable, field: Field):
        self.text = text
        self.table = table
        self.field = field
        self.tokens: list[tuple[str, object, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise ParseError("unexpected character in operator expression", 1, col, text)
            start = m.start(m.lastgroup)
            if m.group("num") is not None:
                self.tokens.append(("num", int(m.group("num")), start))
            elif m.group("gen") is not None:
                name = m.group("arg")
                if name not in table:
                    raise ParseError(f"unknown vertex {name!r}", 1, m.start("arg"), text)
                self.tokens.append((m.group("gen"), table.index(name), start))
            else:
                self.tokens.append((m.group("sym"), None, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self, kind: str | None = None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            want = "end of expression" if kind == "end" else repr(kind)
            raise ParseError(f"expected {want}", 1, tok[2], self.text)
        self.i += 1
        return tok

    def error(self, msg: str):
        raise ParseError(msg, 1, self.peek()[2], self.text)

    # sum := ['-'] wedge (('+'|'-') wedge)*
    def parse_sum(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.parse_wedge()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op, _, col = self.take()
            rhs = self.parse_wedge()
            try:
                acc = acc + rhs if op == "+" else acc - rhs
            except ValueError as exc:
                raise ParseError(str(exc), 1, col, self.text) from None
        return acc

    # wedge := scaled ('^' scaled)*
    def parse_wedge(self):
        acc = self.parse_scaled()
        while self.peek()[0] == "^":
            _, _, col = self.take()
            rhs = self.parse_scaled()
            try:
                acc = acc.wedge(rhs)
            except ValueError as exc:
                raise ParseError(str(exc), 1, col, self.text) from None
        return acc

    # scaled := number ['/' number] ['*' scaled] | atom
    def parse_scaled(self):
        kind = self.peek()[0]
        if kind == "num":
            num = self.take()[1]
            den = 1
            if self.peek()[0] == "/":
                self.take()
                den = self.take("num")[1]
                if den == 0:
                    raise ParseError("division by zero", 1, self.tokens[self.i - 1][2], self.text)
            c = self.field(Fraction(num, den))
            if self.peek()[0] == "*":
                self.take()
                return self.parse_scaled().scaled(c)
            return ExtOperator.scalar(self.field, c)
        if kind == "-":
            self.take()
            return -self.parse_scaled()
        return self.parse_atom()

    def parse_atom(self):
        kind, val, col = self.peek()
        if kind in ("p", "d"):
            self.take()
            return ExtOperator.generator(self.field, LOWER if kind == "p" else UPPER, val)
        if kind == "(":
            self.take()
            inner = self.parse_sum()
            self.take(")")
            return inner
        self.error("expected p(v), d(v), a number or '('")


def parse_operator(text: str, table: VertexTable, field: Field) -> ExtOperator:
    """Parse e.g. ``p(v0)^p(v1) - 2*p(v2)^p(v3)`` over ``table``."""
    if not text.strip():
        raise ParseError("empty operator expression", 1, 0, text)
    parser = _Parser(text, table, field)
    op = parser.parse_sum()
    parser.take("end")
    return op


def _format_monomial(mono: tuple, variance: str, table: VertexTable | None) -> str:
    g = "p" if variance == LOWER else "d"
    name = (lambda v: table.names[v]) if table else (lambda v: f"v{v}")
    return "^".join(f"{g}({name(v)})" for v in mono)


def format_terms(terms: Iterable[tuple[tuple, object]], variance: str, field: Field,
                 table: VertexTable | None = None) -> str:
    """Render (monomial, coefficient) pairs in the given order."""
    parts = []
    for mono, c in terms:
        c = field.to_json(c)
        neg = (c < 0) if isinstance(c, int) else str(c).startswith("-")
        mag = (-c if isinstance(c, int) else str(c)[1:]) if neg else c
        body = _format_monomial(mono, variance, table)
        if not mono:
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag}*{body}"
        if parts:
            parts.append(("- " if neg else "+ ") + piece)
        else:
            parts.append(("-" if neg else "") + piece)
    return " ".join(parts) if parts else "0"


def format_operator(op: ExtOperator, table: VertexTable | None = None) -> str:
    return format_terms(op.terms, op.variance, op.field, table)
