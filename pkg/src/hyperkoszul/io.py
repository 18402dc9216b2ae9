"""Small text formats: vertex weights and vertex partitions."""
from __future__ import annotations

from .errors import ParseError
from .fields import Field
from .hypergraph import VertexTable


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line, raw


def parse_weights(text: str, table: VertexTable, field: Field, default=None) -> dict[int, object]:
    """Lines ``vertex value``; vertices not listed get ``default`` (error if None)."""
    weights: dict[int, object] = {}
    for lineno, line, raw in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected 'vertex value'", lineno)
        name, value = parts
        if name not in table:
            raise ParseError(f"unknown vertex {name!r}", lineno, raw.find(name), raw)
        idx = table.index(name)
        if idx in weights:
            raise ParseError(f"vertex {name!r} listed twice", lineno)
        try:
            weights[idx] = field(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), lineno, raw.find(value), raw) from None
    for i, name in enumerate(table.names):
        if i not in weights:
            if default is None:
                raise ParseError(f"no weight given for vertex {name!r}")
            weights[i] = field(default)
    return weights


def parse_partition(text: str, table: VertexTable) -> list[list[int]]:
    """One block per line (whitespace-separated names); blocks must be disjoint."""
    blocks: list[list[int]] = []
    seen: set[int] = set()
    for lineno, line, raw in _content_lines(text):
        block = []
        for name in line.split():
            if name not in table:
                raise ParseError(f"unknown vertex {name!r}", lineno, raw.find(name), raw)
            idx = table.index(name)
            if idx in seen:
                raise ParseError(f"vertex {name!r} appears in two blocks", lineno, raw.find(name), raw)
            seen.add(idx)
            block.append(idx)
        blocks.append(sorted(block))
    return blocks


def format_weights(weights: dict[int, object], table: VertexTable, field: Field) -> str:
    return "".join(f"{table.names[v]} {field.to_json(c)}\n" for v, c in sorted(weights.items()))
